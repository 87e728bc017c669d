// Copyright 2026 The lfe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Recursive-descent parser for rulesets. Errors are collected, never thrown;
// after an error the parser resynchronizes at the next `lf` keyword.

#include <set>

#include "common/text_util.hpp"
#include "lfe/dsl.hpp"

namespace lfe::dsl {

namespace {

constexpr int kMaxNesting = 32;

enum class Tok {
  kIdent,
  kInt,
  kStr,
  kLBrace,
  kRBrace,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kColon,
  kEquals,
  kPipe,
  kQuestion,
  kEnd,
  kInvalid,
};

struct Lexeme {
  Tok kind = Tok::kEnd;
  std::string text;  // identifier, digits, or unescaped string value
  SourcePos pos;
  std::string error;  // for kInvalid
};

std::string describe(const Lexeme& t) {
  switch (t.kind) {
    case Tok::kIdent: return "'" + t.text + "'";
    case Tok::kInt: return "integer " + t.text;
    case Tok::kStr: return "string";
    case Tok::kEnd: return "end of input";
    case Tok::kInvalid: return "invalid input";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Lexeme next() {
    skip_space_and_comments();
    Lexeme t;
    t.pos = {line_, col_};
    if (i_ >= src_.size()) return t;
    const auto c = static_cast<unsigned char>(src_[i_]);
    if (std::isalpha(c) || c == '_') {
      size_t j = i_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) {
        ++j;
      }
      t.kind = Tok::kIdent;
      t.text = std::string(src_.substr(i_, j - i_));
      advance(j - i_);
      return t;
    }
    if (util::is_digit(c)) {
      size_t j = i_;
      while (j < src_.size() && util::is_digit(static_cast<unsigned char>(src_[j]))) ++j;
      t.kind = Tok::kInt;
      t.text = std::string(src_.substr(i_, j - i_));
      advance(j - i_);
      return t;
    }
    if (c == '"') return string_literal(t);

    static constexpr std::string_view kPunct = "{}()[],:=|?";
    static constexpr Tok kKinds[] = {Tok::kLBrace,   Tok::kRBrace,   Tok::kLParen,
                                     Tok::kRParen,   Tok::kLBracket, Tok::kRBracket,
                                     Tok::kComma,    Tok::kColon,    Tok::kEquals,
                                     Tok::kPipe,     Tok::kQuestion};
    if (auto k = kPunct.find(static_cast<char>(c)); k != std::string_view::npos) {
      t.kind = kKinds[k];
      t.text = std::string(1, static_cast<char>(c));
      advance(1);
      return t;
    }
    t.kind = Tok::kInvalid;
    t.text = std::string(1, static_cast<char>(c));
    t.error = "unexpected character";
    advance(1);
    return t;
  }

 private:
  void advance(size_t n) {
    for (size_t k = 0; k < n && i_ < src_.size(); ++k, ++i_) {
      if (src_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space_and_comments() {
    while (i_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[i_]);
      if (util::is_space(c)) {
        advance(1);
      } else if (c == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  // Only \" and \\ are escapes; any other backslash is kept for the regex.
  Lexeme string_literal(Lexeme t) {
    advance(1);
    std::string value;
    while (i_ < src_.size()) {
      const char c = src_[i_];
      if (c == '"') {
        advance(1);
        t.kind = Tok::kStr;
        t.text = std::move(value);
        return t;
      }
      if (c == '\n') break;
      if (c == '\\' && i_ + 1 < src_.size() &&
          (src_[i_ + 1] == '"' || src_[i_ + 1] == '\\')) {
        value.push_back(src_[i_ + 1]);
        advance(2);
        continue;
      }
      value.push_back(c);
      advance(1);
    }
    t.kind = Tok::kInvalid;
    t.error = "unterminated string";
    return t;
  }

  std::string_view src_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct SyntaxError {
  Diagnostic diag;
};

std::vector<std::string> split_words(std::string_view phrase) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < phrase.size()) {
    while (i < phrase.size() && util::is_space(static_cast<unsigned char>(phrase[i]))) ++i;
    size_t j = i;
    while (j < phrase.size() && !util::is_space(static_cast<unsigned char>(phrase[j]))) ++j;
    if (j > i) out.emplace_back(phrase.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { cur_ = lexer_.next(); }

  ParseResult run() {
    ParseResult result;
    std::set<std::string> names;
    while (cur_.kind != Tok::kEnd) {
      try {
        LabelingFunction lf = parse_lf();
        if (!names.insert(lf.name).second) {
          Diagnostic d;
          d.code = "duplicate-name";
          d.message = "labeling function '" + lf.name + "' is defined more than once";
          d.line = lf.pos.line;
          d.col = lf.pos.col;
          d.lf = lf.name;
          result.diagnostics.push_back(std::move(d));
          continue;
        }
        result.lfs.push_back(std::move(lf));
      } catch (const SyntaxError& e) {
        result.diagnostics.push_back(e.diag);
        resync();
      }
    }
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& message,
                         std::vector<std::string> expected = {},
                         std::string code = "syntax") {
    Diagnostic d;
    d.code = std::move(code);
    d.line = cur_.pos.line;
    d.col = cur_.pos.col;
    d.lf = current_lf_;
    d.expected = std::move(expected);
    if (cur_.kind == Tok::kInvalid) {
      d.message = cur_.error;
    } else {
      d.message = message.empty() ? "unexpected " + describe(cur_) : message;
    }
    throw SyntaxError{std::move(d)};
  }

  // Skip at least one token, then up to the next `lf`.
  void resync() {
    if (cur_.kind != Tok::kEnd) cur_ = lexer_.next();
    while (cur_.kind != Tok::kEnd && !is_kw("lf")) cur_ = lexer_.next();
    current_lf_.clear();
  }

  bool is_kw(std::string_view kw) const {
    return cur_.kind == Tok::kIdent && cur_.text == kw;
  }

  Lexeme take() {
    Lexeme t = std::move(cur_);
    cur_ = lexer_.next();
    return t;
  }

  Lexeme expect(Tok kind, std::string_view what) {
    if (cur_.kind != kind) fail("", {std::string(what)});
    return take();
  }

  void expect_kw(std::string_view kw) {
    if (!is_kw(kw)) fail("", {"'" + std::string(kw) + "'"});
    take();
  }

  int parse_int(std::string_view what) {
    if (cur_.kind != Tok::kInt) fail("", {std::string(what)});
    if (cur_.text.size() > 6) fail("integer too large", {}, "quantifier-range");
    return std::stoi(take().text);
  }

  LabelingFunction parse_lf() {
    LabelingFunction lf;
    lf.pos = cur_.pos;
    expect_kw("lf");
    lf.name = expect(Tok::kIdent, "labeling function name").text;
    current_lf_ = lf.name;
    expect_kw("for");
    lf.concept_id = expect(Tok::kIdent, "concept id").text;

    if (is_kw("priority")) {
      take();
      lf.priority = parse_int("priority value");
      if (lf.priority < 1) fail("priority must be at least 1", {}, "priority-range");
    }
    if (is_kw("scope")) {
      take();
      if (is_kw("sentence")) {
        lf.scope = Scope::kSentence;
      } else if (is_kw("section")) {
        lf.scope = Scope::kSection;
      } else if (is_kw("document")) {
        lf.scope = Scope::kDocument;
      } else {
        fail("", {"'sentence'", "'section'", "'document'"});
      }
      take();
    }
    if (cur_.kind != Tok::kLBrace) {
      std::vector<std::string> exp{"'{'"};
      if (lf.scope == Scope::kSentence) exp.insert(exp.begin(), "'scope'");
      if (lf.priority == kDefaultPriority) exp.insert(exp.begin(), "'priority'");
      fail("", exp);
    }
    take();

    while (is_kw("require")) lf.guards.push_back(parse_guard());
    if (!is_kw("match")) fail("", {"'require'", "'match'"});
    take();
    expect(Tok::kColon, "':'");
    lf.pattern = parse_seq(Tok::kRBrace, 0, false);
    expect(Tok::kRBrace, "'}'");
    current_lf_.clear();
    return lf;
  }

  Guard parse_guard() {
    Guard g;
    g.pos = cur_.pos;
    take();  // require
    if (is_kw("not")) {
      take();
      g.negated = true;
    }
    if (is_kw("starts")) {
      g.kind = GuardKind::kStarts;
    } else if (is_kw("contains")) {
      g.kind = GuardKind::kContains;
    } else {
      fail("", g.negated ? std::vector<std::string>{"'starts'", "'contains'"}
                         : std::vector<std::string>{"'not'", "'starts'", "'contains'"});
    }
    take();
    expect(Tok::kLParen, "'('");
    while (true) {
      if (cur_.kind != Tok::kStr) fail("", {"string"});
      const auto pos = cur_.pos;
      auto words = split_words(take().text);
      if (words.empty()) {
        Diagnostic d;
        d.code = "empty-regex";
        d.message = "guard phrase is empty";
        d.line = pos.line;
        d.col = pos.col;
        d.lf = current_lf_;
        throw SyntaxError{std::move(d)};
      }
      g.alternatives.push_back(join(words));
      if (cur_.kind == Tok::kPipe) {
        take();
        continue;
      }
      break;
    }
    expect(Tok::kRParen, "')' or '|'");
    return g;
  }

  static bool starts_item(const Lexeme& t) {
    return t.kind == Tok::kStr || t.kind == Tok::kLBracket ||
           t.kind == Tok::kLParen || t.kind == Tok::kIdent;
  }

  std::vector<PatternNode> parse_seq(Tok closer, int depth, bool in_capture) {
    if (depth > kMaxNesting) fail("pattern nested too deeply", {}, "depth");
    std::vector<PatternNode> items;
    while (starts_item(cur_)) items.push_back(parse_item(depth, in_capture));
    if (items.empty()) fail("", {"string", "'['", "'('", "capture name"});
    if (cur_.kind != closer) {
      fail("", {"string", "'['", "'('", "capture name", "'{'", "'?'",
                closer == Tok::kRBrace ? "'}'" : "')'"});
    }
    return items;
  }

  PatternNode parse_item(int depth, bool in_capture) {
    PatternNode atom = parse_atom(depth, in_capture);
    if (cur_.kind != Tok::kLBrace && cur_.kind != Tok::kQuestion) return atom;

    const SourcePos qpos = cur_.pos;
    int lo = 0;
    int hi = 1;
    if (cur_.kind == Tok::kQuestion) {
      take();
    } else {
      take();
      lo = parse_int("minimum repeat count");
      expect(Tok::kComma, "','");
      hi = parse_int("maximum repeat count");
      if (cur_.kind != Tok::kRBrace) fail("", {"'}'"});
      if (lo > hi || hi > kMaxRepeat) {
        Diagnostic d;
        d.code = "quantifier-range";
        d.message = "quantifier bounds {" + std::to_string(lo) + "," +
                    std::to_string(hi) + "} must satisfy 0 <= min <= max <= " +
                    std::to_string(kMaxRepeat);
        d.line = qpos.line;
        d.col = qpos.col;
        d.lf = current_lf_;
        throw SyntaxError{std::move(d)};
      }
      take();
    }
    // A quantifier never wraps a capture directly; the capture is grouped.
    if (std::holds_alternative<Capture>(atom.value)) {
      const SourcePos apos = atom.pos;
      PatternNode group{Group{{std::move(atom)}}, apos};
      atom = std::move(group);
    }
    PatternNode node;
    node.pos = atom.pos;
    node.value = Quantified{std::make_shared<const PatternNode>(std::move(atom)), lo, hi};
    return node;
  }

  PatternNode parse_atom(int depth, bool in_capture) {
    PatternNode node;
    node.pos = cur_.pos;
    switch (cur_.kind) {
      case Tok::kStr: {
        auto words = split_words(cur_.text);
        if (words.empty()) fail("empty word literal", {}, "empty-regex");
        take();
        node.value = WordLit{std::move(words)};
        return node;
      }
      case Tok::kLBracket: {
        take();
        if (cur_.kind == Tok::kRBracket) {
          take();
          node.value = Wildcard{};
          return node;
        }
        TokenClass cls;
        while (true) {
          cls.tests.push_back(parse_attr_test());
          if (cur_.kind == Tok::kComma) {
            take();
            continue;
          }
          break;
        }
        expect(Tok::kRBracket, "']' or ','");
        node.value = std::move(cls);
        return node;
      }
      case Tok::kLParen: {
        take();
        auto items = parse_seq(Tok::kRParen, depth + 1, in_capture);
        take();
        node.value = Group{std::move(items)};
        return node;
      }
      case Tok::kIdent: {
        std::string name = take().text;
        expect(Tok::kColon, "':'");
        if (in_capture) {
          Diagnostic d;
          d.code = "nested-capture";
          d.message = "capture '" + name + "' is nested inside another capture";
          d.line = node.pos.line;
          d.col = node.pos.col;
          d.lf = current_lf_;
          throw SyntaxError{std::move(d)};
        }
        expect(Tok::kLParen, "'('");
        auto items = parse_seq(Tok::kRParen, depth + 1, true);
        take();
        node.value = Capture{std::move(name), std::move(items)};
        return node;
      }
      default:
        fail("", {"string", "'['", "'('", "capture name"});
    }
  }

  AttrTest parse_attr_test() {
    if (cur_.kind != Tok::kIdent) {
      fail("", {"'word'", "'lower'", "'pos'", "'ner'", "'shape'"});
    }
    AttrTest t;
    const auto& a = cur_.text;
    if (a == "word") {
      t.attr = Attr::kWord;
    } else if (a == "lower") {
      t.attr = Attr::kLower;
    } else if (a == "pos") {
      t.attr = Attr::kPos;
    } else if (a == "ner") {
      t.attr = Attr::kNer;
    } else if (a == "shape") {
      t.attr = Attr::kShape;
    } else {
      fail("unknown token attribute '" + a + "'",
           {"'word'", "'lower'", "'pos'", "'ner'", "'shape'"});
    }
    take();
    expect(Tok::kEquals, "'='");
    if (cur_.kind != Tok::kStr) fail("", {"string"});
    t.value = take().text;
    return t;
  }

  Lexer lexer_;
  Lexeme cur_;
  std::string current_lf_;
};

}  // namespace

ParseResult parse_ruleset(std::string_view source) {
  Parser parser(source);
  ParseResult result = parser.run();
  if (result.lfs.empty() && result.diagnostics.empty()) {
    Diagnostic d;
    d.code = "syntax";
    d.message = "ruleset contains no labeling functions";
    d.line = 1;
    d.col = 1;
    d.expected = {"'lf'"};
    result.diagnostics.push_back(std::move(d));
  }
  return result;
}

}  // namespace lfe::dsl
