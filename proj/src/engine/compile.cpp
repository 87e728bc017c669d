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

#include <algorithm>

#include "common/text_util.hpp"
#include "engine/program.hpp"
#include "lfe/error.hpp"

namespace lfe::engine {

namespace detail {

namespace {

bool is_literal(std::string_view s) {
  return !s.empty() && s.find_first_of("\\^$.|?*+()[]{}") == std::string_view::npos;
}

std::vector<std::string_view> split_alternatives(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (true) {
    size_t j = s.find('|', i);
    if (j == std::string_view::npos) {
      out.push_back(s.substr(i));
      return out;
    }
    out.push_back(s.substr(i, j - i));
    i = j + 1;
  }
}

}  // namespace

WordMatcher::WordMatcher(const std::string& pattern, bool icase) : icase_(icase) {
  auto fold = [&](std::string_view s) {
    return icase_ ? util::ascii_lower(s) : std::string(s);
  };
  const auto alts = split_alternatives(pattern);
  if (std::all_of(alts.begin(), alts.end(), is_literal)) {
    kind_ = Kind::kLiteral;
    for (auto a : alts) literals_.push_back(fold(a));
    return;
  }
  if (pattern.size() > 2 && pattern.ends_with(".*") &&
      is_literal(std::string_view(pattern).substr(0, pattern.size() - 2))) {
    kind_ = Kind::kPrefix;
    literals_.push_back(fold(std::string_view(pattern).substr(0, pattern.size() - 2)));
    return;
  }
  auto flags = std::regex::ECMAScript | std::regex::optimize;
  if (icase) flags |= std::regex::icase;
  regex_ = std::regex(pattern, flags);
}

bool WordMatcher::matches(std::string_view s) const {
  switch (kind_) {
    case Kind::kLiteral:
      for (const auto& lit : literals_) {
        if (icase_ ? util::iequals(s, lit) : s == lit) return true;
      }
      return false;
    case Kind::kPrefix: {
      const auto& p = literals_[0];
      if (s.size() < p.size() || s.find_first_of("\n\r") != std::string_view::npos) {
        return false;
      }
      const auto head = s.substr(0, p.size());
      return icase_ ? util::iequals(head, p) : head == p;
    }
    case Kind::kRegex:
      return std::regex_match(s.begin(), s.end(), regex_);
  }
  return false;
}

EvalCache::EvalCache(const Program& p)
    : symbol_memo_(p.test_count), text_memo_(p.test_count) {}

void EvalCache::reset_document(const Document& doc) {
  doc_ = &doc;
  for (auto& m : symbol_memo_) m.clear();
}

bool EvalCache::eval(const Predicate& pred, uint32_t token) {
  for (const Test& t : pred.tests) {
    if (!eval_test(t, token)) return false;
  }
  return true;
}

bool EvalCache::eval_test(const Test& t, uint32_t token) {
  const Token& tok = doc_->tokens()[token];
  SymbolId sym = 0;
  switch (t.attr) {
    case dsl::Attr::kWord:
    case dsl::Attr::kLower: {
      const auto s = t.attr == dsl::Attr::kWord ? doc_->surface(token) : doc_->lower(token);
      if (!t.matcher.general()) return t.matcher.matches(s);
      auto& memo = text_memo_[t.id];
      if (auto it = memo.find(s); it != memo.end()) return it->second;
      const bool r = t.matcher.matches(s);
      memo.emplace(std::string(s), r);
      return r;
    }
    case dsl::Attr::kPos: sym = tok.pos; break;
    case dsl::Attr::kNer: sym = tok.ner; break;
    case dsl::Attr::kShape: sym = tok.shape; break;
  }
  auto& memo = symbol_memo_[t.id];
  if (sym >= memo.size()) memo.resize(sym + 1, -1);
  if (memo[sym] < 0) memo[sym] = t.matcher.matches(doc_->symbol(sym)) ? 1 : 0;
  return memo[sym] == 1;
}

namespace {

class Compiler {
 public:
  Compiler(Program& p, const ConceptSchema& schema) : p_(p), schema_(schema) {}

  void run() {
    const auto& lf = p_.lf;
    if (!schema_.resolve(lf.concept_id)) {
      throw DefectError("LF '" + lf.name + "' names unknown concept '" + lf.concept_id + "'");
    }
    p_.root = group(lf.pattern, false, false);
    p_.min_len = p_.nodes[p_.root].min_len;
    if (p_.captures.empty()) throw DefectError("LF '" + lf.name + "' has no capture");
    if (p_.min_len < 1) throw DefectError("LF '" + lf.name + "' can match zero tokens");

    for (const dsl::Guard& g : lf.guards) {
      CompiledGuard cg;
      cg.kind = g.kind;
      cg.negated = g.negated;
      for (const std::string& alt : g.alternatives) {
        std::vector<uint32_t> phrase;
        size_t i = 0;
        while (i < alt.size()) {
          size_t j = alt.find(' ', i);
          if (j == std::string::npos) j = alt.size();
          if (j > i) phrase.push_back(predicate({{dsl::Attr::kWord, alt.substr(i, j - i)}}));
          i = j + 1;
        }
        if (phrase.empty()) throw DefectError("LF '" + lf.name + "' has an empty guard phrase");
        cg.phrases.push_back(std::move(phrase));
      }
      if (cg.phrases.empty()) throw DefectError("LF '" + lf.name + "' has an empty guard");
      p_.guards.push_back(std::move(cg));
    }
  }

 private:
  uint32_t add(Node n) {
    p_.nodes.push_back(std::move(n));
    return static_cast<uint32_t>(p_.nodes.size() - 1);
  }

  uint32_t predicate(const std::vector<dsl::AttrTest>& tests) {
    Predicate pred;
    for (const auto& t : tests) {
      try {
        pred.tests.push_back({t.attr, WordMatcher(t.value, t.attr == dsl::Attr::kWord),
                              p_.test_count++});
      } catch (const std::regex_error& e) {
        throw DefectError("LF '" + p_.lf.name + "' has invalid regex '" + t.value +
                          "': " + e.what());
      }
    }
    p_.preds.push_back(std::move(pred));
    return static_cast<uint32_t>(p_.preds.size() - 1);
  }

  uint32_t pred_node(const std::vector<dsl::AttrTest>& tests) {
    Node n;
    n.kind = Node::Kind::kPred;
    n.pred = predicate(tests);
    n.min_len = 1;
    return add(std::move(n));
  }

  void finish_items(Node& n) {
    n.items_rest.assign(n.items.size() + 1, 0);
    for (size_t i = n.items.size(); i-- > 0;) {
      n.items_rest[i] = n.items_rest[i + 1] + p_.nodes[n.items[i]].min_len;
    }
    n.min_len = n.items_rest[0];
  }

  uint32_t group(std::span<const dsl::PatternNode> seq, bool in_capture, bool repeated) {
    Node n;
    n.kind = Node::Kind::kGroup;
    for (const auto& item : seq) n.items.push_back(node(item, in_capture, repeated));
    finish_items(n);
    return add(std::move(n));
  }

  uint32_t node(const dsl::PatternNode& pn, bool in_capture, bool repeated) {
    return std::visit(
        [&](const auto& v) -> uint32_t {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, dsl::WordLit>) {
            if (v.words.empty()) throw DefectError("empty word literal");
            if (v.words.size() == 1) return pred_node({{dsl::Attr::kWord, v.words[0]}});
            Node g;
            g.kind = Node::Kind::kGroup;
            for (const auto& w : v.words) g.items.push_back(pred_node({{dsl::Attr::kWord, w}}));
            finish_items(g);
            return add(std::move(g));
          } else if constexpr (std::is_same_v<T, dsl::TokenClass>) {
            return pred_node(v.tests);
          } else if constexpr (std::is_same_v<T, dsl::Wildcard>) {
            return pred_node({});
          } else if constexpr (std::is_same_v<T, dsl::Group>) {
            return group(v.items, in_capture, repeated);
          } else if constexpr (std::is_same_v<T, dsl::Capture>) {
            capture_slot(v, in_capture, repeated);
            const uint32_t slot = static_cast<uint32_t>(p_.captures.size() - 1);
            Node c;
            c.kind = Node::Kind::kCapture;
            c.slot = slot;
            for (const auto& item : v.items) c.items.push_back(node(item, true, repeated));
            finish_items(c);
            if (c.min_len < 1) {
              throw DefectError("capture '" + v.name + "' can match zero tokens");
            }
            return add(std::move(c));
          } else {
            if (!v.child || v.min < 0 || v.min > v.max || v.max > dsl::kMaxRepeat) {
              throw DefectError("malformed quantifier");
            }
            if (std::holds_alternative<dsl::Capture>(v.child->value)) {
              throw DefectError("quantifier wraps a capture directly");
            }
            Node q;
            q.kind = Node::Kind::kQuant;
            q.min = v.min;
            q.max = v.max;
            q.child = node(*v.child, in_capture, repeated || v.max > 1);
            q.min_len = q.min * p_.nodes[q.child].min_len;
            return add(std::move(q));
          }
        },
        pn.value);
  }

  void capture_slot(const dsl::Capture& c, bool in_capture, bool repeated) {
    if (in_capture) throw DefectError("capture '" + c.name + "' is nested");
    if (repeated) throw DefectError("capture '" + c.name + "' is repeated");
    const Concept* concept_ptr = dsl::resolve_capture(c.name, schema_);
    if (!concept_ptr) throw DefectError("capture '" + c.name + "' names no concept");
    for (const auto& s : p_.captures) {
      if (s.name == c.name) throw DefectError("capture '" + c.name + "' is duplicated");
    }
    p_.captures.push_back({c.name, concept_ptr->id, schema_.index_of(concept_ptr->id),
                           concept_ptr->kind == ConceptKind::kClause});
  }

  Program& p_;
  const ConceptSchema& schema_;
};

}  // namespace

}  // namespace detail

CompiledLF::CompiledLF(std::shared_ptr<const detail::Program> p) : program_(std::move(p)) {}
CompiledLF::~CompiledLF() = default;

const std::string& CompiledLF::name() const { return program_->lf.name; }
const dsl::LabelingFunction& CompiledLF::source() const { return program_->lf; }
int CompiledLF::priority() const { return program_->lf.priority; }
std::span<const CaptureSlot> CompiledLF::captures() const { return program_->captures; }
int CompiledLF::min_match_len() const { return program_->min_len; }

size_t CompiledLF::predicate_count() const {
  return static_cast<size_t>(
      std::count_if(program_->nodes.begin(), program_->nodes.end(),
                    [](const detail::Node& n) { return n.kind == detail::Node::Kind::kPred; }));
}

CompiledLF compile(const dsl::LabelingFunction& lf, const ConceptSchema& schema) {
  auto p = std::make_shared<detail::Program>();
  p->lf = lf;
  detail::Compiler(*p, schema).run();
  return CompiledLF(std::move(p));
}

std::vector<CompiledLF> compile_ruleset(std::span<const dsl::LabelingFunction> lfs,
                                        const ConceptSchema& schema,
                                        std::vector<dsl::Diagnostic>& diags) {
  auto found = dsl::validate(lfs, schema);
  diags.insert(diags.end(), found.begin(), found.end());
  std::vector<CompiledLF> out;
  if (dsl::has_errors(diags)) return out;
  out.reserve(lfs.size());
  for (const auto& lf : lfs) out.push_back(compile(lf, schema));
  return out;
}

}  // namespace lfe::engine
