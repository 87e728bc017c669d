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

// Reference matcher. Every pattern is expanded into all of its derivations
// (one flat list of token tests per assignment of quantifier counts), each
// derivation is checked at each start, and the preferred one is selected by
// comparing choice vectors. It shares no code with the backtracking matcher.

#include <algorithm>
#include <map>
#include <optional>
#include <regex>

#include "lfe/engine.hpp"
#include "lfe/error.hpp"

namespace lfe::engine {

namespace {

constexpr size_t kMaxExpansions = 2000000;

struct FlatItem {
  enum Kind { kToken, kOpen, kClose } kind = kToken;
  const std::vector<dsl::AttrTest>* tests = nullptr;  // kToken; null = wildcard
  const std::string* word = nullptr;                  // kToken from a literal
  int slot = -1;                                      // kOpen / kClose
};

struct Expansion {
  std::vector<int> choices;
  std::vector<FlatItem> items;
  int tokens = 0;
};

using Expansions = std::vector<Expansion>;

class Expander {
 public:
  Expander(const std::vector<std::string>& capture_names, int max_tokens)
      : names_(capture_names), max_tokens_(max_tokens) {}

  Expansions seq(const std::vector<dsl::PatternNode>& items) {
    Expansions acc{Expansion{}};
    for (const auto& item : items) acc = product(acc, node(item));
    return acc;
  }

 private:
  Expansions product(const Expansions& a, const Expansions& b) {
    Expansions out;
    for (const auto& x : a) {
      for (const auto& y : b) {
        if (x.tokens + y.tokens > max_tokens_) continue;
        Expansion e = x;
        e.choices.insert(e.choices.end(), y.choices.begin(), y.choices.end());
        e.items.insert(e.items.end(), y.items.begin(), y.items.end());
        e.tokens += y.tokens;
        out.push_back(std::move(e));
        if (out.size() > kMaxExpansions) {
          throw UserError("pattern has too many derivations for the reference matcher");
        }
      }
    }
    return out;
  }

  Expansions node(const dsl::PatternNode& n) {
    if (const auto* w = std::get_if<dsl::WordLit>(&n.value)) {
      Expansion e;
      for (const auto& word : w->words) {
        FlatItem it;
        it.word = &word;
        e.items.push_back(it);
      }
      e.tokens = static_cast<int>(w->words.size());
      return {e};
    }
    if (const auto* c = std::get_if<dsl::TokenClass>(&n.value)) {
      Expansion e;
      FlatItem it;
      it.tests = &c->tests;
      e.items.push_back(it);
      e.tokens = 1;
      return {e};
    }
    if (std::holds_alternative<dsl::Wildcard>(n.value)) {
      Expansion e;
      e.items.push_back(FlatItem{});
      e.tokens = 1;
      return {e};
    }
    if (const auto* g = std::get_if<dsl::Group>(&n.value)) return seq(g->items);
    if (const auto* cap = std::get_if<dsl::Capture>(&n.value)) {
      const int slot = static_cast<int>(
          std::find(names_.begin(), names_.end(), cap->name) - names_.begin());
      Expansion open;
      open.items.push_back({FlatItem::kOpen, nullptr, nullptr, slot});
      Expansion close;
      close.items.push_back({FlatItem::kClose, nullptr, nullptr, slot});
      return product(product({open}, seq(cap->items)), {close});
    }
    const auto& q = std::get<dsl::Quantified>(n.value);
    const Expansions body = node(*q.child);
    Expansions out;
    for (int count = q.min; count <= q.max; ++count) {
      Expansion head;
      head.choices.push_back(count);
      Expansions acc{head};
      for (int i = 0; i < count && !acc.empty(); ++i) acc = product(acc, body);
      out.insert(out.end(), acc.begin(), acc.end());
    }
    return out;
  }

  const std::vector<std::string>& names_;
  int max_tokens_;
};

class RegexBank {
 public:
  bool match(const std::string& pattern, std::string_view s, bool icase) {
    auto key = std::make_pair(pattern, icase);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      auto flags = std::regex::ECMAScript;
      if (icase) flags |= std::regex::icase;
      it = cache_.emplace(key, std::regex(pattern, flags)).first;
    }
    return std::regex_match(s.begin(), s.end(), it->second);
  }

 private:
  std::map<std::pair<std::string, bool>, std::regex> cache_;
};

struct OracleWindow {
  CharRange range;
  std::vector<uint32_t> tokens;
};

std::vector<OracleWindow> oracle_windows(const Document& doc, dsl::Scope scope) {
  const auto toks = doc.tokens();
  const auto size = static_cast<uint32_t>(doc.text().size());
  auto visible_in = [&](uint32_t lo, uint32_t hi) {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < toks.size(); ++i) {
      if (!toks[i].boilerplate && toks[i].range.start >= lo && toks[i].range.start < hi) {
        out.push_back(i);
      }
    }
    return out;
  };
  std::vector<OracleWindow> out;
  if (scope == dsl::Scope::kSentence) {
    for (const Sentence& s : doc.sentences()) {
      OracleWindow w{s.range, {}};
      for (uint32_t i = s.first_token; i <= s.last_token; ++i) {
        if (!toks[i].boilerplate) w.tokens.push_back(i);
      }
      out.push_back(std::move(w));
    }
  } else if (scope == dsl::Scope::kDocument) {
    out.push_back({{0, size}, visible_in(0, size)});
  } else {
    const auto secs = doc.sections();
    std::vector<CharRange> top;
    for (size_t i = 0; i < secs.size(); ++i) {
      bool nested = secs[i].range.empty();
      for (size_t j = 0; j < secs.size() && !nested; ++j) {
        nested = j != i && secs[j].range.contains(secs[i].range) &&
                 secs[j].range != secs[i].range;
      }
      if (!nested) top.push_back(secs[i].range);
    }
    std::sort(top.begin(), top.end());
    uint32_t cursor = 0;
    std::vector<CharRange> ranges;
    for (const CharRange& r : top) {
      if (r.start > cursor) ranges.push_back({cursor, r.start});
      ranges.push_back(r);
      cursor = r.end;
    }
    if (cursor < size || ranges.empty()) ranges.push_back({cursor, size});
    for (const CharRange& r : ranges) out.push_back({r, visible_in(r.start, r.end)});
  }
  return out;
}

}  // namespace

std::vector<Match> brute_force_match(const dsl::LabelingFunction& lf,
                                     const ConceptSchema& schema, const Document& doc) {
  size_t visible = 0;
  for (const Token& t : doc.tokens()) visible += t.boilerplate ? 0 : 1;
  if (visible > kOracleMaxTokens) {
    throw UserError("reference matcher accepts at most " +
                    std::to_string(kOracleMaxTokens) + " tokens");
  }
  for (const auto& name : lf.capture_names()) {
    if (!dsl::resolve_capture(name, schema)) {
      throw UserError("capture '" + name + "' names no concept");
    }
  }

  RegexBank regex;
  const auto toks = doc.tokens();
  auto token_ok = [&](const FlatItem& it, uint32_t tok) {
    if (it.word) return regex.match(*it.word, doc.surface(tok), true);
    if (!it.tests) return true;
    for (const dsl::AttrTest& t : *it.tests) {
      std::string_view value;
      switch (t.attr) {
        case dsl::Attr::kWord: value = doc.surface(tok); break;
        case dsl::Attr::kLower: value = doc.lower(tok); break;
        case dsl::Attr::kPos: value = doc.pos(tok); break;
        case dsl::Attr::kNer: value = doc.ner(tok); break;
        case dsl::Attr::kShape: value = doc.shape(tok); break;
      }
      if (!regex.match(t.value, value, t.attr == dsl::Attr::kWord)) return false;
    }
    return true;
  };
  auto phrase_at = [&](const std::string& phrase, const std::vector<uint32_t>& w,
                       size_t pos) {
    std::vector<std::string> words;
    size_t i = 0;
    while (i < phrase.size()) {
      size_t j = phrase.find(' ', i);
      if (j == std::string::npos) j = phrase.size();
      if (j > i) words.push_back(phrase.substr(i, j - i));
      i = j + 1;
    }
    if (words.empty() || pos + words.size() > w.size()) return false;
    for (size_t k = 0; k < words.size(); ++k) {
      if (!regex.match(words[k], doc.surface(w[pos + k]), true)) return false;
    }
    return true;
  };

  const auto names = lf.capture_names();
  const Expansions all =
      Expander(names, static_cast<int>(kOracleMaxTokens)).seq(lf.pattern);

  std::vector<Match> out;
  const auto windows = oracle_windows(doc, lf.scope);
  for (size_t wi = 0; wi < windows.size(); ++wi) {
    const auto& w = windows[wi].tokens;
    bool gated = true;
    for (const dsl::Guard& g : lf.guards) {
      bool found = false;
      for (const auto& alt : g.alternatives) {
        if (g.kind == dsl::GuardKind::kStarts) {
          found = found || phrase_at(alt, w, 0);
        } else {
          for (size_t p = 0; p < w.size(); ++p) found = found || phrase_at(alt, w, p);
        }
      }
      if (found == g.negated) gated = false;
    }
    if (!gated) continue;

    size_t pos = 0;
    while (pos < w.size()) {
      bool emitted = false;
      for (size_t start = pos; start < w.size() && !emitted; ++start) {
        const Expansion* best = nullptr;
        size_t best_end = 0;
        std::vector<std::pair<int, int>> best_caps;
        for (const Expansion& e : all) {
          if (e.tokens == 0 || start + e.tokens > w.size()) continue;
          if (best && !(best->choices < e.choices)) continue;
          size_t at = start;
          std::vector<std::pair<int, int>> caps(names.size(), {-1, -1});
          bool ok = true;
          for (const FlatItem& it : e.items) {
            if (it.kind == FlatItem::kOpen) {
              caps[it.slot].first = static_cast<int>(at);
            } else if (it.kind == FlatItem::kClose) {
              caps[it.slot].second = static_cast<int>(at);
            } else if (!token_ok(it, w[at++])) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          best = &e;
          best_end = at;
          best_caps = std::move(caps);
        }
        if (!best) continue;
        Match m;
        m.window = static_cast<uint32_t>(wi);
        m.first_token = w[start];
        m.last_token = w[best_end - 1];
        m.full_range = {toks[m.first_token].range.start, toks[m.last_token].range.end};
        for (size_t slot = 0; slot < best_caps.size(); ++slot) {
          const auto [b, e] = best_caps[slot];
          if (b < 0 || e <= b) continue;
          CapturedSpan cs;
          cs.slot = static_cast<uint32_t>(slot);
          cs.first_token = w[b];
          cs.last_token = w[e - 1];
          cs.range = {toks[cs.first_token].range.start, toks[cs.last_token].range.end};
          m.captures.push_back(cs);
        }
        out.push_back(std::move(m));
        pos = std::max(best_end, start + 1);
        emitted = true;
      }
      if (!emitted) break;
    }
  }
  return out;
}

}  // namespace lfe::engine
