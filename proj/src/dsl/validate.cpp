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

#include <regex>
#include <set>

#include "common/text_util.hpp"
#include "lfe/dsl.hpp"

namespace lfe::dsl {

namespace {

class Checker {
 public:
  Checker(const LabelingFunction& lf, const ConceptSchema& schema,
          std::vector<Diagnostic>& out)
      : lf_(lf), schema_(schema), out_(out) {}

  void run() {
    if (!schema_.resolve(lf_.concept_id)) {
      report("unknown-concept", "unknown concept '" + lf_.concept_id + "'", lf_.pos);
    }
    for (const Guard& g : lf_.guards) check_guard(g);

    int captures = 0;
    int mandatory = 0;
    walk(lf_.pattern, /*max_repeat=*/1, /*optional=*/false, captures, mandatory);
    if (captures == 0) {
      report("no-capture", "pattern has no capture", lf_.pos);
    } else if (mandatory == 0) {
      report("optional-captures", "every capture is optional, so a match may emit nothing",
             lf_.pos, Diagnostic::Severity::kWarning);
    }
    if (min_length(std::span<const PatternNode>(lf_.pattern)) == 0) {
      report("zero-length", "pattern can match zero tokens", lf_.pos);
    }
  }

 private:
  void report(std::string code, std::string message, SourcePos pos,
              Diagnostic::Severity sev = Diagnostic::Severity::kError) {
    Diagnostic d;
    d.severity = sev;
    d.code = std::move(code);
    d.message = std::move(message);
    d.line = pos.line;
    d.col = pos.col;
    d.lf = lf_.name;
    out_.push_back(std::move(d));
  }

  // Returns false if the regex was reported.
  bool check_regex(const std::string& pattern, SourcePos pos) {
    try {
      std::regex re(pattern, std::regex::ECMAScript | std::regex::icase);
      if (std::regex_match(std::string(), re)) {
        report("empty-regex", "regex '" + pattern + "' matches the empty string", pos);
        return false;
      }
    } catch (const std::regex_error& e) {
      report("bad-regex", "invalid regex '" + pattern + "': " + e.what(), pos);
      return false;
    }
    return true;
  }

  static std::vector<std::string> words_of(const std::string& phrase) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < phrase.size()) {
      size_t j = phrase.find(' ', i);
      if (j == std::string::npos) j = phrase.size();
      if (j > i) out.push_back(phrase.substr(i, j - i));
      i = j + 1;
    }
    return out;
  }

  static bool is_literal(const std::string& word) {
    static constexpr std::string_view kMeta = "\\^$.|?*+()[]{}";
    return word.find_first_of(kMeta) == std::string::npos;
  }

  // True if every word of `phrase` is a literal that `earlier` already accepts.
  static bool subsumed(const std::vector<std::string>& earlier,
                       const std::vector<std::string>& phrase) {
    if (earlier.size() != phrase.size()) return false;
    for (size_t i = 0; i < phrase.size(); ++i) {
      if (!is_literal(phrase[i])) return false;
      std::regex re(earlier[i], std::regex::ECMAScript | std::regex::icase);
      if (!std::regex_match(phrase[i], re)) return false;
    }
    return true;
  }

  void check_guard(const Guard& g) {
    std::vector<std::vector<std::string>> valid;
    for (const std::string& alt : g.alternatives) {
      auto words = words_of(alt);
      bool ok = !words.empty();
      for (const auto& w : words) ok = check_regex(w, g.pos) && ok;
      if (!ok) continue;
      for (const auto& prev : valid) {
        if (subsumed(prev, words)) {
          report("unreachable-alternative",
                 "alternative \"" + alt + "\" is already covered by an earlier alternative",
                 g.pos, Diagnostic::Severity::kWarning);
          break;
        }
      }
      valid.push_back(std::move(words));
    }
  }

  void walk(std::span<const PatternNode> seq, int max_repeat, bool optional,
            int& captures, int& mandatory) {
    for (const PatternNode& n : seq) {
      if (const auto* w = std::get_if<WordLit>(&n.value)) {
        for (const auto& word : w->words) check_regex(word, n.pos);
      } else if (const auto* c = std::get_if<TokenClass>(&n.value)) {
        for (const auto& t : c->tests) check_regex(t.value, n.pos);
      } else if (const auto* g = std::get_if<Group>(&n.value)) {
        walk(g->items, max_repeat, optional, captures, mandatory);
      } else if (const auto* cap = std::get_if<Capture>(&n.value)) {
        ++captures;
        if (!optional) ++mandatory;
        if (!schema_.resolve(cap->name)) {
          report("unknown-concept",
                 "capture '" + cap->name + "' names unknown concept '" + cap->name + "'",
                 n.pos);
        }
        if (!names_.insert(cap->name).second) {
          report("duplicate-capture", "capture '" + cap->name + "' appears more than once",
                 n.pos);
        }
        if (max_repeat > 1) {
          report("repeated-capture",
                 "capture '" + cap->name + "' sits under a quantifier that repeats",
                 n.pos);
        }
        if (min_length(std::span<const PatternNode>(cap->items)) == 0) {
          report("empty-capture", "capture '" + cap->name + "' can match zero tokens",
                 n.pos);
        }
        walk(cap->items, max_repeat, optional, captures, mandatory);
      } else if (const auto* q = std::get_if<Quantified>(&n.value)) {
        walk(std::span(q->child.get(), 1), std::max(max_repeat, q->max),
             optional || q->min == 0, captures, mandatory);
      }
    }
  }

  const LabelingFunction& lf_;
  const ConceptSchema& schema_;
  std::vector<Diagnostic>& out_;
  std::set<std::string> names_;
};

}  // namespace

std::vector<Diagnostic> validate(std::span<const LabelingFunction> lfs,
                                 const ConceptSchema& schema) {
  std::vector<Diagnostic> out;
  std::set<std::string> seen;
  for (const LabelingFunction& lf : lfs) {
    if (!seen.insert(lf.name).second) {
      Diagnostic d;
      d.code = "duplicate-name";
      d.message = "labeling function '" + lf.name + "' is defined more than once";
      d.line = lf.pos.line;
      d.col = lf.pos.col;
      d.lf = lf.name;
      out.push_back(std::move(d));
    }
    Checker(lf, schema, out).run();
  }
  return out;
}

}  // namespace lfe::dsl
