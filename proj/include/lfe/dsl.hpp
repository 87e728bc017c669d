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

// Labeling-function language.
//
//   lf sick_leave_hours for sick_leave_amount priority 10 {
//     require starts("full time" | "part time")
//     require contains("accru.*")
//     match: status:("full|part" "time")? []{0,5}
//            amount:([pos="NUM"]{1,2}) unit:([ner="TIME_UNIT"]{1,1})
//   }
//
// A labeling function gates each window (sentence, section or document) with
// its guards, then scans the window for its token pattern. Every capture in a
// match emits a span for the concept the capture names.

#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lfe/docmodel.hpp"

namespace lfe::dsl {

inline constexpr int kMaxRepeat = 64;
inline constexpr int kDefaultPriority = 100;

struct SourcePos {
  int line = 0;
  int col = 0;
};

enum class Attr { kWord, kLower, kPos, kNer, kShape };

std::string_view attr_name(Attr a);

struct AttrTest {
  Attr attr = Attr::kWord;
  std::string value;  // anchored regex
  bool operator==(const AttrTest&) const = default;
};

struct PatternNode;

// One token per word; each word is an anchored case-insensitive regex.
struct WordLit {
  std::vector<std::string> words;
};

// One token satisfying every test.
struct TokenClass {
  std::vector<AttrTest> tests;
};

// Any one token ("[]").
struct Wildcard {};

struct Group {
  std::vector<PatternNode> items;
};

struct Capture {
  std::string name;
  std::vector<PatternNode> items;
};

// Greedy bounded repetition, 0 <= min <= max <= kMaxRepeat.
struct Quantified {
  std::shared_ptr<const PatternNode> child;
  int min = 1;
  int max = 1;
};

struct PatternNode {
  std::variant<WordLit, TokenClass, Wildcard, Group, Capture, Quantified> value;
  SourcePos pos;  // not part of equality
};

bool operator==(const WordLit& a, const WordLit& b);
bool operator==(const TokenClass& a, const TokenClass& b);
bool operator==(const Wildcard&, const Wildcard&);
bool operator==(const Group& a, const Group& b);
bool operator==(const Capture& a, const Capture& b);
bool operator==(const Quantified& a, const Quantified& b);
bool operator==(const PatternNode& a, const PatternNode& b);

enum class Scope { kSentence, kSection, kDocument };
enum class GuardKind { kStarts, kContains };

std::string_view scope_name(Scope s);

struct Guard {
  GuardKind kind = GuardKind::kContains;
  bool negated = false;
  // Phrases of space-separated word regexes.
  std::vector<std::string> alternatives;
  SourcePos pos;
};

bool operator==(const Guard& a, const Guard& b);

struct LabelingFunction {
  std::string name;
  std::string concept_id;
  int priority = kDefaultPriority;  // 1 = highest
  Scope scope = Scope::kSentence;
  std::vector<Guard> guards;
  std::vector<PatternNode> pattern;
  SourcePos pos;

  // Capture names in pattern order.
  std::vector<std::string> capture_names() const;
};

// Structural equality; source positions are ignored.
bool operator==(const LabelingFunction& a, const LabelingFunction& b);

struct Diagnostic {
  enum class Severity { kError, kWarning };
  Severity severity = Severity::kError;
  std::string code;
  std::string message;
  int line = 0;
  int col = 0;
  std::string lf;  // empty for ruleset-level problems
  std::vector<std::string> expected;  // syntax errors only

  bool is_error() const { return severity == Severity::kError; }
};

bool has_errors(std::span<const Diagnostic> diags);
std::string format_diagnostic(const Diagnostic& d);

struct ParseResult {
  std::vector<LabelingFunction> lfs;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

// Total: never throws on malformed input.
ParseResult parse_ruleset(std::string_view source);

std::vector<Diagnostic> validate(std::span<const LabelingFunction> lfs,
                                 const ConceptSchema& schema);

// Canonical text. parse_ruleset(format_lf(lf)) reproduces `lf`.
std::string format_lf(const LabelingFunction& lf);
std::string format_ruleset(std::span<const LabelingFunction> lfs);

// Fewest tokens a pattern can consume.
int min_length(const PatternNode& node);
int min_length(std::span<const PatternNode> seq);

// A capture binds the concept whose id or alias equals its name.
const Concept* resolve_capture(std::string_view capture_name,
                               const ConceptSchema& schema);

// capture name -> concept id, for captures that resolve.
std::map<std::string, std::string> capture_bindings(const LabelingFunction& lf,
                                                    const ConceptSchema& schema);

}  // namespace lfe::dsl
