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

#pragma once

#include <regex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lfe/engine.hpp"

namespace lfe::engine::detail {

// An anchored regex over one token attribute, with fast paths for literal
// words, literal alternations and literal prefixes followed by ".*".
class WordMatcher {
 public:
  // Throws std::regex_error.
  WordMatcher(const std::string& pattern, bool icase);

  bool general() const { return kind_ == Kind::kRegex; }
  bool matches(std::string_view s) const;

 private:
  enum class Kind { kLiteral, kPrefix, kRegex };
  Kind kind_ = Kind::kRegex;
  bool icase_ = true;
  std::vector<std::string> literals_;  // lowercased when icase_
  std::regex regex_;
};

struct Test {
  dsl::Attr attr = dsl::Attr::kWord;
  WordMatcher matcher;
  uint32_t id = 0;  // cache slot, unique within the program
};

// One token must satisfy every test; no tests is the wildcard.
struct Predicate {
  std::vector<Test> tests;
};

struct Node {
  enum class Kind { kPred, kGroup, kCapture, kQuant };
  Kind kind = Kind::kPred;
  uint32_t pred = 0;            // kPred
  std::vector<uint32_t> items;  // kGroup, kCapture
  // items_rest[i] = fewest tokens consumed by items[i..].
  std::vector<int> items_rest;
  uint32_t child = 0;  // kQuant
  int min = 1;
  int max = 1;
  uint32_t slot = 0;  // kCapture
  int min_len = 0;
};

struct CompiledGuard {
  dsl::GuardKind kind = dsl::GuardKind::kContains;
  bool negated = false;
  // Each alternative is a phrase: one predicate per word.
  std::vector<std::vector<uint32_t>> phrases;
};

struct Program {
  dsl::LabelingFunction lf;
  std::vector<CaptureSlot> captures;
  std::vector<Predicate> preds;
  std::vector<Node> nodes;
  uint32_t root = 0;  // a kGroup node
  std::vector<CompiledGuard> guards;
  uint32_t test_count = 0;
  int min_len = 0;
};

// Per-worker memo of test outcomes. Symbol-valued attributes are memoized per
// document symbol id; regex tests on text are memoized by string.
class EvalCache {
 public:
  explicit EvalCache(const Program& p);
  void reset_document(const Document& doc);
  bool eval(const Predicate& pred, uint32_t token);

 private:
  bool eval_test(const Test& t, uint32_t token);

  const Document* doc_ = nullptr;
  std::vector<std::vector<int8_t>> symbol_memo_;
  struct StringHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::unordered_map<std::string, bool, StringHash, std::equal_to<>>> text_memo_;
};

}  // namespace lfe::engine::detail
