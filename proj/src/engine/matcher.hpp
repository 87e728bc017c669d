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

// Backtracking matcher over one window. Continuations are stack-allocated
// frames linked from callee to caller, so a failed branch unwinds by simply
// returning.

#pragma once

#include "engine/program.hpp"

namespace lfe::engine::detail {

struct BudgetExceeded {
  uint64_t steps = 0;
};

struct CapState {
  bool set = false;
  int start = 0;
  int end = 0;
};

struct Cont {
  enum Kind { kSeq, kRep, kCapEnd };
  Kind kind;
  const Node* node;
  size_t index;   // kSeq: next item; kRep: repeats still owed
  uint32_t slot;  // kCapEnd
  int start;      // kCapEnd
  int min_rest;   // fewest tokens this continuation chain consumes
  const Cont* next;
};

class Matcher {
 public:
  // Continuation depth beyond which an attempt counts as over budget.
  static constexpr int kMaxDepth = 8192;

  Matcher(const Program& program, EvalCache& cache, uint64_t budget);

  bool guards_hold(std::span<const uint32_t> toks);
  // Tries the pattern at window position `start`; sets `end` (exclusive) on
  // success. Throws BudgetExceeded.
  bool attempt(std::span<const uint32_t> toks, size_t start, size_t& end);
  std::span<const CapState> captures() const { return caps_; }

 private:
  static int rest(const Cont* k);
  bool phrase_at(const std::vector<uint32_t>& phrase, size_t pos);
  bool node(uint32_t n, int pos, const Cont* k);
  bool seq(const Node& group, size_t i, int pos, const Cont* k);
  bool repeat(const Node& quant, int remaining, int pos, const Cont* k);
  bool cont(const Cont* k, int pos);

  const Program& p_;
  EvalCache& cache_;
  uint64_t budget_;
  std::span<const uint32_t> toks_;
  uint64_t steps_ = 0;
  int depth_ = 0;
  int end_ = 0;
  std::vector<CapState> caps_;
};

std::vector<Match> match_with(const Program& p, const Document& doc, EvalCache& cache,
                              const MatchOptions& options, MatchReport* report);

}  // namespace lfe::engine::detail
