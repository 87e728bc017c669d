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

// Randomized comparison of the backtracking matcher with the reference
// matcher: patterns of depth <= 3 with quantifier bounds <= 4 over token
// streams of at most 12 tokens drawn from 5 token kinds.

#pragma once

#include <cstdint>
#include <string>

namespace lfe::testing {

struct OracleStats {
  int compared = 0;
  int mismatches = 0;
  int rejected = 0;  // generated LFs that failed validation and were redrawn
  int too_large = 0;  // patterns the reference matcher cannot enumerate
  int with_matches = 0;
  std::string first_mismatch;
};

OracleStats run_oracle_cases(int cases, uint64_t seed);

}  // namespace lfe::testing
