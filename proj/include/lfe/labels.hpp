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

// Raw label votes, shared by the engine, aggregation and scoring.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lfe/docmodel.hpp"

namespace lfe {

inline constexpr std::string_view kGoldSource = "GOLD";
inline constexpr std::string_view kUserSource = "USER";

// A labeled span. `doc` indexes Corpus::documents(), `concept_index` indexes
// ConceptSchema::concepts() and `source` indexes LabelSet::sources.
struct Vote {
  uint32_t doc = 0;
  uint32_t concept_index = 0;
  CharRange range;
  uint32_t source = 0;
  bool operator==(const Vote&) const = default;
};

struct LabelSet {
  // LF names, or kGoldSource / kUserSource.
  std::vector<std::string> sources;
  std::vector<Vote> votes;

  // Index of `name` in `sources`, appending it when absent.
  uint32_t source_index(std::string_view name);
  bool operator==(const LabelSet&) const = default;
};

// Sorts votes by (doc id, source name, start, end, concept id) and drops
// exact duplicates.
void canonicalize(LabelSet& labels, const Corpus& corpus, const ConceptSchema& schema);

// One JSON object per line:
// {"doc", "lf", "concept", "start", "end", "text"}.
std::string labels_to_jsonl(const LabelSet& labels, const Corpus& corpus,
                            const ConceptSchema& schema);

}  // namespace lfe
