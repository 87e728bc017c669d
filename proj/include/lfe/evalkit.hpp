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

// Scoring resolved labels against gold spans: per-concept precision, recall
// and F1 over one split bucket.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lfe/docmodel.hpp"
#include "lfe/weaksup.hpp"

namespace lfe::evalkit {

struct MatchPolicy {
  enum class Kind { kExact, kOverlap };
  Kind kind = Kind::kExact;
  double tau = 1.0;  // minimum Jaccard overlap for kOverlap

  static MatchPolicy exact() { return {}; }
  // tau must lie in (0, 1]; otherwise a UserError.
  static MatchPolicy overlap(double tau);
  // "exact" or "overlap(0.5)".
  std::string name() const;
  bool operator==(const MatchPolicy&) const = default;
};

// Accepts "exact", "overlap:T" and "overlap(T)".
MatchPolicy parse_policy(std::string_view text);

// Exact for date entities, overlap 0.5 for other entities, overlap 0.3 for
// clauses.
MatchPolicy default_policy(const Concept& c);

struct MatchCounts {
  uint64_t tp = 0;
  uint64_t fp = 0;
  uint64_t fn = 0;
  bool operator==(const MatchCounts&) const = default;
  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

double jaccard(const CharRange& a, const CharRange& b);

// Greedy one-to-one matching of candidate pairs in descending Jaccard order;
// ties go to the earlier gold span.
MatchCounts match_spans(std::span<const CharRange> predicted, std::span<const CharRange> gold,
                        const MatchPolicy& policy);

// Harmonic mean of two percentages; 0 when both are 0.
double f1(double precision, double recall);
// Half away from zero, to one decimal.
double round1(double v);

struct ConceptScore {
  std::string concept_id;
  MatchPolicy policy;
  MatchCounts counts;
  double precision = 0;  // percentages
  double recall = 0;
  double f1 = 0;
  bool precision_undefined = false;  // tp + fp == 0
  bool recall_undefined = false;     // tp + fn == 0
};

struct MetricsReport {
  weaksup::Bucket bucket = weaksup::Bucket::kTest;
  std::string corpus_hash;
  uint64_t docs = 0;  // documents in the bucket
  std::vector<ConceptScore> scores;  // schema order
};

using PolicyMap = std::map<std::string, MatchPolicy, std::less<>>;

// Pools counts over the bucket's documents per concept (micro average).
// Spans outside the bucket are ignored. `overrides` replaces the default
// policy for the concepts it names.
MetricsReport score_corpus(const weaksup::ResolvedLabels& predicted,
                           const weaksup::ResolvedLabels& gold, const Corpus& corpus,
                           const ConceptSchema& schema, const weaksup::SplitManifest& split,
                           weaksup::Bucket bucket, const PolicyMap& overrides = {});

// Stable field order; percentages rounded to one decimal.
std::string report_to_json(const MetricsReport& report);

// Aligned text table: Concept | Dev P R F1 | Test P R F1. Either report may
// be null, in which case its columns show "-".
std::string report_table(const ConceptSchema& schema, const MetricsReport* dev,
                         const MetricsReport* test);

}  // namespace lfe::evalkit
