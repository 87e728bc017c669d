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

// From raw votes to training data: vote resolution, coverage and conflict
// accounting, deterministic corpus splits, user corrections and exports.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lfe/docmodel.hpp"
#include "lfe/labels.hpp"

namespace lfe::weaksup {

// Priority of the GOLD and USER sources; beats every LF (LF priorities are >= 1).
inline constexpr int kOverridePriority = 0;

struct ResolvedSpan {
  uint32_t doc = 0;            // index into Corpus::documents()
  uint32_t concept_index = 0;  // index into ConceptSchema::concepts()
  CharRange range;
  std::vector<std::string> sources;  // sorted, unique
  bool operator==(const ResolvedSpan&) const = default;
};

// Sorted by (doc id, concept id, start). Ranges of one (doc, concept) pair
// are pairwise disjoint.
struct ResolvedLabels {
  std::vector<ResolvedSpan> spans;
  bool operator==(const ResolvedLabels&) const = default;
};

using PriorityMap = std::map<std::string, int, std::less<>>;

// Per (doc, concept): identical ranges merge with the union of their sources
// and the best priority among them. Overlapping ranges are then kept
// greedily by priority (lower first), length (longer first) and start
// (earlier first). A vote whose source is neither in `priorities` nor GOLD or
// USER is a UserError.
ResolvedLabels aggregate(const LabelSet& votes, const PriorityMap& priorities,
                         const Corpus& corpus, const ConceptSchema& schema);

// Every source of every resolved span as a separate vote.
LabelSet as_votes(const ResolvedLabels& resolved);

// --- Splits -----------------------------------------------------------------

enum class Bucket { kTrain, kDev, kTest };

std::string_view bucket_name(Bucket b);
// Accepts "train", "dev" and "test"; anything else is a UserError.
Bucket parse_bucket(std::string_view name);

struct SplitManifest {
  uint64_t seed = 0;
  std::array<double, 3> ratios = {0.8, 0.1, 0.1};
  std::map<std::string, Bucket, std::less<>> assignment;

  std::optional<Bucket> bucket_of(std::string_view doc_id) const;
  std::vector<std::string> ids_in(Bucket b) const;
  bool operator==(const SplitManifest&) const = default;
};

// Orders ids by a seeded 64-bit hash (ties by id) and deals out
// floor(r0 * n) train ids, floor(r1 * n) dev ids and the rest as test.
// Duplicate ids, negative ratios or ratios not summing to 1 are UserErrors.
SplitManifest split_corpus(std::vector<std::string> doc_ids,
                           const std::array<double, 3>& ratios, uint64_t seed);
uint64_t split_key(uint64_t seed, std::string_view doc_id);

// {"seed": int, "ratios": [f, f, f], "assignment": {id: "train"|"dev"|"test"}}
std::string manifest_to_json(const SplitManifest& m);
SplitManifest manifest_from_json(std::string_view json_text);

// --- Accounting -------------------------------------------------------------

struct ConceptCoverage {
  std::string concept_id;
  uint64_t labeled_docs = 0;
  // Labeled train docs over train docs; empty when there are no train docs.
  std::optional<double> coverage;
};

struct CoverageReport {
  uint64_t train_docs = 0;
  std::vector<ConceptCoverage> concepts;  // schema order
};

// Train docs absent from `corpus` are ignored.
CoverageReport coverage(const ResolvedLabels& resolved, const SplitManifest& split,
                        const Corpus& corpus, const ConceptSchema& schema);

struct ConceptConflict {
  std::string concept_id;
  uint64_t conflicting_docs = 0;
  std::optional<double> conflict;  // empty for an empty corpus
};

// A document conflicts on a concept when two votes for it from different
// sources overlap without having identical ranges.
std::vector<ConceptConflict> conflict_stats(const LabelSet& votes, const Corpus& corpus,
                                            const ConceptSchema& schema);

// --- Corrections ------------------------------------------------------------

enum class Verdict { kAccept, kReject, kReplace };

std::string_view verdict_name(Verdict v);
Verdict parse_verdict(std::string_view name);

struct Correction {
  std::string doc_id;
  std::string concept_id;
  CharRange range;        // the span being judged
  Verdict verdict = Verdict::kAccept;
  CharRange replacement;  // kReplace only
  uint64_t seq = 0;       // position in the journal
  std::string timestamp;  // informational
};

// Effective corrections: the last journal entry for each (doc, concept,
// range), ordered by that key.
std::vector<Correction> effective_corrections(const std::vector<Correction>& journal);

// Checks the document and concept exist and the ranges lie in the text.
// Throws UserError otherwise.
void check_correction(const Correction& c, const Corpus& corpus, const ConceptSchema& schema);

// Rejected and replaced spans lose every vote with exactly that range;
// accepted spans and replacements gain a USER vote. The result is canonical.
LabelSet apply_corrections(const LabelSet& votes, const std::vector<Correction>& effective,
                           const Corpus& corpus, const ConceptSchema& schema);

std::string correction_to_json(const Correction& c);
Correction correction_from_json(std::string_view json_text);

// Append-only JSON-lines file of corrections.
class CorrectionJournal {
 public:
  // Reads existing entries; a missing file is an empty journal.
  explicit CorrectionJournal(std::filesystem::path path);

  const std::vector<Correction>& entries() const { return entries_; }
  // Assigns the sequence number, appends one line and flushes it.
  const Correction& append(Correction c);

 private:
  std::filesystem::path path_;
  std::vector<Correction> entries_;
};

// --- Export and import ------------------------------------------------------

// Moves range ends that fall strictly inside a token out to that token's
// boundary. Returns whether anything moved.
bool snap_to_tokens(const Document& doc, CharRange& range);

enum class ExportFormat { kSpansJsonl, kTokenBio };

ExportFormat parse_export_format(std::string_view name);

struct ExportResult {
  std::string data;
  std::vector<std::string> warnings;  // one per snapped label
};

// Train documents only, in id order. SPANS_JSONL has one
// {"doc", "concept", "start", "end", "sources"} line per label. TOKEN_BIO has
// one "surface<TAB>tag" line per non-boilerplate token and a blank line after
// every sentence; where labels overlap, entities win over clauses and then
// the earlier concept in the schema wins.
ExportResult export_training(const ResolvedLabels& resolved, const Corpus& corpus,
                             const ConceptSchema& schema, const SplitManifest& split,
                             ExportFormat format);

// Parses SPANS_JSONL. Unknown documents or concepts are UserErrors; ranges
// are snapped to token boundaries, with one warning per snapped span.
// "sources" may be absent (gold files), in which case `default_source` is
// used.
ResolvedLabels import_spans(std::string_view jsonl, const Corpus& corpus,
                            const ConceptSchema& schema,
                            std::vector<std::string>* warnings = nullptr,
                            std::string_view default_source = kGoldSource);

// Sorts spans into the canonical ResolvedLabels order.
void sort_resolved(ResolvedLabels& r, const Corpus& corpus, const ConceptSchema& schema);

}  // namespace lfe::weaksup
