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
#include <set>
#include <tuple>

#include "lfe/error.hpp"
#include "lfe/weaksup.hpp"

namespace lfe::weaksup {

namespace {

void check_vote(const Vote& v, const LabelSet& votes, const Corpus& corpus,
                const ConceptSchema& schema) {
  if (v.source >= votes.sources.size()) {
    throw UserError("vote references source #" + std::to_string(v.source) +
                    " which the label set does not name");
  }
  if (v.doc >= corpus.size()) {
    throw UserError("vote references document #" + std::to_string(v.doc) +
                    " outside the corpus");
  }
  if (v.concept_index >= schema.concepts().size()) {
    throw UserError("vote references concept #" + std::to_string(v.concept_index) +
                    " outside the schema");
  }
  const Document& doc = *corpus.documents()[v.doc];
  if (v.range.start > v.range.end || v.range.end > doc.text().size()) {
    throw UserError("vote range [" + std::to_string(v.range.start) + ", " +
                    std::to_string(v.range.end) + ") is outside document '" + doc.id() +
                    "'");
  }
}

// Overlap test against a set of pairwise disjoint ranges ordered by start.
bool overlaps_any(const std::set<CharRange>& kept, const CharRange& r) {
  auto it = kept.lower_bound(CharRange{r.start, 0});
  if (it != kept.end() && it->overlaps(r)) return true;
  if (it != kept.begin() && std::prev(it)->overlaps(r)) return true;
  return false;
}

}  // namespace

ResolvedLabels aggregate(const LabelSet& votes, const PriorityMap& priorities,
                         const Corpus& corpus, const ConceptSchema& schema) {
  std::vector<int> source_priority(votes.sources.size());
  for (size_t i = 0; i < votes.sources.size(); ++i) {
    const std::string& name = votes.sources[i];
    if (name == kGoldSource || name == kUserSource) {
      source_priority[i] = kOverridePriority;
      continue;
    }
    const auto it = priorities.find(name);
    if (it == priorities.end()) {
      // Only an error when some vote actually uses the source.
      source_priority[i] = -1;
      continue;
    }
    source_priority[i] = it->second;
  }

  struct Candidate {
    int priority = 0;
    std::set<std::string> sources;
  };
  // (doc, concept) -> range -> candidate
  std::map<std::pair<uint32_t, uint32_t>, std::map<CharRange, Candidate>> groups;
  for (const Vote& v : votes.votes) {
    check_vote(v, votes, corpus, schema);
    const int prio = source_priority[v.source];
    if (prio < 0) {
      throw UserError("vote from unknown labeling function '" + votes.sources[v.source] + "'");
    }
    auto& group = groups[{v.doc, v.concept_index}];
    auto [it, inserted] = group.try_emplace(v.range);
    if (inserted || prio < it->second.priority) it->second.priority = prio;
    it->second.sources.insert(votes.sources[v.source]);
  }

  ResolvedLabels out;
  for (auto& [key, group] : groups) {
    std::vector<std::pair<CharRange, Candidate*>> order;
    order.reserve(group.size());
    for (auto& [range, cand] : group) order.emplace_back(range, &cand);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      return std::tuple(a.second->priority, -static_cast<int64_t>(a.first.length()),
                        a.first.start) <
             std::tuple(b.second->priority, -static_cast<int64_t>(b.first.length()),
                        b.first.start);
    });
    std::set<CharRange> kept;
    for (const auto& [range, cand] : order) {
      if (overlaps_any(kept, range)) continue;
      kept.insert(range);
      out.spans.push_back({key.first, key.second, range,
                           {cand->sources.begin(), cand->sources.end()}});
    }
  }
  sort_resolved(out, corpus, schema);
  return out;
}

LabelSet as_votes(const ResolvedLabels& resolved) {
  LabelSet out;
  for (const ResolvedSpan& s : resolved.spans) {
    for (const std::string& src : s.sources) {
      out.votes.push_back({s.doc, s.concept_index, s.range, out.source_index(src)});
    }
  }
  return out;
}

void sort_resolved(ResolvedLabels& r, const Corpus& corpus, const ConceptSchema& schema) {
  const auto docs = corpus.documents();
  const auto concepts = schema.concepts();
  auto key = [&](const ResolvedSpan& s) {
    return std::tuple(std::string_view(docs[s.doc]->id()),
                      std::string_view(concepts[s.concept_index].id), s.range.start,
                      s.range.end);
  };
  std::sort(r.spans.begin(), r.spans.end(),
            [&](const ResolvedSpan& a, const ResolvedSpan& b) { return key(a) < key(b); });
}

CoverageReport coverage(const ResolvedLabels& resolved, const SplitManifest& split,
                        const Corpus& corpus, const ConceptSchema& schema) {
  CoverageReport report;
  const auto docs = corpus.documents();
  std::vector<bool> train(docs.size(), false);
  for (size_t i = 0; i < docs.size(); ++i) {
    if (split.bucket_of(docs[i]->id()) == Bucket::kTrain) {
      train[i] = true;
      ++report.train_docs;
    }
  }
  std::set<std::pair<uint32_t, uint32_t>> labeled;  // (concept, doc)
  for (const ResolvedSpan& s : resolved.spans) {
    if (s.doc < train.size() && train[s.doc]) labeled.insert({s.concept_index, s.doc});
  }
  const auto concepts = schema.concepts();
  for (size_t c = 0; c < concepts.size(); ++c) {
    ConceptCoverage cc;
    cc.concept_id = concepts[c].id;
    const auto lo = labeled.lower_bound({static_cast<uint32_t>(c), 0});
    const auto hi = labeled.lower_bound({static_cast<uint32_t>(c + 1), 0});
    cc.labeled_docs = static_cast<uint64_t>(std::distance(lo, hi));
    if (report.train_docs > 0) {
      cc.coverage = static_cast<double>(cc.labeled_docs) / static_cast<double>(report.train_docs);
    }
    report.concepts.push_back(std::move(cc));
  }
  return report;
}

std::vector<ConceptConflict> conflict_stats(const LabelSet& votes, const Corpus& corpus,
                                            const ConceptSchema& schema) {
  std::map<std::pair<uint32_t, uint32_t>, std::vector<const Vote*>> groups;  // (concept, doc)
  for (const Vote& v : votes.votes) {
    check_vote(v, votes, corpus, schema);
    groups[{v.concept_index, v.doc}].push_back(&v);
  }
  const auto concepts = schema.concepts();
  std::vector<uint64_t> conflicting(concepts.size(), 0);
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(), [](const Vote* a, const Vote* b) {
      return a->range < b->range;
    });
    bool found = false;
    for (size_t i = 0; i < group.size() && !found; ++i) {
      for (size_t j = i + 1; j < group.size() && group[j]->range.start < group[i]->range.end;
           ++j) {
        if (group[i]->source != group[j]->source && group[i]->range != group[j]->range &&
            group[i]->range.overlaps(group[j]->range)) {
          found = true;
          break;
        }
      }
    }
    if (found) ++conflicting[key.first];
  }
  std::vector<ConceptConflict> out;
  for (size_t c = 0; c < concepts.size(); ++c) {
    ConceptConflict cc{concepts[c].id, conflicting[c], std::nullopt};
    if (corpus.size() > 0) {
      cc.conflict = static_cast<double>(conflicting[c]) / static_cast<double>(corpus.size());
    }
    out.push_back(std::move(cc));
  }
  return out;
}

}  // namespace lfe::weaksup
