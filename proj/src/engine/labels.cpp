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

#include "lfe/labels.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "lfe/error.hpp"

namespace lfe {

uint32_t LabelSet::source_index(std::string_view name) {
  for (size_t i = 0; i < sources.size(); ++i) {
    if (sources[i] == name) return static_cast<uint32_t>(i);
  }
  sources.emplace_back(name);
  return static_cast<uint32_t>(sources.size() - 1);
}

namespace {

template <typename Names>
std::vector<uint32_t> ranks(const Names& names) {
  std::vector<uint32_t> order(names.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](uint32_t a, uint32_t b) { return names[a] < names[b]; });
  std::vector<uint32_t> rank(names.size());
  for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<uint32_t>(i);
  return rank;
}

}  // namespace

void canonicalize(LabelSet& labels, const Corpus& corpus, const ConceptSchema& schema) {
  std::vector<std::string_view> doc_ids;
  for (const auto& d : corpus.documents()) doc_ids.push_back(d->id());
  std::vector<std::string_view> concept_ids;
  for (const auto& c : schema.concepts()) concept_ids.push_back(c.id);

  const auto doc_rank = ranks(doc_ids);
  const auto src_rank = ranks(labels.sources);
  const auto con_rank = ranks(concept_ids);
  for (const Vote& v : labels.votes) {
    if (v.doc >= doc_rank.size() || v.source >= src_rank.size() ||
        v.concept_index >= con_rank.size()) {
      throw DefectError("vote references an unknown document, source or concept");
    }
  }
  auto key = [&](const Vote& v) {
    return std::tuple(doc_rank[v.doc], src_rank[v.source], v.range.start, v.range.end,
                      con_rank[v.concept_index]);
  };
  std::sort(labels.votes.begin(), labels.votes.end(),
            [&](const Vote& a, const Vote& b) { return key(a) < key(b); });
  labels.votes.erase(std::unique(labels.votes.begin(), labels.votes.end()),
                     labels.votes.end());
}

std::string labels_to_jsonl(const LabelSet& labels, const Corpus& corpus,
                            const ConceptSchema& schema) {
  std::string out;
  const auto docs = corpus.documents();
  const auto concepts = schema.concepts();
  for (const Vote& v : labels.votes) {
    const Document& doc = *docs[v.doc];
    nlohmann::ordered_json j;
    j["doc"] = doc.id();
    j["lf"] = labels.sources[v.source];
    j["concept"] = concepts[v.concept_index].id;
    j["start"] = v.range.start;
    j["end"] = v.range.end;
    j["text"] = std::string(doc.slice(v.range));
    out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out.push_back('\n');
  }
  return out;
}

}  // namespace lfe
