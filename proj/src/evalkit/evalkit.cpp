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

#include "lfe/evalkit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "json.hpp"
#include "lfe/error.hpp"

namespace lfe::evalkit {

MatchPolicy MatchPolicy::overlap(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw UserError("overlap threshold must lie in (0, 1], got " + std::to_string(tau));
  }
  return {Kind::kOverlap, tau};
}

std::string MatchPolicy::name() const {
  if (kind == Kind::kExact) return "exact";
  char buf[32];
  std::snprintf(buf, sizeof buf, "overlap(%g)", tau);
  return buf;
}

MatchPolicy parse_policy(std::string_view text) {
  if (text == "exact") return MatchPolicy::exact();
  std::string_view num;
  if (text.starts_with("overlap:")) {
    num = text.substr(8);
  } else if (text.starts_with("overlap(") && text.ends_with(")")) {
    num = text.substr(8, text.size() - 9);
  } else {
    throw UserError("unknown match policy '" + std::string(text) +
                    "' (expected exact or overlap:T)");
  }
  double tau = 0;
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), tau);
  if (ec != std::errc() || ptr != num.data() + num.size()) {
    throw UserError("bad overlap threshold in '" + std::string(text) + "'");
  }
  return MatchPolicy::overlap(tau);
}

MatchPolicy default_policy(const Concept& c) {
  if (c.kind == ConceptKind::kClause) return MatchPolicy::overlap(0.3);
  if (c.is_date) return MatchPolicy::exact();
  return MatchPolicy::overlap(0.5);
}

namespace {

uint64_t intersection(const CharRange& a, const CharRange& b) {
  const uint32_t lo = std::max(a.start, b.start);
  const uint32_t hi = std::min(a.end, b.end);
  return hi > lo ? hi - lo : 0;
}

uint64_t union_size(const CharRange& a, const CharRange& b) {
  return uint64_t{a.length()} + b.length() - intersection(a, b);
}

}  // namespace

double jaccard(const CharRange& a, const CharRange& b) {
  const uint64_t u = union_size(a, b);
  return u == 0 ? (a == b ? 1.0 : 0.0) : static_cast<double>(intersection(a, b)) /
                                             static_cast<double>(u);
}

MatchCounts match_spans(std::span<const CharRange> predicted, std::span<const CharRange> gold,
                        const MatchPolicy& policy) {
  struct Pair {
    uint64_t inter;
    uint64_t uni;
    size_t p;
    size_t g;
  };
  std::vector<Pair> pairs;
  for (size_t p = 0; p < predicted.size(); ++p) {
    for (size_t g = 0; g < gold.size(); ++g) {
      const CharRange& a = predicted[p];
      const CharRange& b = gold[g];
      if (policy.kind == MatchPolicy::Kind::kExact) {
        if (a == b) pairs.push_back({1, 1, p, g});
        continue;
      }
      const uint64_t inter = intersection(a, b);
      const uint64_t uni = union_size(a, b);
      if (inter == 0) continue;
      if (static_cast<double>(inter) < policy.tau * static_cast<double>(uni) - 1e-12) continue;
      pairs.push_back({inter, uni, p, g});
    }
  }
  // Descending Jaccard compared exactly as fractions, then earlier gold.
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& x, const Pair& y) {
    const auto lhs = x.inter * y.uni;
    const auto rhs = y.inter * x.uni;
    if (lhs != rhs) return lhs > rhs;
    return std::tie(gold[x.g].start, gold[x.g].end, x.g, predicted[x.p].start, x.p) <
           std::tie(gold[y.g].start, gold[y.g].end, y.g, predicted[y.p].start, y.p);
  });
  std::vector<bool> used_p(predicted.size());
  std::vector<bool> used_g(gold.size());
  MatchCounts c;
  for (const Pair& pr : pairs) {
    if (used_p[pr.p] || used_g[pr.g]) continue;
    used_p[pr.p] = used_g[pr.g] = true;
    ++c.tp;
  }
  c.fp = predicted.size() - c.tp;
  c.fn = gold.size() - c.tp;
  return c;
}

double f1(double precision, double recall) {
  if (precision + recall <= 0) return 0;
  return 2 * precision * recall / (precision + recall);
}

double round1(double v) { return std::round(v * 10.0) / 10.0; }

MetricsReport score_corpus(const weaksup::ResolvedLabels& predicted,
                           const weaksup::ResolvedLabels& gold, const Corpus& corpus,
                           const ConceptSchema& schema, const weaksup::SplitManifest& split,
                           weaksup::Bucket bucket, const PolicyMap& overrides) {
  const auto docs = corpus.documents();
  const auto concepts = schema.concepts();
  for (const auto& [id, policy] : overrides) {
    if (!schema.find(id)) throw UserError("policy override for unknown concept '" + id + "'");
  }
  std::vector<bool> in_bucket(docs.size(), false);
  MetricsReport report;
  report.bucket = bucket;
  report.corpus_hash = corpus.content_hash();
  for (size_t i = 0; i < docs.size(); ++i) {
    if (split.bucket_of(docs[i]->id()) == bucket) {
      in_bucket[i] = true;
      ++report.docs;
    }
  }

  // (concept, doc) -> ranges
  using Groups = std::map<std::pair<uint32_t, uint32_t>, std::vector<CharRange>>;
  auto group = [&](const weaksup::ResolvedLabels& labels) {
    Groups g;
    for (const auto& s : labels.spans) {
      if (s.doc >= docs.size()) throw DefectError("label references an unknown document");
      if (in_bucket[s.doc]) g[{s.concept_index, s.doc}].push_back(s.range);
    }
    return g;
  };
  const Groups pred = group(predicted);
  const Groups gold_groups = group(gold);

  for (size_t c = 0; c < concepts.size(); ++c) {
    ConceptScore score;
    score.concept_id = concepts[c].id;
    const auto o = overrides.find(concepts[c].id);
    score.policy = o != overrides.end() ? o->second : default_policy(concepts[c]);
    for (size_t d = 0; d < docs.size(); ++d) {
      if (!in_bucket[d]) continue;
      const std::pair key(static_cast<uint32_t>(c), static_cast<uint32_t>(d));
      static const std::vector<CharRange> kEmpty;
      const auto pi = pred.find(key);
      const auto gi = gold_groups.find(key);
      score.counts += match_spans(pi == pred.end() ? kEmpty : pi->second,
                                  gi == gold_groups.end() ? kEmpty : gi->second, score.policy);
    }
    const auto& k = score.counts;
    score.precision_undefined = k.tp + k.fp == 0;
    score.recall_undefined = k.tp + k.fn == 0;
    score.precision = score.precision_undefined
                          ? 0
                          : 100.0 * static_cast<double>(k.tp) / static_cast<double>(k.tp + k.fp);
    score.recall = score.recall_undefined
                       ? 0
                       : 100.0 * static_cast<double>(k.tp) / static_cast<double>(k.tp + k.fn);
    score.f1 = f1(score.precision, score.recall);
    report.scores.push_back(std::move(score));
  }
  return report;
}

std::string report_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["bucket"] = weaksup::bucket_name(report.bucket);
  j["corpus_hash"] = report.corpus_hash;
  j["docs"] = report.docs;
  nlohmann::ordered_json concepts = nlohmann::ordered_json::array();
  for (const ConceptScore& s : report.scores) {
    nlohmann::ordered_json c;
    c["concept"] = s.concept_id;
    c["policy"] = s.policy.name();
    c["tp"] = s.counts.tp;
    c["fp"] = s.counts.fp;
    c["fn"] = s.counts.fn;
    c["precision"] = round1(s.precision);
    c["recall"] = round1(s.recall);
    c["f1"] = round1(s.f1);
    c["precision_undefined"] = s.precision_undefined;
    c["recall_undefined"] = s.recall_undefined;
    concepts.push_back(std::move(c));
  }
  j["concepts"] = std::move(concepts);
  return j.dump(2) + "\n";
}

std::string report_table(const ConceptSchema& schema, const MetricsReport* dev,
                         const MetricsReport* test) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Concept", "Dev P", "Dev R", "Dev F1", "Test P", "Test R", "Test F1"});
  auto cells = [](const MetricsReport* r, size_t i, std::vector<std::string>& row) {
    if (!r || i >= r->scores.size()) {
      row.insert(row.end(), {"-", "-", "-"});
      return;
    }
    const ConceptScore& s = r->scores[i];
    char buf[32];
    auto fmt = [&](double v, bool undefined) {
      if (undefined) return std::string("n/a");
      std::snprintf(buf, sizeof buf, "%.1f", round1(v));
      return std::string(buf);
    };
    row.push_back(fmt(s.precision, s.precision_undefined));
    row.push_back(fmt(s.recall, s.recall_undefined));
    row.push_back(fmt(s.f1, s.precision_undefined && s.recall_undefined));
  };
  const auto concepts = schema.concepts();
  for (size_t i = 0; i < concepts.size(); ++i) {
    std::vector<std::string> row{concepts[i].display_name.empty() ? concepts[i].id
                                                                 : concepts[i].display_name};
    cells(dev, i, row);
    cells(test, i, row);
    rows.push_back(std::move(row));
  }
  std::vector<size_t> width(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c == 1 || c == 4) out += " | ";
      else if (c > 0) out += "  ";
      const size_t pad = width[c] - row[c].size();
      if (c == 0) {
        out += row[c] + std::string(pad, ' ');
      } else {
        out += std::string(pad, ' ') + row[c];
      }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out.push_back('\n');
  }
  return out;
}

}  // namespace lfe::evalkit
