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

#include "json.hpp"
#include "lfe/error.hpp"
#include "lfe/weaksup.hpp"

namespace lfe::weaksup {

bool snap_to_tokens(const Document& doc, CharRange& range) {
  const auto tokens = doc.tokens();
  const CharRange before = range;
  // Last token starting at or before `pos`.
  auto token_at = [&](uint32_t pos) -> const Token* {
    auto it = std::upper_bound(tokens.begin(), tokens.end(), pos,
                               [](uint32_t p, const Token& t) { return p < t.range.start; });
    if (it == tokens.begin()) return nullptr;
    return &*std::prev(it);
  };
  if (const Token* t = token_at(range.start); t && t->range.start < range.start &&
                                              range.start < t->range.end) {
    range.start = t->range.start;
  }
  if (range.end > 0) {
    if (const Token* t = token_at(range.end - 1);
        t && t->range.start < range.end && range.end < t->range.end) {
      range.end = t->range.end;
    }
  }
  return range != before;
}

ExportFormat parse_export_format(std::string_view name) {
  if (name == "spans" || name == "spans_jsonl" || name == "SPANS_JSONL") {
    return ExportFormat::kSpansJsonl;
  }
  if (name == "bio" || name == "token_bio" || name == "TOKEN_BIO") return ExportFormat::kTokenBio;
  throw UserError("unknown export format '" + std::string(name) + "' (expected spans or bio)");
}

namespace {

std::string snap_warning(const Document& doc, std::string_view concept_id, CharRange from,
                         CharRange to) {
  return "label " + std::string(concept_id) + " [" + std::to_string(from.start) + ", " +
         std::to_string(from.end) + ") in '" + doc.id() +
         "' is not token aligned; snapped to [" + std::to_string(to.start) + ", " +
         std::to_string(to.end) + ")";
}

// Resolved spans of train documents, snapped, grouped by document index.
std::map<uint32_t, std::vector<ResolvedSpan>> train_spans(const ResolvedLabels& resolved,
                                                          const Corpus& corpus,
                                                          const ConceptSchema& schema,
                                                          const SplitManifest& split,
                                                          std::vector<std::string>& warnings) {
  const auto docs = corpus.documents();
  std::map<uint32_t, std::vector<ResolvedSpan>> out;
  for (size_t i = 0; i < docs.size(); ++i) {
    if (split.bucket_of(docs[i]->id()) == Bucket::kTrain) out[static_cast<uint32_t>(i)];
  }
  for (const ResolvedSpan& s : resolved.spans) {
    auto it = out.find(s.doc);
    if (it == out.end()) continue;
    ResolvedSpan snapped = s;
    if (snap_to_tokens(*docs[s.doc], snapped.range)) {
      warnings.push_back(snap_warning(*docs[s.doc], schema.concepts()[s.concept_index].id,
                                      s.range, snapped.range));
    }
    it->second.push_back(std::move(snapped));
  }
  return out;
}

std::string spans_jsonl(const std::map<uint32_t, std::vector<ResolvedSpan>>& by_doc,
                        const Corpus& corpus, const ConceptSchema& schema) {
  // Documents in id order, spans in canonical order within each.
  std::vector<std::pair<std::string_view, uint32_t>> ids;
  const auto docs = corpus.documents();
  for (const auto& [d, spans] : by_doc) ids.emplace_back(docs[d]->id(), d);
  std::sort(ids.begin(), ids.end());
  std::string out;
  for (const auto& [id, d] : ids) {
    ResolvedLabels one{by_doc.at(d)};
    sort_resolved(one, corpus, schema);
    for (const ResolvedSpan& s : one.spans) {
      nlohmann::ordered_json j;
      j["doc"] = id;
      j["concept"] = schema.concepts()[s.concept_index].id;
      j["start"] = s.range.start;
      j["end"] = s.range.end;
      j["sources"] = s.sources;
      out += j.dump();
      out.push_back('\n');
    }
  }
  return out;
}

std::string token_bio(const std::map<uint32_t, std::vector<ResolvedSpan>>& by_doc,
                      const Corpus& corpus, const ConceptSchema& schema) {
  const auto docs = corpus.documents();
  const auto concepts = schema.concepts();
  std::vector<std::pair<std::string_view, uint32_t>> ids;
  for (const auto& [d, spans] : by_doc) ids.emplace_back(docs[d]->id(), d);
  std::sort(ids.begin(), ids.end());

  std::string out;
  for (const auto& [id, d] : ids) {
    const Document& doc = *docs[d];
    const auto& spans = by_doc.at(d);
    const auto tokens = doc.tokens();
    // Winning span per token: entities before clauses, then schema order.
    constexpr size_t kNone = static_cast<size_t>(-1);
    std::vector<size_t> winner(tokens.size(), kNone);
    auto rank = [&](size_t s) {
      const auto& c = concepts[spans[s].concept_index];
      return std::pair(c.kind == ConceptKind::kClause ? 1 : 0, spans[s].concept_index);
    };
    for (size_t s = 0; s < spans.size(); ++s) {
      const CharRange r = spans[s].range;
      auto it = std::lower_bound(tokens.begin(), tokens.end(), r.start,
                                 [](const Token& t, uint32_t p) { return t.range.end <= p; });
      for (; it != tokens.end() && it->range.start < r.end; ++it) {
        const size_t t = static_cast<size_t>(it - tokens.begin());
        if (winner[t] == kNone || rank(s) < rank(winner[t])) winner[t] = s;
      }
    }
    const auto eff = doc.effective_tokens();
    for (const Sentence& sent : doc.sentences()) {
      size_t prev = kNone;
      for (uint32_t e = sent.effective_begin; e < sent.effective_end; ++e) {
        const uint32_t t = eff[e];
        out += doc.surface(t);
        out.push_back('\t');
        const size_t w = winner[t];
        if (w == kNone) {
          out += "O";
        } else {
          out += w == prev ? "I-" : "B-";
          out += concepts[spans[w].concept_index].id;
        }
        out.push_back('\n');
        prev = w;
      }
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace

ExportResult export_training(const ResolvedLabels& resolved, const Corpus& corpus,
                             const ConceptSchema& schema, const SplitManifest& split,
                             ExportFormat format) {
  ExportResult result;
  const auto by_doc = train_spans(resolved, corpus, schema, split, result.warnings);
  result.data = format == ExportFormat::kSpansJsonl ? spans_jsonl(by_doc, corpus, schema)
                                                    : token_bio(by_doc, corpus, schema);
  return result;
}

ResolvedLabels import_spans(std::string_view jsonl, const Corpus& corpus,
                            const ConceptSchema& schema, std::vector<std::string>* warnings,
                            std::string_view default_source) {
  std::map<std::string_view, uint32_t> doc_index;
  const auto docs = corpus.documents();
  for (size_t i = 0; i < docs.size(); ++i) doc_index[docs[i]->id()] = static_cast<uint32_t>(i);

  ResolvedLabels out;
  std::set<std::tuple<uint32_t, uint32_t, CharRange>> seen;
  size_t lineno = 0;
  size_t pos = 0;
  while (pos < jsonl.size()) {
    size_t nl = jsonl.find('\n', pos);
    if (nl == std::string_view::npos) nl = jsonl.size();
    const std::string_view line = jsonl.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    ResolvedSpan span;
    std::string doc_id;
    std::string concept_id;
    try {
      const auto j = nlohmann::json::parse(line);
      doc_id = j.at("doc").get<std::string>();
      concept_id = j.at("concept").get<std::string>();
      span.range = {j.at("start").get<uint32_t>(), j.at("end").get<uint32_t>()};
      if (j.contains("sources")) {
        span.sources = j.at("sources").get<std::vector<std::string>>();
      } else {
        span.sources = {std::string(default_source)};
      }
    } catch (const nlohmann::json::exception& e) {
      throw UserError(where + "malformed span record: " + e.what());
    }
    const auto d = doc_index.find(doc_id);
    if (d == doc_index.end()) throw UserError(where + "unknown document '" + doc_id + "'");
    const int k = schema.index_of(concept_id);
    if (k < 0) throw UserError(where + "unknown concept '" + concept_id + "'");
    const Document& doc = *docs[d->second];
    if (span.range.start >= span.range.end || span.range.end > doc.text().size()) {
      throw UserError(where + "range outside document '" + doc_id + "'");
    }
    span.doc = d->second;
    span.concept_index = static_cast<uint32_t>(k);
    const CharRange original = span.range;
    if (snap_to_tokens(doc, span.range) && warnings) {
      warnings->push_back(snap_warning(doc, concept_id, original, span.range));
    }
    std::sort(span.sources.begin(), span.sources.end());
    span.sources.erase(std::unique(span.sources.begin(), span.sources.end()),
                       span.sources.end());
    if (!seen.insert({span.doc, span.concept_index, span.range}).second) {
      throw UserError(where + "duplicate span for " + concept_id + " in '" + doc_id + "'");
    }
    out.spans.push_back(std::move(span));
  }
  sort_resolved(out, corpus, schema);
  return out;
}

}  // namespace lfe::weaksup
