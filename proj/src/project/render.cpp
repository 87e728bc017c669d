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

#include "project/render.hpp"

#include <algorithm>
#include <cstdio>

#include "lfe/error.hpp"

namespace lfe {

namespace render {

std::string dump(const Json& j) {
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

Json coverage(const weaksup::CoverageReport& report, const Corpus& corpus) {
  Json j;
  j["bucket"] = "train";
  j["corpus_hash"] = corpus.content_hash();
  j["train_docs"] = report.train_docs;
  Json concepts = Json::array();
  for (const auto& c : report.concepts) {
    Json e;
    e["concept"] = c.concept_id;
    e["labeled_docs"] = c.labeled_docs;
    if (c.coverage) {
      e["coverage"] = *c.coverage;
    } else {
      e["coverage"] = nullptr;
    }
    e["undefined"] = !c.coverage.has_value();
    concepts.push_back(std::move(e));
  }
  j["concepts"] = std::move(concepts);
  return j;
}

Json correction(const weaksup::Correction& c) {
  Json j;
  j["seq"] = c.seq;
  j["doc_id"] = c.doc_id;
  j["concept"] = c.concept_id;
  j["start"] = c.range.start;
  j["end"] = c.range.end;
  j["verdict"] = weaksup::verdict_name(c.verdict);
  if (c.verdict == weaksup::Verdict::kReplace) {
    j["replacement"] = {{"start", c.replacement.start}, {"end", c.replacement.end}};
  }
  j["timestamp"] = c.timestamp;
  return j;
}

namespace {

Json range_json(const Document& doc, CharRange r) {
  Json j;
  j["start"] = r.start;
  j["end"] = r.end;
  j["text"] = std::string(doc.slice(r));
  return j;
}

// Sentence-aligned context around [first, last] token, one sentence wider
// on each side.
CharRange context_of(const Document& doc, uint32_t first, uint32_t last) {
  const auto sentences = doc.sentences();
  const auto tokens = doc.tokens();
  if (sentences.empty()) return tokens[first].range;
  int32_t s0 = tokens[first].sentence_index;
  int32_t s1 = tokens[last].sentence_index;
  if (s0 < 0 || s1 < 0) return {tokens[first].range.start, tokens[last].range.end};
  s0 = std::max(0, s0 - 1);
  s1 = std::min(static_cast<int32_t>(sentences.size()) - 1, s1 + 1);
  return {sentences[s0].range.start, sentences[s1].range.end};
}

}  // namespace

DocMatches match_document(const std::vector<engine::CompiledLF>& clfs, const Document& doc,
                          uint32_t doc_index, const engine::MatchOptions& options) {
  DocMatches out;
  for (size_t l = 0; l < clfs.size(); ++l) {
    const auto& clf = clfs[l];
    engine::MatchReport report;
    const auto matches = engine::match_document(clf, doc, options, &report);
    for (const auto& m : matches) {
      Json jm;
      jm["lf"] = clf.name();
      jm["concept"] = clf.source().concept_id;
      jm["window"] = m.window;
      jm["full_range"] = range_json(doc, m.full_range);
      Json caps = Json::array();
      for (const auto& c : m.captures) {
        const auto& slot = clf.captures()[c.slot];
        Json jc = range_json(doc, c.range);
        jc["name"] = slot.name;
        jc["concept"] = slot.concept_id;
        caps.push_back(std::move(jc));
      }
      jm["captures"] = std::move(caps);
      jm["context"] = range_json(doc, context_of(doc, m.first_token, m.last_token));
      out.matches.push_back(std::move(jm));
      engine::emit_votes(clf, doc, m, doc_index, static_cast<uint32_t>(l), out.votes);
    }
    out.budget.insert(out.budget.end(), report.budget.begin(), report.budget.end());
  }
  return out;
}

}  // namespace render

using render::Json;

std::string coverage_json(const weaksup::CoverageReport& report, const Corpus& corpus) {
  return render::dump(render::coverage(report, corpus));
}

std::string coverage_json(const Project& p) {
  return coverage_json(weaksup::coverage(p.resolved(), p.split(), p.corpus(), p.schema()),
                       p.corpus());
}

std::string conflict_json(const Project& p) {
  const auto stats = weaksup::conflict_stats(p.run().labels, p.corpus(), p.schema());
  Json j;
  j["corpus_hash"] = p.corpus().content_hash();
  j["docs"] = p.corpus().size();
  Json concepts = Json::array();
  for (const auto& c : stats) {
    Json e;
    e["concept"] = c.concept_id;
    e["conflicting_docs"] = c.conflicting_docs;
    if (c.conflict) {
      e["conflict"] = *c.conflict;
    } else {
      e["conflict"] = nullptr;
    }
    concepts.push_back(std::move(e));
  }
  j["concepts"] = std::move(concepts);
  return render::dump(j);
}

std::string eval_json(const Project& p, weaksup::Bucket bucket) {
  if (bucket == weaksup::Bucket::kTrain) {
    throw UserError("evaluation buckets are dev and test");
  }
  const auto report = evalkit::score_corpus(p.predictions(), p.gold(), p.corpus(), p.schema(),
                                            p.split(), bucket, p.config().policies);
  return evalkit::report_to_json(report);
}

std::string doc_list_json(const Corpus& corpus) {
  Json j = Json::array();
  for (const auto& id : corpus.ids()) {
    const Document& d = *corpus.find(id);
    Json e;
    e["id"] = d.id();
    e["chars"] = d.text().size();
    e["pages"] = d.page_starts().size();
    e["tokens"] = d.tokens().size();
    e["sentences"] = d.sentences().size();
    e["sections"] = d.sections().size();
    e["boilerplate_spans"] = d.header_footer_spans().size();
    j.push_back(std::move(e));
  }
  return render::dump(j);
}

std::string doc_json(const Document& d) {
  Json j;
  j["id"] = d.id();
  j["text"] = d.text();
  j["pages"] = d.page_starts();
  Json tokens = Json::array();
  for (size_t i = 0; i < d.tokens().size(); ++i) {
    const Token& t = d.tokens()[i];
    Json e;
    e["start"] = t.range.start;
    e["end"] = t.range.end;
    e["pos"] = std::string(d.pos(i));
    e["ner"] = std::string(d.ner(i));
    e["shape"] = std::string(d.shape(i));
    e["sentence"] = t.sentence_index;
    e["page"] = t.page_index;
    e["boilerplate"] = t.boilerplate;
    tokens.push_back(std::move(e));
  }
  j["tokens"] = std::move(tokens);
  Json sentences = Json::array();
  for (const Sentence& s : d.sentences()) {
    sentences.push_back({{"start", s.range.start},
                         {"end", s.range.end},
                         {"first_token", s.first_token},
                         {"last_token", s.last_token}});
  }
  j["sentences"] = std::move(sentences);
  Json sections = Json::array();
  for (const Section& s : d.sections()) {
    sections.push_back({{"start", s.range.start},
                        {"end", s.range.end},
                        {"heading_start", s.heading_range.start},
                        {"heading_end", s.heading_range.end},
                        {"depth", s.depth}});
  }
  j["sections"] = std::move(sections);
  Json boiler = Json::array();
  for (const CharRange& r : d.header_footer_spans()) {
    boiler.push_back({{"start", r.start}, {"end", r.end}});
  }
  j["boilerplate"] = std::move(boiler);
  return render::dump(j);
}

std::string corrections_json(const std::vector<weaksup::Correction>& effective) {
  Json j = Json::array();
  for (const auto& c : effective) j.push_back(render::correction(c));
  return render::dump(j);
}

std::string resolved_jsonl(const weaksup::ResolvedLabels& resolved, const Corpus& corpus,
                           const ConceptSchema& schema) {
  auto sorted = resolved;
  weaksup::sort_resolved(sorted, corpus, schema);
  const auto docs = corpus.documents();
  std::string out;
  for (const auto& s : sorted.spans) {
    Json j;
    j["doc"] = docs[s.doc]->id();
    j["concept"] = schema.concepts()[s.concept_index].id;
    j["start"] = s.range.start;
    j["end"] = s.range.end;
    j["sources"] = s.sources;
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

namespace {

std::vector<uint64_t> resolved_per_concept(const Project& p) {
  std::vector<uint64_t> counts(p.schema().concepts().size(), 0);
  for (const auto& s : p.resolved().spans) ++counts[s.concept_index];
  return counts;
}

}  // namespace

std::string run_summary_json(const Project& p, const engine::RunResult& r,
                             const Artifacts& artifacts) {
  const auto& clfs = p.compiled();
  Json j;
  Json lfs = Json::array();
  for (size_t i = 0; i < r.stats.lfs.size(); ++i) {
    const auto& s = r.stats.lfs[i];
    Json e;
    e["name"] = s.name;
    e["concept"] = clfs[i].source().concept_id;
    e["priority"] = clfs[i].priority();
    e["matches"] = s.matches;
    e["votes"] = s.votes;
    e["windows"] = s.windows;
    e["windows_passed"] = s.windows_passed;
    lfs.push_back(std::move(e));
  }
  j["lfs"] = std::move(lfs);
  j["documents"] = p.corpus().size();
  j["votes"] = r.labels.votes.size();
  const auto per_concept = resolved_per_concept(p);
  Json resolved;
  uint64_t total = 0;
  for (size_t c = 0; c < per_concept.size(); ++c) {
    resolved[p.schema().concepts()[c].id] = per_concept[c];
    total += per_concept[c];
  }
  j["resolved"] = total;
  j["resolved_per_concept"] = std::move(resolved);
  Json budget = Json::array();
  for (const auto& b : r.stats.budget) {
    budget.push_back({{"doc", b.doc_id}, {"lf", b.lf}, {"window", b.window}, {"steps", b.steps}});
  }
  j["budget_exceeded"] = std::move(budget);
  Json arts = Json::object();
  for (const auto& [kind, path] : artifacts) arts[kind] = path;
  j["artifacts"] = std::move(arts);
  Json meta;
  meta["workers"] = r.stats.workers;
  meta["seconds"] = r.stats.seconds;
  Json lf_seconds = Json::object();
  for (const auto& s : r.stats.lfs) lf_seconds[s.name] = s.seconds;
  meta["lf_seconds"] = std::move(lf_seconds);
  j["meta"] = std::move(meta);
  return render::dump(j);
}

std::string run_summary_text(const Project& p, const engine::RunResult& r,
                             const Artifacts& artifacts) {
  const auto& clfs = p.compiled();
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "ran %zu labeling functions over %zu documents in %.1f ms (%d worker%s)\n",
                clfs.size(), p.corpus().size(), r.stats.seconds * 1e3, r.stats.workers,
                r.stats.workers == 1 ? "" : "s");
  out += buf;
  size_t name_w = 2;
  size_t concept_w = 7;
  for (const auto& c : clfs) {
    name_w = std::max(name_w, c.name().size());
    concept_w = std::max(concept_w, c.source().concept_id.size());
  }
  std::snprintf(buf, sizeof buf, "  %-*s  %-*s  %8s  %8s  %10s\n", static_cast<int>(name_w), "LF",
                static_cast<int>(concept_w), "concept", "matches", "votes", "time");
  out += buf;
  for (size_t i = 0; i < r.stats.lfs.size(); ++i) {
    const auto& s = r.stats.lfs[i];
    std::snprintf(buf, sizeof buf, "  %-*s  %-*s  %8llu  %8llu  %7.2f ms\n",
                  static_cast<int>(name_w), s.name.c_str(), static_cast<int>(concept_w),
                  clfs[i].source().concept_id.c_str(),
                  static_cast<unsigned long long>(s.matches),
                  static_cast<unsigned long long>(s.votes), s.seconds * 1e3);
    out += buf;
  }
  out += "resolved labels per concept:\n";
  const auto per_concept = resolved_per_concept(p);
  size_t cw = 0;
  for (const auto& c : p.schema().concepts()) cw = std::max(cw, c.id.size());
  for (size_t c = 0; c < per_concept.size(); ++c) {
    std::snprintf(buf, sizeof buf, "  %-*s  %llu\n", static_cast<int>(cw),
                  p.schema().concepts()[c].id.c_str(),
                  static_cast<unsigned long long>(per_concept[c]));
    out += buf;
  }
  if (!r.stats.budget.empty()) {
    out += "step budget exceeded in " + std::to_string(r.stats.budget.size()) + " window(s):\n";
    for (const auto& b : r.stats.budget) {
      out += "  " + b.doc_id + " " + b.lf + " window " + std::to_string(b.window) + "\n";
    }
  }
  for (const auto& [kind, path] : artifacts) out += "wrote " + kind + ": " + path + "\n";
  return out;
}

std::string matches_json(const std::vector<engine::CompiledLF>& clfs, const Document& doc,
                         const engine::MatchOptions& options) {
  Json j;
  j["doc_id"] = doc.id();
  j["matches"] = render::match_document(clfs, doc, 0, options).matches;
  return render::dump(j);
}

}  // namespace lfe
