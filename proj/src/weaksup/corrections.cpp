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

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "lfe/error.hpp"
#include "lfe/weaksup.hpp"

namespace lfe::weaksup {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kAccept:
      return "accept";
    case Verdict::kReject:
      return "reject";
    case Verdict::kReplace:
      return "replace";
  }
  return "?";
}

Verdict parse_verdict(std::string_view name) {
  if (name == "accept") return Verdict::kAccept;
  if (name == "reject") return Verdict::kReject;
  if (name == "replace") return Verdict::kReplace;
  throw UserError("unknown verdict '" + std::string(name) +
                  "' (expected accept, reject or replace)");
}

namespace {

auto key_of(const Correction& c) {
  return std::tie(c.doc_id, c.concept_id, c.range.start, c.range.end);
}

void check_range(const Document& doc, const CharRange& r, const char* what) {
  if (r.start >= r.end || r.end > doc.text().size()) {
    throw UserError(std::string(what) + " [" + std::to_string(r.start) + ", " +
                    std::to_string(r.end) + ") is outside document '" + doc.id() + "'");
  }
}

}  // namespace

std::vector<Correction> effective_corrections(const std::vector<Correction>& journal) {
  std::map<std::tuple<std::string, std::string, uint32_t, uint32_t>, const Correction*> last;
  for (const Correction& c : journal) last[key_of(c)] = &c;
  std::vector<Correction> out;
  out.reserve(last.size());
  for (const auto& [key, c] : last) out.push_back(*c);
  return out;
}

void check_correction(const Correction& c, const Corpus& corpus, const ConceptSchema& schema) {
  const Document* doc = corpus.find(c.doc_id);
  if (!doc) throw UserError("unknown document '" + c.doc_id + "'");
  if (!schema.find(c.concept_id)) throw UserError("unknown concept '" + c.concept_id + "'");
  check_range(*doc, c.range, "range");
  if (c.verdict == Verdict::kReplace) check_range(*doc, c.replacement, "replacement range");
}

LabelSet apply_corrections(const LabelSet& votes, const std::vector<Correction>& effective,
                           const Corpus& corpus, const ConceptSchema& schema) {
  std::map<std::string_view, uint32_t> doc_index;
  const auto docs = corpus.documents();
  for (size_t i = 0; i < docs.size(); ++i) doc_index[docs[i]->id()] = static_cast<uint32_t>(i);

  std::set<std::tuple<uint32_t, uint32_t, CharRange>> removed;
  LabelSet out;
  out.sources = votes.sources;
  std::vector<Vote> added;
  for (const Correction& c : effective) {
    check_correction(c, corpus, schema);
    const uint32_t d = doc_index.at(c.doc_id);
    const auto k = static_cast<uint32_t>(schema.index_of(c.concept_id));
    if (c.verdict == Verdict::kAccept) {
      added.push_back({d, k, c.range, out.source_index(kUserSource)});
    } else {
      removed.insert({d, k, c.range});
      if (c.verdict == Verdict::kReplace) {
        added.push_back({d, k, c.replacement, out.source_index(kUserSource)});
      }
    }
  }
  for (const Vote& v : votes.votes) {
    if (!removed.contains({v.doc, v.concept_index, v.range})) out.votes.push_back(v);
  }
  out.votes.insert(out.votes.end(), added.begin(), added.end());
  canonicalize(out, corpus, schema);
  return out;
}

std::string correction_to_json(const Correction& c) {
  nlohmann::ordered_json j;
  j["seq"] = c.seq;
  j["doc_id"] = c.doc_id;
  j["concept"] = c.concept_id;
  j["start"] = c.range.start;
  j["end"] = c.range.end;
  j["verdict"] = verdict_name(c.verdict);
  if (c.verdict == Verdict::kReplace) {
    j["replacement"] = {{"start", c.replacement.start}, {"end", c.replacement.end}};
  }
  j["timestamp"] = c.timestamp;
  return j.dump();
}

Correction correction_from_json(std::string_view json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    Correction c;
    c.seq = j.value("seq", uint64_t{0});
    c.doc_id = j.at("doc_id").get<std::string>();
    c.concept_id = j.at("concept").get<std::string>();
    c.range = {j.at("start").get<uint32_t>(), j.at("end").get<uint32_t>()};
    c.verdict = parse_verdict(j.at("verdict").get<std::string>());
    if (c.verdict == Verdict::kReplace) {
      const auto& r = j.at("replacement");
      c.replacement = {r.at("start").get<uint32_t>(), r.at("end").get<uint32_t>()};
    }
    c.timestamp = j.value("timestamp", std::string());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("malformed correction: ") + e.what());
  }
}

CorrectionJournal::CorrectionJournal(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) {
    if (std::filesystem::exists(path_)) {
      throw EnvironmentError("cannot read correction journal " + path_.string());
    }
    return;
  }
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      entries_.push_back(correction_from_json(line));
    } catch (const UserError& e) {
      throw UserError(path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

const Correction& CorrectionJournal::append(Correction c) {
  c.seq = entries_.size();
  if (!path_.empty()) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app);
    out << correction_to_json(c) << '\n';
    out.flush();
    if (!out) throw EnvironmentError("cannot append to correction journal " + path_.string());
  }
  entries_.push_back(std::move(c));
  return entries_.back();
}

}  // namespace lfe::weaksup
