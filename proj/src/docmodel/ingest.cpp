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
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "common/text_util.hpp"
#include "json.hpp"
#include "lfe/docmodel.hpp"
#include "lfe/error.hpp"

namespace lfe {

namespace {

std::vector<uint32_t> find_page_starts(std::string_view text,
                                       std::string_view marker,
                                       std::vector<CharRange>* marker_ranges) {
  std::vector<uint32_t> starts{0};
  if (marker.empty()) return starts;
  size_t pos = 0;
  while ((pos = text.find(marker, pos)) != std::string_view::npos) {
    const auto end = static_cast<uint32_t>(pos + marker.size());
    if (marker_ranges) marker_ranges->push_back({static_cast<uint32_t>(pos), end});
    if (end > starts.back()) starts.push_back(end);
    pos = end;
  }
  // A trailing marker does not open an empty page.
  if (starts.size() > 1 && starts.back() == text.size()) starts.pop_back();
  return starts;
}

std::vector<PageText> page_texts(std::string_view text,
                                 std::span<const uint32_t> starts,
                                 std::span<const CharRange> markers) {
  std::vector<PageText> pages;
  for (size_t p = 0; p < starts.size(); ++p) {
    uint32_t end = p + 1 < starts.size() ? starts[p + 1]
                                         : static_cast<uint32_t>(text.size());
    // Exclude the marker that closes this page.
    auto m = std::lower_bound(markers.begin(), markers.end(), end,
                              [](const CharRange& r, uint32_t v) { return r.end < v; });
    if (m != markers.end() && m->end == end && m->start >= starts[p]) end = m->start;
    pages.push_back({starts[p], text.substr(starts[p], end - starts[p])});
  }
  return pages;
}

std::vector<Token> tokens_outside(std::string_view text,
                                  std::span<const CharRange> markers) {
  std::vector<Token> tokens;
  size_t m = 0;
  for (const CharRange& r : tokenize(text)) {
    while (m < markers.size() && markers[m].end <= r.start) ++m;
    if (m < markers.size() && markers[m].overlaps(r)) continue;
    Token t;
    t.range = r;
    tokens.push_back(t);
  }
  return tokens;
}

void mark_boilerplate(std::span<Token> tokens, std::span<const CharRange> spans) {
  size_t s = 0;
  for (Token& t : tokens) {
    while (s < spans.size() && spans[s].end <= t.range.start) ++s;
    t.boilerplate = s < spans.size() && spans[s].overlaps(t.range);
  }
}

void assign_pages(std::span<Token> tokens, std::span<const uint32_t> starts) {
  size_t p = 0;
  for (Token& t : tokens) {
    while (p + 1 < starts.size() && starts[p + 1] <= t.range.start) ++p;
    t.page_index = static_cast<uint32_t>(p);
  }
}

// Everything after tokenization, shared by both ingestion paths.
Document build(const std::string& doc_id, std::string text,
               std::vector<uint32_t> page_starts,
               std::span<const CharRange> markers, std::vector<Token> tokens,
               std::optional<std::vector<Sentence>> sentences,
               std::span<const std::string> ext_pos,
               std::span<const std::string> ext_ner,
               const IngestOptions& options) {
  DocumentLayers layers;
  const auto pages = page_texts(text, page_starts, markers);
  layers.header_footer_spans = detect_headers_footers(pages, options.header_footer);
  assign_pages(tokens, page_starts);
  mark_boilerplate(tokens, layers.header_footer_spans);

  if (sentences) {
    // Trim boilerplate at the edges of supplied sentences; drop sentences
    // that contain nothing else.
    for (Sentence& sent : *sentences) {
      while (sent.first_token < sent.last_token && tokens[sent.first_token].boilerplate)
        ++sent.first_token;
      while (sent.last_token > sent.first_token && tokens[sent.last_token].boilerplate)
        --sent.last_token;
    }
    std::erase_if(*sentences, [&](const Sentence& s) {
      return tokens[s.first_token].boilerplate;
    });
    for (Token& t : tokens) t.sentence_index = -1;
    for (size_t s = 0; s < sentences->size(); ++s) {
      const Sentence& sent = (*sentences)[s];
      for (uint32_t i = sent.first_token; i <= sent.last_token; ++i) {
        if (!tokens[i].boilerplate) tokens[i].sentence_index = static_cast<int32_t>(s);
      }
    }
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (!tokens[i].boilerplate && tokens[i].sentence_index < 0) {
        throw ValidationError("token " + std::to_string(i) +
                                  " is not covered by any sentence",
                              static_cast<long>(i));
      }
    }
    layers.sentences = std::move(*sentences);
  } else {
    layers.sentences = segment_sentences(text, tokens, page_starts);
  }
  layers.sections = detect_sections(text, layers.header_footer_spans);

  SymbolTable symbols;
  tag_tokens(text, tokens, symbols, ext_pos, ext_ner);
  layers.symbols = std::move(symbols).release();
  layers.tokens = std::move(tokens);
  layers.page_starts = std::move(page_starts);
  return Document(doc_id, std::move(text), std::move(layers));
}

}  // namespace

Document ingest_text(const std::string& doc_id, std::string raw,
                     const IngestOptions& options) {
  if (doc_id.empty()) throw UserError("document id must not be empty");
  std::vector<CharRange> markers;
  auto page_starts = find_page_starts(raw, options.page_break_marker, &markers);

  auto tokens = tokens_outside(raw, markers);
  return build(doc_id, std::move(raw), std::move(page_starts), markers,
               std::move(tokens), std::nullopt, {}, {}, options);
}

Document load_pretokenized(const std::string& doc_id, std::string_view json_text,
                           const IngestOptions& options) {
  if (doc_id.empty()) throw UserError("document id must not be empty");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what(), -1);
  }
  if (!j.is_object()) throw ValidationError("payload must be a JSON object", -1);

  static const std::set<std::string> kTopLevel = {"doc_id", "text", "pages",
                                                  "tokens", "sentences"};
  for (const auto& [key, _] : j.items()) {
    if (!kTopLevel.count(key)) {
      throw ValidationError("unknown field '" + key + "'", -1);
    }
  }
  if (!j.contains("text") || !j["text"].is_string()) {
    throw ValidationError("missing string field 'text'", -1);
  }
  if (j.contains("doc_id") &&
      (!j["doc_id"].is_string() || j["doc_id"].get<std::string>() != doc_id)) {
    throw ValidationError("doc_id does not match '" + doc_id + "'", -1);
  }
  std::string text = j["text"].get<std::string>();
  const auto size = static_cast<int64_t>(text.size());

  std::vector<CharRange> markers;
  std::vector<uint32_t> page_starts;
  if (j.contains("pages")) {
    if (!j["pages"].is_array()) throw ValidationError("'pages' must be an array", -1);
    for (const auto& p : j["pages"]) {
      if (!p.is_number_integer()) throw ValidationError("page offsets must be integers", -1);
      const auto v = p.get<int64_t>();
      if (v < 0 || v > size || (!page_starts.empty() && v <= page_starts.back())) {
        throw ValidationError("page offsets must increase within the text", -1);
      }
      page_starts.push_back(static_cast<uint32_t>(v));
    }
    if (page_starts.empty() || page_starts.front() != 0) {
      page_starts.insert(page_starts.begin(), 0);
    }
    // Marker-delimited text still needs its markers excluded from page text.
    find_page_starts(text, options.page_break_marker, &markers);
  } else {
    page_starts = find_page_starts(text, options.page_break_marker, &markers);
  }

  std::vector<Token> tokens;
  std::vector<std::string> ext_pos;
  std::vector<std::string> ext_ner;
  if (j.contains("tokens")) {
    if (!j["tokens"].is_array()) throw ValidationError("'tokens' must be an array", -1);
    static const std::set<std::string> kTokenFields = {"start", "end", "pos", "ner"};
    int64_t prev_end = 0;
    for (size_t i = 0; i < j["tokens"].size(); ++i) {
      const auto& jt = j["tokens"][i];
      const auto idx = static_cast<long>(i);
      if (!jt.is_object()) throw ValidationError("token " + std::to_string(i) + " is not an object", idx);
      for (const auto& [key, _] : jt.items()) {
        if (!kTokenFields.count(key)) {
          throw ValidationError("token " + std::to_string(i) + ": unknown field '" + key + "'", idx);
        }
      }
      if (!jt.contains("start") || !jt.contains("end") ||
          !jt["start"].is_number_integer() || !jt["end"].is_number_integer()) {
        throw ValidationError("token " + std::to_string(i) + ": start/end must be integers", idx);
      }
      const auto start = jt["start"].get<int64_t>();
      const auto end = jt["end"].get<int64_t>();
      if (start < 0 || end > size || start >= end) {
        throw ValidationError("token " + std::to_string(i) + ": range out of bounds", idx);
      }
      if (i > 0 && start < prev_end) {
        throw ValidationError("token " + std::to_string(i) + ": overlaps token " +
                                  std::to_string(i - 1),
                              idx);
      }
      prev_end = end;
      for (const char* field : {"pos", "ner"}) {
        if (jt.contains(field) && !jt[field].is_string()) {
          throw ValidationError("token " + std::to_string(i) + ": '" + field +
                                    "' must be a string",
                                idx);
        }
      }
      Token t;
      t.range = {static_cast<uint32_t>(start), static_cast<uint32_t>(end)};
      tokens.push_back(t);
      ext_pos.push_back(jt.value("pos", std::string()));
      ext_ner.push_back(jt.value("ner", std::string()));
    }
  } else {
    tokens = tokens_outside(text, markers);
  }

  std::optional<std::vector<Sentence>> sentences;
  if (j.contains("sentences")) {
    if (!j["sentences"].is_array()) {
      throw ValidationError("'sentences' must be an array", -1);
    }
    sentences.emplace();
    int64_t prev = 0;
    for (const auto& js : j["sentences"]) {
      if (!js.is_object() || !js.contains("start_token") || !js.contains("end_token") ||
          !js["start_token"].is_number_integer() || !js["end_token"].is_number_integer()) {
        throw ValidationError("sentences need integer start_token/end_token", -1);
      }
      // end_token is exclusive, like the character offsets.
      const auto b = js["start_token"].get<int64_t>();
      const auto e = js["end_token"].get<int64_t>();
      if (b < prev || e <= b || e > static_cast<int64_t>(tokens.size())) {
        throw ValidationError("sentence token ranges must be ordered, disjoint and in bounds",
                              static_cast<long>(std::min<int64_t>(b, tokens.size())));
      }
      Sentence s;
      s.first_token = static_cast<uint32_t>(b);
      s.last_token = static_cast<uint32_t>(e - 1);
      sentences->push_back(s);
      prev = e;
    }
  }

  return build(doc_id, std::move(text), std::move(page_starts), markers,
               std::move(tokens), std::move(sentences), ext_pos, ext_ner, options);
}

Corpus load_corpus_dir(const std::filesystem::path& dir,
                       const IngestOptions& options, int workers) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw EnvironmentError("corpus directory not found: " + dir.string());
  }
  std::map<std::string, fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext != ".txt" && ext != ".json") continue;
    const auto id = entry.path().stem().string();
    if (!files.emplace(id, entry.path()).second) {
      throw UserError("duplicate document id '" + id + "' in " + dir.string());
    }
  }
  if (ec) throw EnvironmentError("cannot list " + dir.string() + ": " + ec.message());

  std::vector<std::pair<std::string, fs::path>> items(files.begin(), files.end());
  std::vector<std::optional<Document>> docs(items.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (size_t i = next++; i < items.size(); i = next++) {
      try {
        const auto& [id, path] = items[i];
        auto raw = util::read_file(path);
        if (path.extension() == ".json") {
          docs[i].emplace(load_pretokenized(id, raw, options));
        } else {
          docs[i].emplace(ingest_text(id, std::move(raw), options));
        }
      } catch (const ValidationError& e) {
        std::lock_guard lock(failure_mu);
        if (!failure) {
          failure = std::make_exception_ptr(ValidationError(
              items[i].second.filename().string() + ": " + e.what(), e.token_index()));
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(items.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  Corpus corpus;
  for (auto& d : docs) corpus.add(std::move(*d));
  return corpus;
}

}  // namespace lfe
