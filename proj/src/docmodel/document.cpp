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

#include "common/text_util.hpp"
#include "json.hpp"
#include "lfe/docmodel.hpp"
#include "lfe/error.hpp"

namespace lfe {

namespace {

void check(bool ok, const std::string& doc_id, const std::string& what) {
  if (!ok) throw DefectError("document '" + doc_id + "': " + what);
}

}  // namespace

SymbolTable::SymbolTable() {
  for (std::string_view t : {tags::kNone, tags::kNum, tags::kWord, tags::kPunct,
                             tags::kOther, tags::kDate, tags::kTimeUnit,
                             tags::kOrgSuffix}) {
    intern(t);
  }
}

SymbolId SymbolTable::intern(std::string_view s) {
  auto it = index_.find(std::string(s));
  if (it != index_.end()) return it->second;
  auto id = static_cast<SymbolId>(names_.size());
  names_.emplace_back(s);
  index_.emplace(names_.back(), id);
  return id;
}

Document::Document(std::string doc_id, std::string text, DocumentLayers layers)
    : id_(std::move(doc_id)),
      text_(std::move(text)),
      page_starts_(std::move(layers.page_starts)),
      tokens_(std::move(layers.tokens)),
      sentences_(std::move(layers.sentences)),
      sections_(std::move(layers.sections)),
      header_footer_spans_(std::move(layers.header_footer_spans)),
      symbols_(std::move(layers.symbols)) {
  if (symbols_.empty()) symbols_ = std::move(SymbolTable()).release();
  if (page_starts_.empty()) page_starts_.push_back(0);
  lower_text_ = util::ascii_lower(text_);

  const auto size = static_cast<uint32_t>(text_.size());
  check(page_starts_.front() == 0, id_, "first page must start at 0");
  for (size_t i = 1; i < page_starts_.size(); ++i) {
    check(page_starts_[i] > page_starts_[i - 1] && page_starts_[i] <= size, id_,
          "page starts must increase within the text");
  }

  uint32_t prev_end = 0;
  for (size_t i = 0; i < tokens_.size(); ++i) {
    const Token& t = tokens_[i];
    check(t.range.start < t.range.end && t.range.end <= size, id_,
          "token " + std::to_string(i) + " has an invalid range");
    check(i == 0 || t.range.start >= prev_end, id_,
          "token " + std::to_string(i) + " overlaps its predecessor");
    check(t.pos < symbols_.size() && t.ner < symbols_.size() &&
              t.shape < symbols_.size(),
          id_, "token " + std::to_string(i) + " references an unknown symbol");
    check(t.page_index == page_of(t.range.start), id_,
          "token " + std::to_string(i) + " has an inconsistent page index");
    prev_end = t.range.end;
    if (!t.boilerplate) effective_.push_back(static_cast<uint32_t>(i));
  }

  // Sentences partition the effective token sequence, in order.
  size_t cursor = 0;
  for (size_t s = 0; s < sentences_.size(); ++s) {
    Sentence& sent = sentences_[s];
    check(sent.first_token <= sent.last_token && sent.last_token < tokens_.size(),
          id_, "sentence " + std::to_string(s) + " has an invalid token range");
    check(cursor < effective_.size() && effective_[cursor] == sent.first_token,
          id_, "sentence " + std::to_string(s) + " does not continue the partition");
    sent.effective_begin = static_cast<uint32_t>(cursor);
    while (cursor < effective_.size() && effective_[cursor] <= sent.last_token) {
      check(tokens_[effective_[cursor]].sentence_index == static_cast<int32_t>(s),
            id_, "token " + std::to_string(effective_[cursor]) +
                     " has an inconsistent sentence index");
      ++cursor;
    }
    sent.effective_end = static_cast<uint32_t>(cursor);
    check(effective_[cursor - 1] == sent.last_token, id_,
          "sentence " + std::to_string(s) + " ends on a boilerplate token");
    sent.range = {tokens_[sent.first_token].range.start,
                  tokens_[sent.last_token].range.end};
  }
  check(cursor == effective_.size(), id_,
        "sentences do not cover every non-boilerplate token");

  for (const Section& sec : sections_) {
    check(sec.depth >= 1 && sec.range.end <= size &&
              sec.range.contains(sec.heading_range),
          id_, "invalid section");
  }
}

std::string_view Document::lower(size_t token) const {
  const CharRange r = tokens_[token].range;
  return std::string_view(lower_text_).substr(r.start, r.end - r.start);
}

int Document::innermost_section(CharRange r) const {
  int best = -1;
  for (size_t i = 0; i < sections_.size(); ++i) {
    if (!sections_[i].range.contains(r)) continue;
    if (best < 0 || sections_[i].depth > sections_[best].depth ||
        sections_[best].range.contains(sections_[i].range)) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

uint32_t Document::page_of(uint32_t offset) const {
  auto it = std::upper_bound(page_starts_.begin(), page_starts_.end(), offset);
  return static_cast<uint32_t>(std::distance(page_starts_.begin(), it) - 1);
}

// --- ConceptSchema ----------------------------------------------------------

ConceptSchema::ConceptSchema(std::vector<Concept> concepts)
    : concepts_(std::move(concepts)) {
  for (size_t i = 0; i < concepts_.size(); ++i) {
    const Concept& c = concepts_[i];
    if (c.id.empty()) throw UserError("concept with empty id");
    if (!by_name_.emplace(c.id, i).second) {
      throw UserError("duplicate concept id '" + c.id + "'");
    }
  }
  for (size_t i = 0; i < concepts_.size(); ++i) {
    for (const auto& alias : concepts_[i].aliases) {
      if (!by_name_.emplace(alias, i).second) {
        throw UserError("concept alias '" + alias + "' is already in use");
      }
    }
  }
}

ConceptSchema ConceptSchema::from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("schema: ") + e.what());
  }
  if (!j.is_object() || !j.contains("concepts") || !j["concepts"].is_array()) {
    throw UserError("schema: expected an object with a 'concepts' array");
  }
  std::vector<Concept> out;
  for (const auto& jc : j["concepts"]) {
    Concept c;
    try {
      c.id = jc.at("id").get<std::string>();
      const auto kind = jc.value("kind", std::string("entity"));
      if (kind == "entity") {
        c.kind = ConceptKind::kEntity;
      } else if (kind == "clause") {
        c.kind = ConceptKind::kClause;
      } else {
        throw UserError("schema: concept '" + c.id + "' has unknown kind '" +
                        kind + "'");
      }
      c.display_name = jc.value("display_name", c.id);
      c.aliases = jc.value("aliases", std::vector<std::string>{});
      c.is_date = jc.value("value_type", std::string()) == "date";
    } catch (const nlohmann::json::exception& e) {
      throw UserError(std::string("schema: ") + e.what());
    }
    out.push_back(std::move(c));
  }
  return ConceptSchema(std::move(out));
}

const Concept* ConceptSchema::find(std::string_view id) const {
  auto it = by_name_.find(id);
  if (it == by_name_.end() || concepts_[it->second].id != id) return nullptr;
  return &concepts_[it->second];
}

const Concept* ConceptSchema::resolve(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &concepts_[it->second];
}

int ConceptSchema::index_of(std::string_view id) const {
  const Concept* c = find(id);
  return c ? static_cast<int>(c - concepts_.data()) : -1;
}

// --- Corpus -----------------------------------------------------------------

void Corpus::add(Document doc) { add(std::make_shared<const Document>(std::move(doc))); }

void Corpus::add(std::shared_ptr<const Document> doc) {
  if (index_.count(doc->id())) {
    throw UserError("duplicate document id '" + doc->id() + "'");
  }
  index_.emplace(doc->id(), docs_.size());
  docs_.push_back(std::move(doc));
}

const Document* Corpus::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : docs_[it->second].get();
}

std::vector<std::string> Corpus::ids() const {
  std::vector<std::string> out;
  out.reserve(index_.size());
  for (const auto& [id, _] : index_) out.push_back(id);
  return out;
}

std::string Corpus::content_hash() const {
  uint64_t h = util::fnv1a64("");
  for (const auto& [id, i] : index_) {
    h = util::fnv1a64(id, h);
    h = util::fnv1a64(std::string_view("\0", 1), h);
    h = util::fnv1a64(docs_[i]->text(), h);
    h = util::fnv1a64(std::string_view("\0", 1), h);
  }
  return util::hex64(h);
}

}  // namespace lfe
