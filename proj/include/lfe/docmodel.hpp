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

// Document model: ingested text plus the derived layers labeling functions
// predicate on (tokens, sentences, sections, pages, boilerplate marks).
//
// All offsets are byte offsets into the UTF-8 document text.

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lfe {

// Half-open byte range [start, end).
struct CharRange {
  uint32_t start = 0;
  uint32_t end = 0;

  uint32_t length() const { return end - start; }
  bool empty() const { return end <= start; }
  bool contains(const CharRange& o) const {
    return start <= o.start && o.end <= end;
  }
  bool overlaps(const CharRange& o) const {
    return start < o.end && o.start < end;
  }
  auto operator<=>(const CharRange&) const = default;
};

// Index into Document::symbol().
using SymbolId = uint32_t;

struct Token {
  CharRange range;
  SymbolId pos = 0;
  SymbolId ner = 0;
  SymbolId shape = 0;
  // -1 for boilerplate tokens, which belong to no sentence.
  int32_t sentence_index = -1;
  uint32_t page_index = 0;
  bool boilerplate = false;
};

struct Sentence {
  CharRange range;
  // Inclusive token indices. Boilerplate tokens between them are skipped.
  uint32_t first_token = 0;
  uint32_t last_token = 0;
  // Half-open slice of Document::effective_tokens() covered by the sentence.
  uint32_t effective_begin = 0;
  uint32_t effective_end = 0;
};

struct Section {
  CharRange range;
  CharRange heading_range;
  int depth = 1;
};

// Built-in tag values.
namespace tags {
inline constexpr std::string_view kNum = "NUM";
inline constexpr std::string_view kWord = "WORD";
inline constexpr std::string_view kPunct = "PUNCT";
inline constexpr std::string_view kOther = "OTHER";
inline constexpr std::string_view kDate = "DATE";
inline constexpr std::string_view kTimeUnit = "TIME_UNIT";
inline constexpr std::string_view kOrgSuffix = "ORG_SUFFIX";
inline constexpr std::string_view kNone = "NONE";
}  // namespace tags

struct HeaderFooterParams {
  // Lines examined at the top and at the bottom of every page.
  size_t zone_lines = 3;
  // Fraction of pages a normalized line must recur on to be boilerplate.
  double threshold = 0.6;
};

struct IngestOptions {
  std::string page_break_marker = "\f";
  HeaderFooterParams header_footer;
};

// Layers as produced by the ingestion stages, before validation.
struct DocumentLayers {
  std::vector<uint32_t> page_starts;
  std::vector<Token> tokens;
  std::vector<Sentence> sentences;
  std::vector<Section> sections;
  std::vector<CharRange> header_footer_spans;
  std::vector<std::string> symbols;
};

// Immutable once constructed; safe to share between threads.
class Document {
 public:
  // Validates the layer invariants and throws DefectError on violation.
  Document(std::string doc_id, std::string text, DocumentLayers layers);

  const std::string& id() const { return id_; }
  const std::string& text() const { return text_; }

  std::span<const Token> tokens() const { return tokens_; }
  std::span<const Sentence> sentences() const { return sentences_; }
  std::span<const Section> sections() const { return sections_; }
  std::span<const uint32_t> page_starts() const { return page_starts_; }
  std::span<const CharRange> header_footer_spans() const {
    return header_footer_spans_;
  }
  // Indices of non-boilerplate tokens in document order.
  std::span<const uint32_t> effective_tokens() const { return effective_; }

  std::string_view slice(CharRange r) const {
    return std::string_view(text_).substr(r.start, r.end - r.start);
  }
  std::string_view surface(size_t token) const {
    return slice(tokens_[token].range);
  }
  std::string_view lower(size_t token) const;
  std::string_view pos(size_t token) const { return symbols_[tokens_[token].pos]; }
  std::string_view ner(size_t token) const { return symbols_[tokens_[token].ner]; }
  std::string_view shape(size_t token) const {
    return symbols_[tokens_[token].shape];
  }
  std::string_view symbol(SymbolId id) const { return symbols_[id]; }

  // Innermost section containing `r`, or -1.
  int innermost_section(CharRange r) const;
  // Page index of a byte offset.
  uint32_t page_of(uint32_t offset) const;

 private:
  std::string id_;
  std::string text_;
  std::string lower_text_;
  std::vector<uint32_t> page_starts_;
  std::vector<Token> tokens_;
  std::vector<Sentence> sentences_;
  std::vector<Section> sections_;
  std::vector<CharRange> header_footer_spans_;
  std::vector<std::string> symbols_;
  std::vector<uint32_t> effective_;
};

// Interns tag and shape strings for one document under construction.
class SymbolTable {
 public:
  SymbolTable();
  SymbolId intern(std::string_view s);
  std::vector<std::string> release() && { return std::move(names_); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, SymbolId> index_;
};

// --- Ingestion stages -------------------------------------------------------

// Maximal runs of letters/digits (bytes >= 0x80 count as letters, so UTF-8
// sequences stay whole) are single tokens; every other non-whitespace byte is
// its own token.
std::vector<CharRange> tokenize(std::string_view raw);

struct PageText {
  uint32_t offset = 0;  // where the page begins in the document
  std::string_view text;
};

// Marks lines in the top/bottom zone of each page whose normalized form
// recurs in the same zone on at least `threshold` of all pages. Returns
// document-absolute line ranges, sorted.
std::vector<CharRange> detect_headers_footers(std::span<const PageText> pages,
                                              const HeaderFooterParams& params);

// Splits the non-boilerplate tokens into sentences; tokens must already carry
// their boilerplate flag.
// Paragraph breaks are not inferred from gaps that cross a page boundary or
// skip boilerplate.
std::vector<Sentence> segment_sentences(std::string_view text,
                                        std::span<Token> tokens,
                                        std::span<const uint32_t> page_starts);

std::vector<Section> detect_sections(std::string_view text,
                                     std::span<const CharRange> boilerplate);

// Fills pos/ner/shape. Tokens with externally supplied tags (non-empty entry
// in `external_pos`/`external_ner`) keep them.
void tag_tokens(std::string_view text, std::span<Token> tokens,
                SymbolTable& symbols,
                std::span<const std::string> external_pos = {},
                std::span<const std::string> external_ner = {});

std::string token_shape(std::string_view surface);

// Full pipeline: tokenize, header/footer detection, sentences, sections,
// tagging. Deterministic in its inputs. An empty doc_id is a UserError.
Document ingest_text(const std::string& doc_id, std::string raw,
                     const IngestOptions& options = {});

// Builds a document from the pre-tokenized JSON format. Supplied layers are
// taken verbatim; absent ones are derived. Throws ValidationError.
Document load_pretokenized(const std::string& doc_id, std::string_view json_text,
                           const IngestOptions& options = {});

// --- Concept schema ---------------------------------------------------------

enum class ConceptKind { kEntity, kClause };

struct Concept {
  std::string id;
  ConceptKind kind = ConceptKind::kEntity;
  std::string display_name;
  // Alternative names usable as capture names in labeling functions.
  std::vector<std::string> aliases;
  // Date-valued entities default to exact-match scoring.
  bool is_date = false;
};

class ConceptSchema {
 public:
  ConceptSchema() = default;
  // Throws UserError on duplicate ids or aliases.
  explicit ConceptSchema(std::vector<Concept> concepts);

  static ConceptSchema from_json(std::string_view json_text);

  std::span<const Concept> concepts() const { return concepts_; }
  const Concept* find(std::string_view id) const;
  // Resolves an id or alias.
  const Concept* resolve(std::string_view name) const;
  // Position in declaration order, or -1.
  int index_of(std::string_view id) const;

 private:
  std::vector<Concept> concepts_;
  std::map<std::string, size_t, std::less<>> by_name_;
};

// --- Corpus -----------------------------------------------------------------

class Corpus {
 public:
  // Throws UserError when the id is already present.
  void add(Document doc);
  void add(std::shared_ptr<const Document> doc);

  size_t size() const { return docs_.size(); }
  std::span<const std::shared_ptr<const Document>> documents() const {
    return docs_;
  }
  const Document* find(std::string_view id) const;
  std::vector<std::string> ids() const;
  // Stable content hash over (id, text) pairs, hex encoded.
  std::string content_hash() const;

 private:
  std::vector<std::shared_ptr<const Document>> docs_;
  std::map<std::string, size_t, std::less<>> index_;
};

// Reads `<dir>/<doc_id>.txt` and `<dir>/<doc_id>.json` files, sorted by id.
// Missing directory is an EnvironmentError.
Corpus load_corpus_dir(const std::filesystem::path& dir,
                       const IngestOptions& options = {}, int workers = 1);

}  // namespace lfe
