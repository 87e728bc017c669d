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
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "lfe/error.hpp"

namespace lfe {
namespace {

using testing::ner_tags;
using testing::pos_tags;
using testing::surfaces;
using Strings = std::vector<std::string>;

Strings token_texts(std::string_view raw) {
  Strings out;
  for (const CharRange& r : tokenize(raw)) out.emplace_back(raw.substr(r.start, r.length()));
  return out;
}

// Line ranges of `text` with surrounding whitespace trimmed.
std::vector<CharRange> lines_of(std::string_view text, uint32_t base) {
  std::vector<CharRange> out;
  uint32_t start = 0;
  for (uint32_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      uint32_t b = start;
      uint32_t e = i;
      while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
      while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
      out.push_back({base + b, base + e});
      start = i + 1;
    }
  }
  return out;
}

std::string fold(std::string_view s) {
  std::string out;
  bool digit = false;
  bool space = false;
  for (char c : s) {
    if (c >= '0' && c <= '9') {
      if (!digit) out.push_back('0');
      digit = true;
      space = false;
      continue;
    }
    digit = false;
    if (c == ' ' || c == '\t' || c == '\r') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

// Independent count of recurring zone lines.
std::vector<CharRange> oracle_headers_footers(std::string_view text, size_t k,
                                              double theta) {
  std::vector<std::pair<uint32_t, std::string_view>> pages;
  uint32_t start = 0;
  for (uint32_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\f') {
      pages.push_back({start, text.substr(start, i - start)});
      start = i + 1;
    }
  }
  if (pages.size() < 2) return {};
  std::vector<std::vector<CharRange>> top(pages.size()), bottom(pages.size());
  std::map<std::string, std::set<size_t>> top_pages, bottom_pages;
  for (size_t p = 0; p < pages.size(); ++p) {
    std::vector<CharRange> nonblank;
    for (const CharRange& l : lines_of(pages[p].second, pages[p].first)) {
      if (!fold(text.substr(l.start, l.length())).empty()) nonblank.push_back(l);
    }
    for (size_t i = 0; i < nonblank.size() && i < k; ++i) {
      top[p].push_back(nonblank[i]);
      top_pages[fold(text.substr(nonblank[i].start, nonblank[i].length()))].insert(p);
    }
    for (size_t i = nonblank.size() > k ? nonblank.size() - k : 0; i < nonblank.size(); ++i) {
      bottom[p].push_back(nonblank[i]);
      bottom_pages[fold(text.substr(nonblank[i].start, nonblank[i].length()))].insert(p);
    }
  }
  std::set<CharRange> marked;
  const double need = theta * static_cast<double>(pages.size());
  for (size_t p = 0; p < pages.size(); ++p) {
    for (const CharRange& l : top[p]) {
      if (top_pages[fold(text.substr(l.start, l.length()))].size() + 1e-9 >= need) {
        marked.insert(l);
      }
    }
    for (const CharRange& l : bottom[p]) {
      if (bottom_pages[fold(text.substr(l.start, l.length()))].size() + 1e-9 >= need) {
        marked.insert(l);
      }
    }
  }
  return {marked.begin(), marked.end()};
}

TEST_CASE("ingest_text tokenizes the unit phrase") {
  const Document d = ingest_text("d1", "8 hours per 2 weeks worked");
  CHECK(surfaces(d) == Strings{"8", "hours", "per", "2", "weeks", "worked"});
  CHECK(d.sentences().size() == 1);
}

TEST_CASE("ingest_text on empty text yields empty layers") {
  const Document d = ingest_text("d2", "");
  CHECK(d.tokens().empty());
  CHECK(d.sentences().empty());
  CHECK(d.header_footer_spans().empty());
}

TEST_CASE("page break marker splits pages") {
  const Document d = ingest_text("d3", "A.\fB.");
  REQUIRE(d.page_starts().size() == 2);
  REQUIRE(surfaces(d) == Strings{"A", ".", "B", "."});
  CHECK(d.tokens()[0].page_index == 0);
  CHECK(d.tokens()[2].page_index == 1);
}

TEST_CASE("custom page break marker") {
  IngestOptions opts;
  opts.page_break_marker = "<<PAGE>>";
  const Document d = ingest_text("d", "one<<PAGE>>two", opts);
  CHECK(surfaces(d) == Strings{"one", "two"});
  CHECK(d.tokens()[1].page_index == 1);
}

TEST_CASE("empty document id is rejected") {
  CHECK_THROWS_AS(ingest_text("", "x"), UserError);
}

TEST_CASE("tokenize") {
  CHECK(token_texts("full-time employees") == Strings{"full", "-", "time", "employees"});
  CHECK(token_texts("Jan. 1, 2020") == Strings{"Jan", ".", "1", ",", "2020"});
  CHECK(token_texts("").empty());
  CHECK(token_texts("  \n\t ").empty());
  CHECK(token_texts("caf\xc3\xa9 ok") == Strings{"caf\xc3\xa9", "ok"});
}

TEST_CASE("tokenize is offset faithful on random strings") {
  std::mt19937 rng(7);
  const std::string alphabet = "ab Z9.,-\n\t\f\xc3\xa9(";
  for (int iter = 0; iter < 2000; ++iter) {
    std::string s;
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
    const auto toks = tokenize(s);
    std::string rebuilt;
    uint32_t cursor = 0;
    for (const CharRange& t : toks) {
      REQUIRE(t.start >= cursor);
      for (uint32_t i = cursor; i < t.start; ++i) {
        REQUIRE(std::isspace(static_cast<unsigned char>(s[i])));
      }
      for (uint32_t i = t.start; i < t.end; ++i) {
        REQUIRE_FALSE(std::isspace(static_cast<unsigned char>(s[i])));
      }
      rebuilt += s.substr(cursor, t.end - cursor);
      cursor = t.end;
    }
    rebuilt += s.substr(cursor);
    REQUIRE(rebuilt == s);
  }
}

std::string paged(const std::vector<std::string>& pages) {
  std::string out;
  for (size_t i = 0; i < pages.size(); ++i) {
    if (i) out += "\f";
    out += pages[i];
  }
  return out;
}

TEST_CASE("page footers are detected on every page") {
  std::vector<std::string> pages;
  for (int p = 1; p <= 10; ++p) {
    pages.push_back("Body text number " + std::string(1, static_cast<char>('a' + p)) +
                    " here.\nMore body " + std::string(p, 'x') + ".\nPage " +
                    std::to_string(p) + "\n");
  }
  const std::string text = paged(pages);
  const Document d = ingest_text("f", text);
  const auto spans = d.header_footer_spans();
  REQUIRE(spans.size() == 10);
  for (const CharRange& r : spans) CHECK(d.slice(r).starts_with("Page "));
  const auto oracle = oracle_headers_footers(text, 3, 0.6);
  CHECK(std::vector<CharRange>(spans.begin(), spans.end()) == oracle);
}

TEST_CASE("single page document has no boilerplate") {
  const Document d = ingest_text("s", "ACME CBA 2020\nBody.\nPage 1\n");
  CHECK(d.header_footer_spans().empty());
}

TEST_CASE("header on 9 of 10 pages") {
  std::vector<std::string> pages;
  for (int p = 0; p < 10; ++p) {
    std::string page = p == 4 ? "" : "ACME CBA 2020\n";
    page += "Clause " + std::string(p + 1, 'q') + " applies.\nIt says " +
            std::string(p + 1, 'z') + ".\nAnd " + std::string(p + 1, 'w') + " ends.\n";
    pages.push_back(page);
  }
  const std::string text = paged(pages);
  const Document d = ingest_text("h", text);
  REQUIRE(d.header_footer_spans().size() == 9);
  for (const CharRange& r : d.header_footer_spans()) CHECK(d.slice(r) == "ACME CBA 2020");
  CHECK(std::vector<CharRange>(d.header_footer_spans().begin(),
                               d.header_footer_spans().end()) ==
        oracle_headers_footers(text, 3, 0.6));
  for (const Token& t : d.tokens()) {
    const bool in_header = std::any_of(
        d.header_footer_spans().begin(), d.header_footer_spans().end(),
        [&](const CharRange& r) { return r.contains(t.range); });
    CHECK(t.boilerplate == in_header);
  }
}

TEST_CASE("header/footer detection agrees with the counting oracle on random pages") {
  std::mt19937 rng(11);
  const Strings pool = {"ACME CBA 2020", "Page 3", "page 17", "Confidential",
                        "Article 5 text", "employees accrue", "", "  Local 12  "};
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<std::string> pages;
    const int npages = 1 + static_cast<int>(rng() % 6);
    for (int p = 0; p < npages; ++p) {
      std::string page;
      const int nlines = static_cast<int>(rng() % 8);
      for (int l = 0; l < nlines; ++l) page += pool[rng() % pool.size()] + "\n";
      pages.push_back(page);
    }
    const std::string text = paged(pages);
    std::vector<PageText> pts;
    uint32_t start = 0;
    for (const auto& p : pages) {
      pts.push_back({start, std::string_view(text).substr(start, p.size())});
      start += static_cast<uint32_t>(p.size()) + 1;
    }
    const auto got = detect_headers_footers(pts, {});
    REQUIRE(got == oracle_headers_footers(text, 3, 0.6));
  }
}

TEST_CASE("sentence segmentation") {
  SUBCASE("two sentences") {
    const Document d = ingest_text("s", "Employees accrue leave. Unused leave lapses.");
    CHECK(d.sentences().size() == 2);
  }
  SUBCASE("numeric token after an abbreviation keeps the sentence") {
    const Document d = ingest_text("s", "No. 42 applies.");
    CHECK(d.sentences().size() == 1);
  }
  SUBCASE("abbreviation and initial") {
    const Document d = ingest_text("s", "See Art. Fourteen and J. Smith. Next one.");
    CHECK(d.sentences().size() == 2);
  }
  SUBCASE("question and exclamation") {
    const Document d = ingest_text("s", "Is it? Yes! Done.");
    CHECK(d.sentences().size() == 3);
  }
  SUBCASE("blank line breaks a paragraph") {
    const Document d = ingest_text("s", "first part\n\nsecond part");
    CHECK(d.sentences().size() == 2);
  }
  SUBCASE("lowercase continuation does not break") {
    const Document d = ingest_text("s", "ends here. but continues");
    CHECK(d.sentences().size() == 1);
  }
}

TEST_CASE("sentence continues across a page break and skips the footer") {
  std::string text;
  for (int p = 0; p < 3; ++p) {
    if (p) text += "\f";
    text += p == 1 ? "Staff accrue leave at a\n" : "Intro line " + std::string(p + 1, 'k') + ".\n";
    text += "ACME FOOTER\n";
  }
  // Page 2 continues the sentence started at the bottom of page 1.
  text.replace(text.find("Intro line kkk."), 15, "rate of 8 hours");
  const Document d = ingest_text("p", text);
  REQUIRE(d.header_footer_spans().size() == 3);
  bool found = false;
  for (const Sentence& s : d.sentences()) {
    std::string words;
    for (uint32_t i = s.effective_begin; i < s.effective_end; ++i) {
      words += std::string(d.surface(d.effective_tokens()[i])) + " ";
    }
    if (words == "Staff accrue leave at a rate of 8 hours ") {
      found = true;
      CHECK(d.tokens()[s.first_token].page_index == 1);
      CHECK(d.tokens()[s.last_token].page_index == 2);
    }
  }
  CHECK(found);
}

TEST_CASE("section detection") {
  const std::string text =
      "ARTICLE 14\nSICK LEAVE\n14.1 Employees accrue leave.\nMore text.\n"
      "14.2 Unused leave lapses.\nARTICLE 15\nWAGES\nPaid weekly.\n";
  const Document d = ingest_text("sec", text);
  std::vector<int> depths;
  std::vector<std::string> headings;
  for (const Section& s : d.sections()) {
    depths.push_back(s.depth);
    headings.emplace_back(d.slice(s.heading_range));
  }
  // "ARTICLE 14" absorbs its ALL-CAPS title line.
  CHECK(depths == std::vector<int>{1, 2, 2, 1});
  REQUIRE(headings.size() == 4);
  CHECK(headings[0] == "ARTICLE 14\nSICK LEAVE");
  const Section& s141 = d.sections()[1];
  const Section& s142 = d.sections()[2];
  CHECK(s141.range.end == s142.range.start);
  CHECK(d.sections()[0].range.end == d.sections()[3].range.start);
  CHECK(d.sections()[3].range.end == text.size());
}

TEST_CASE("document without headings has one implicit section") {
  const std::string text = "plain text without any headings at all.\nsecond line.\n";
  const Document d = ingest_text("n", text);
  REQUIRE(d.sections().size() == 1);
  CHECK(d.sections()[0].depth == 1);
  CHECK(d.sections()[0].range == CharRange{0, static_cast<uint32_t>(text.size())});
}

TEST_CASE("short all-caps line is a heading") {
  const Document d = ingest_text("c", "Intro text here.\nSICK LEAVE\nEmployees accrue.\n");
  bool found = false;
  for (const Section& s : d.sections()) found = found || d.slice(s.heading_range) == "SICK LEAVE";
  CHECK(found);
}

TEST_CASE("tagging") {
  SUBCASE("unit phrase") {
    const Document d = ingest_text("t", "8 hours per 2 weeks worked");
    CHECK(pos_tags(d) == Strings{"NUM", "WORD", "WORD", "NUM", "WORD", "WORD"});
    CHECK(ner_tags(d) == Strings{"NONE", "TIME_UNIT", "NONE", "NONE", "TIME_UNIT", "NONE"});
  }
  SUBCASE("month-name date") {
    const Document d = ingest_text("t", "January 1, 2020");
    CHECK(ner_tags(d) == Strings{"DATE", "DATE", "DATE", "DATE"});
  }
  SUBCASE("numeric dates") {
    const Document d = ingest_text("t", "from 1/7/2019 to 2022-06-30 now");
    CHECK(ner_tags(d) ==
          Strings{"NONE", "DATE", "DATE", "DATE", "DATE", "DATE", "NONE", "DATE", "DATE",
                  "DATE", "DATE", "DATE", "NONE"});
  }
  SUBCASE("spelled numbers, punctuation, org suffixes, pay period") {
    const Document d = ingest_text("t", "twelve shifts per pay period, Acme Inc");
    CHECK(pos_tags(d) == Strings{"NUM", "WORD", "WORD", "WORD", "WORD", "PUNCT", "WORD", "WORD"});
    CHECK(ner_tags(d) == Strings{"NONE", "TIME_UNIT", "NONE", "TIME_UNIT", "TIME_UNIT", "NONE",
                                 "NONE", "ORG_SUFFIX"});
  }
  SUBCASE("shape") {
    CHECK(token_shape("Hours") == "Xx");
    CHECK(token_shape("2020") == "d");
    CHECK(token_shape("A1b") == "Xdx");
  }
  SUBCASE("empty") {
    std::vector<Token> none;
    SymbolTable symbols;
    tag_tokens("", none, symbols);
    CHECK(none.empty());
  }
}

TEST_CASE("pretokenized payloads") {
  SUBCASE("valid tokens") {
    const Document d = load_pretokenized(
        "p", R"({"text": "8 hours", "tokens": [{"start":0,"end":1}, {"start":2,"end":7}]})");
    CHECK(surfaces(d) == Strings{"8", "hours"});
    CHECK(ner_tags(d) == Strings{"NONE", "TIME_UNIT"});
  }
  SUBCASE("overlapping ranges name token 1") {
    try {
      load_pretokenized(
          "p", R"({"text": "8 hours", "tokens": [{"start":0,"end":3}, {"start":2,"end":7}]})");
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.token_index() == 1);
    }
  }
  SUBCASE("out of bounds range") {
    try {
      load_pretokenized("p", R"({"text": "ab", "tokens": [{"start":0,"end":9}]})");
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.token_index() == 0);
    }
  }
  SUBCASE("unknown tag field") {
    try {
      load_pretokenized(
          "p", R"({"text": "ab cd", "tokens": [{"start":0,"end":2}, {"start":3,"end":5,"lemma":"c"}]})");
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.token_index() == 1);
    }
  }
  SUBCASE("external pos tag is kept") {
    const Document d = load_pretokenized(
        "p",
        R"({"text": "it accrues", "tokens": [{"start":0,"end":2}, {"start":3,"end":10,"pos":"VBZ"}]})");
    CHECK(d.pos(1) == "VBZ");
    CHECK(d.pos(0) == "WORD");
  }
  SUBCASE("supplied sentences") {
    const Document d = load_pretokenized(
        "p",
        R"({"text": "a b c", "tokens": [{"start":0,"end":1},{"start":2,"end":3},{"start":4,"end":5}],
            "sentences": [{"start_token":0,"end_token":1},{"start_token":1,"end_token":3}]})");
    REQUIRE(d.sentences().size() == 2);
    CHECK(d.sentences()[0].last_token == 0);
    CHECK(d.sentences()[1].first_token == 1);
  }
}

TEST_CASE("random documents keep the layer invariants and are deterministic") {
  std::mt19937 rng(3);
  const Strings words = {"Employees", "accrue", "leave", ".", "8", "hours", "ARTICLE",
                         "14.1", "\n", "\n\n", "\f", "SICK LEAVE\n", "No.", "Page 4\n",
                         "I.", "Section 2", ",", "full-time"};
  for (int iter = 0; iter < 500; ++iter) {
    std::string raw;
    const int n = static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) raw += words[rng() % words.size()] + " ";
    const Document a = ingest_text("r", raw);
    const Document b = ingest_text("r", raw);
    REQUIRE(surfaces(a) == surfaces(b));
    REQUIRE(a.sentences().size() == b.sentences().size());
    REQUIRE(a.sections().size() == b.sections().size());

    for (size_t i = 0; i < a.tokens().size(); ++i) {
      REQUIRE(a.slice(a.tokens()[i].range) == a.surface(i));
    }
    // Sentences partition the non-boilerplate tokens.
    std::vector<int> owner(a.tokens().size(), -1);
    for (size_t s = 0; s < a.sentences().size(); ++s) {
      const Sentence& st = a.sentences()[s];
      for (uint32_t k = st.effective_begin; k < st.effective_end; ++k) {
        const uint32_t t = a.effective_tokens()[k];
        REQUIRE(owner[t] == -1);
        owner[t] = static_cast<int>(s);
        REQUIRE(a.tokens()[t].sentence_index == static_cast<int>(s));
      }
    }
    for (size_t t = 0; t < a.tokens().size(); ++t) {
      REQUIRE((owner[t] >= 0) == !a.tokens()[t].boilerplate);
    }
    // Sections nest.
    for (const Section& x : a.sections()) {
      REQUIRE(x.range.contains(x.heading_range));
      for (const Section& y : a.sections()) {
        const bool disjoint = !x.range.overlaps(y.range);
        REQUIRE((disjoint || x.range.contains(y.range) || y.range.contains(x.range)));
      }
    }
  }
}

TEST_CASE("corpus rejects duplicate ids and loads a directory") {
  Corpus c;
  c.add(ingest_text("a", "x"));
  CHECK_THROWS_AS(c.add(ingest_text("a", "y")), UserError);

  const auto dir = testing::temp_dir("corpus");
  std::ofstream(dir / "b.txt") << "Second doc.";
  std::ofstream(dir / "a.txt") << "First doc.";
  std::ofstream(dir / "c.json") << R"({"text": "8 hours", "tokens": [{"start":0,"end":1}]})";
  const Corpus loaded = load_corpus_dir(dir, {}, 2);
  CHECK(loaded.ids() == Strings{"a", "b", "c"});
  CHECK(loaded.find("c")->tokens().size() == 1);
  CHECK(loaded.content_hash() == load_corpus_dir(dir, {}, 1).content_hash());
  CHECK_THROWS_AS(load_corpus_dir(dir / "missing"), EnvironmentError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("concept schema") {
  const auto schema = ConceptSchema::from_json(R"({"concepts": [
      {"id": "amount", "kind": "entity", "aliases": ["amt"]},
      {"id": "clause", "kind": "clause", "display_name": "Clause"},
      {"id": "start", "kind": "entity", "value_type": "date"}]})");
  CHECK(schema.concepts().size() == 3);
  CHECK(schema.resolve("amt")->id == "amount");
  CHECK(schema.find("clause")->kind == ConceptKind::kClause);
  CHECK(schema.find("start")->is_date);
  CHECK(schema.index_of("clause") == 1);
  CHECK_THROWS_AS(ConceptSchema::from_json(R"({"concepts": [{"id": "a", "kind": "entity"},
                                                            {"id": "a", "kind": "entity"}]})"),
                  UserError);
}

}  // namespace
}  // namespace lfe
