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

#include "lfe/engine.hpp"

#include "doctest.h"
#include "fixtures.hpp"
#include "lfe/error.hpp"
#include "oracle_cases.hpp"

namespace lfe::engine {
namespace {

using testing::demo_schema;
using testing::parse_ok;

CompiledLF compile_one(const std::string& src) {
  const auto lfs = parse_ok(src);
  REQUIRE(lfs.size() == 1);
  return compile(lfs[0], demo_schema());
}

std::vector<std::string> capture_texts(const Document& d, const Match& m) {
  std::vector<std::string> out;
  for (const auto& c : m.captures) out.emplace_back(d.slice(c.range));
  return out;
}

TEST_CASE("compile") {
  const auto minimal = compile_one("lf x for amount { match: amount:([]{1,1}) }");
  CHECK(minimal.predicate_count() == 1);
  CHECK(minimal.min_match_len() == 1);
  CHECK(compile_one(testing::kSickLeaveRuleset).min_match_len() == 2);
  CHECK(compile_one("lf x for amount { match: amount:([pos=\"NUM\"]{2,4}) }").min_match_len() ==
        2);
  const auto lfs = parse_ok("lf x for amount { match: wage:([]) }");
  CHECK_THROWS_AS(compile(lfs[0], demo_schema()), DefectError);
}

TEST_CASE("sick-leave LF over the example sentence") {
  const auto clf = compile_one(testing::kSickLeaveRuleset);
  const Document d =
      ingest_text("s", "Full time employees shall accrue 8 hours per pay period");
  const auto matches = match_document(clf, d);
  REQUIRE(matches.size() == 1);
  CHECK(capture_texts(d, matches[0]) == std::vector<std::string>{"Full time", "8", "hours"});
  CHECK(clf.captures()[matches[0].captures[0].slot].concept_id == "employment_status");
  CHECK(matches == brute_force_match(clf.source(), demo_schema(), d));

  const Document other = ingest_text("o", "Employees may take leave");
  CHECK(match_document(clf, other).empty());
}

TEST_CASE("two amount matches in the unit phrase") {
  const auto clf = compile_one(
      "lf u for amount { match: amount:([pos=\"NUM\"]{1,1}) [ner=\"TIME_UNIT\"]{1,1} }");
  const Document d = ingest_text("u", "8 hours per 2 weeks worked");
  const auto matches = match_document(clf, d);
  REQUIRE(matches.size() == 2);
  CHECK(capture_texts(d, matches[0]) == std::vector<std::string>{"8"});
  CHECK(capture_texts(d, matches[1]) == std::vector<std::string>{"2"});
  CHECK(matches == brute_force_match(clf.source(), demo_schema(), d));
}

TEST_CASE("reference matcher edge cases") {
  const auto lfs = parse_ok("lf w for amount { match: amount:([]{1,1}) }");
  CHECK(brute_force_match(lfs[0], demo_schema(), ingest_text("e", "")).empty());
  CHECK(brute_force_match(lfs[0], demo_schema(), ingest_text("t", "a b c")).size() == 3);
  CHECK_THROWS_AS(brute_force_match(lfs[0], demo_schema(),
                                    ingest_text("l", "a b c d e f g h i j k l m n o p q")),
                  UserError);
}

TEST_CASE("greedy quantifiers prefer the longest count first") {
  const Document d = ingest_text("g", "a a a b");
  const auto clf = compile_one("lf g for amount { match: amount:(\"a\"{1,3}) \"a|b\" }");
  const auto m = match_document(clf, d);
  REQUIRE(m.size() == 1);
  CHECK(capture_texts(d, m[0]) == std::vector<std::string>{"a a a"});
  // The count chosen for the first quantifier backs off until the rest fits.
  const auto clf2 = compile_one("lf h for amount { match: amount:(\"a\"{1,3}) \"a\" \"b\" }");
  const auto m2 = match_document(clf2, d);
  REQUIRE(m2.size() == 1);
  CHECK(capture_texts(d, m2[0]) == std::vector<std::string>{"a a"});
}

TEST_CASE("guards") {
  const Document d = ingest_text("g", "All employees accrue leave. Part time staff do not.");
  const auto starts = compile_one(
      "lf s for status { require starts(\"part time\") match: status:([]{1,1}) }");
  const auto m = match_document(starts, d);
  CHECK(m.size() == 6);
  const auto negated = compile_one(
      "lf n for status { require not contains(\"accru.*\") match: status:(\"staff\") }");
  CHECK(match_document(negated, d).size() == 1);
  const auto unmet = compile_one(
      "lf n for status { require contains(\"accru.*\") match: status:(\"staff\") }");
  CHECK(match_document(unmet, d).empty());
}

TEST_CASE("scopes and clause expansion") {
  const std::string text =
      "ARTICLE 1\nWAGES\nPaid weekly.\nARTICLE 2\nSICK LEAVE\nEmployees accrue sick leave "
      "monthly.\nIt carries over.\n";
  const Document d = ingest_text("c", text);
  const auto clf = compile_one(
      "lf c for clause scope section { require contains(\"sick\") match: clause:(\"accrue\") }");
  const auto m = match_document(clf, d);
  REQUIRE(m.size() == 1);
  std::vector<Vote> votes;
  emit_votes(clf, d, m[0], 0, 0, votes);
  REQUIRE(votes.size() == 1);
  const int sec = d.innermost_section(m[0].captures[0].range);
  REQUIRE(sec >= 0);
  CHECK(votes[0].range == d.sections()[sec].range);
  CHECK(d.slice(votes[0].range).starts_with("ARTICLE 2"));

  const auto windows = windows_for(d, dsl::Scope::kSection);
  CHECK(windows.size() == 2);
  const auto doc_scope = compile_one(
      "lf d for amount scope document { match: amount:(\"weekly\") [] []{0,8} \"accrue\" }");
  CHECK(match_document(doc_scope, d).size() == 1);
  const auto sentence_scope = compile_one(
      "lf d for amount { match: amount:(\"weekly\") [] []{0,8} \"accrue\" }");
  CHECK(match_document(sentence_scope, d).empty());
}

TEST_CASE("external tags are matchable") {
  const Document d = load_pretokenized(
      "p", R"({"text": "it accrues", "tokens": [{"start":0,"end":2}, {"start":3,"end":10,"pos":"VBZ"}]})");
  const auto clf = compile_one("lf v for amount { match: amount:([pos=\"VB.\"]) }");
  const auto m = match_document(clf, d);
  REQUIRE(m.size() == 1);
  CHECK(d.slice(m[0].full_range) == "accrues");
}

TEST_CASE("step budget skips the window and records a diagnostic") {
  std::string text;
  for (int i = 0; i < 40; ++i) text += "a ";
  text += ". Then b a.";
  const Document d = ingest_text("b", text);
  const auto clf = compile_one(
      "lf p for amount { match: amount:(([]{0,8}){0,8} \"zzz\") }");
  MatchReport report;
  MatchOptions opts;
  opts.step_budget = 2000;
  const auto m = match_document(clf, d, opts, &report);
  CHECK(m.empty());
  REQUIRE_FALSE(report.budget.empty());
  CHECK(report.budget[0].doc_id == "b");
  CHECK(report.budget[0].steps > 2000);

  const auto ok = compile_one("lf q for amount { match: amount:(\"b\") }");
  CHECK(match_document(ok, d, opts).size() == 1);
}

TEST_CASE("run_ruleset") {
  Corpus corpus;
  corpus.add(ingest_text("d2", "Full time employees accrue 8 hours per pay period. 3 days."));
  corpus.add(ingest_text("d1", "Part time staff accrue 4 hours monthly and 2 weeks yearly."));
  const auto lfs = parse_ok(std::string(testing::kSickLeaveRuleset) +
                            "lf units for unit { match: unit:([ner=\"TIME_UNIT\"]) }\n"
                            "lf nums for amount { match: amount:([pos=\"NUM\"]) }\n");
  std::vector<dsl::Diagnostic> diags;
  const auto clfs = compile_ruleset(lfs, demo_schema(), diags);
  REQUIRE(clfs.size() == 3);

  SUBCASE("one LF over one doc equals match_document") {
    Corpus one;
    one.add(ingest_text("x", "Full time employees accrue 8 hours"));
    const auto r = run_ruleset(std::span(clfs).subspan(0, 1), one);
    std::vector<Vote> expect;
    for (const auto& m : match_document(clfs[0], *one.find("x"))) {
      emit_votes(clfs[0], *one.find("x"), m, 0, 0, expect);
    }
    std::sort(expect.begin(), expect.end(), [](const Vote& a, const Vote& b) {
      return std::tie(a.range.start, a.range.end) < std::tie(b.range.start, b.range.end);
    });
    CHECK(r.labels.votes == expect);
  }
  SUBCASE("no LFs") {
    CHECK(run_ruleset({}, corpus).labels.votes.empty());
  }
  SUBCASE("worker count does not change the result") {
    RunOptions one;
    RunOptions four;
    four.workers = 4;
    const auto a = run_ruleset(clfs, corpus, one);
    const auto b = run_ruleset(clfs, corpus, four);
    CHECK(a.labels == b.labels);
    size_t expected = 0;
    for (const auto& doc : corpus.documents()) expected += match_document(clfs[0], *doc).size();
    CHECK(a.stats.lfs[0].matches == expected);
    CHECK(expected == 4);
    LabelSet sorted = a.labels;
    canonicalize(sorted, corpus, demo_schema());
    CHECK(sorted == a.labels);
    const std::string jsonl = labels_to_jsonl(a.labels, corpus, demo_schema());
    CHECK(jsonl.find(R"({"doc":"d1","lf":"nums","concept":"sick_leave_amount",)") == 0);
  }
}

TEST_CASE("invalid ruleset does not compile") {
  const auto lfs = parse_ok("lf x for amount { match: amount:([]{0,3}) }");
  std::vector<dsl::Diagnostic> diags;
  CHECK(compile_ruleset(lfs, demo_schema(), diags).empty());
  CHECK(dsl::has_errors(diags));
}

TEST_CASE("matcher agrees with the reference on random cases") {
  const auto stats = testing::run_oracle_cases(2000, 99);
  INFO(stats.first_mismatch);
  CHECK(stats.mismatches == 0);
  CHECK(stats.compared >= 2000);
  CHECK(stats.with_matches * 10 >= stats.compared);
}

}  // namespace
}  // namespace lfe::engine
