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

#include "doctest.h"
#include "fixtures.hpp"
#include "generators.hpp"
#include "lfe/engine.hpp"

namespace lfe::dsl {
namespace {

PatternNode lit(std::vector<std::string> words) { return {WordLit{std::move(words)}, {}}; }
PatternNode cls(std::vector<AttrTest> tests) { return {TokenClass{std::move(tests)}, {}}; }
PatternNode any() { return {Wildcard{}, {}}; }
PatternNode cap(std::string name, std::vector<PatternNode> items) {
  return {Capture{std::move(name), std::move(items)}, {}};
}
PatternNode quant(PatternNode child, int lo, int hi) {
  return {Quantified{std::make_shared<const PatternNode>(std::move(child)), lo, hi}, {}};
}
PatternNode group(std::vector<PatternNode> items) { return {Group{std::move(items)}, {}}; }

std::vector<std::string> codes(const std::vector<Diagnostic>& diags) {
  std::vector<std::string> out;
  for (const auto& d : diags) out.push_back(d.code);
  return out;
}

TEST_CASE("the sick-leave ruleset parses to the expected tree") {
  const auto lfs = testing::parse_ok(testing::kSickLeaveRuleset);
  REQUIRE(lfs.size() == 1);
  LabelingFunction want;
  want.name = "sick_leave_hours";
  want.concept_id = "sick_leave_amount";
  want.priority = 10;
  want.scope = Scope::kSentence;
  want.guards = {
      {GuardKind::kStarts, false, {"full time", "part time", "all employees"}, {}},
      {GuardKind::kContains, false, {"accumulate.*", "accru.*"}, {}},
  };
  want.pattern = {
      quant(group({cap("status", {lit({"full|part"}), lit({"time"})})}), 0, 1),
      quant(any(), 0, 5),
      cap("amount", {quant(cls({{Attr::kPos, "NUM"}}), 1, 2)}),
      cap("unit", {quant(cls({{Attr::kNer, "TIME_UNIT"}}), 1, 1)}),
  };
  INFO(format_lf(lfs[0]));
  INFO(format_lf(want));
  CHECK(lfs[0] == want);
  CHECK(lfs[0].capture_names() == std::vector<std::string>{"status", "amount", "unit"});
  CHECK(capture_bindings(lfs[0], testing::demo_schema()).size() == 3);
  CHECK(validate(lfs, testing::demo_schema()).empty());
}

TEST_CASE("empty pattern is a syntax error at the closing brace") {
  const auto r = parse_ruleset("lf x for amount { match: }");
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  const Diagnostic& d = r.diagnostics[0];
  CHECK(d.code == "syntax");
  CHECK(d.line == 1);
  CHECK(d.col == 26);
  CHECK(std::find(d.expected.begin(), d.expected.end(), "string") != d.expected.end());
  CHECK(std::find(d.expected.begin(), d.expected.end(), "'['") != d.expected.end());
}

TEST_CASE("minimal LF") {
  const auto lfs = testing::parse_ok("lf x for amount { match: a:([]{1,1}) }");
  REQUIRE(lfs.size() == 1);
  CHECK(lfs[0].capture_names() == std::vector<std::string>{"a"});
  CHECK(lfs[0].priority == kDefaultPriority);
  CHECK(format_lf(lfs[0]) == "lf x for amount { match: a:([]{1,1}) }");
}

TEST_CASE("question mark formats as {0,1}") {
  const auto lfs = testing::parse_ok(R"(lf q for amount { match: "a"? amount:([]) })");
  CHECK(format_lf(lfs[0]) == R"(lf q for amount { match: "a"{0,1} amount:([]) })");
}

TEST_CASE("syntax errors carry positions and recovery continues") {
  const auto r = parse_ruleset(
      "lf a for x { match: amount:([]) }\n"
      "lf b for x { match: \"q\"{3,1} }\n"
      "lf c for x scope paragraph { match: amount:([]) }\n"
      "lf a for x { match: amount:([]) }\n"
      "lf d for x { match: amount:([]){0,65} }\n"
      "lf e for x { require sorta(\"x\") match: amount:([]) }\n"
      "lf f for x { match: outer:(inner:([])) }\n");
  CHECK(r.lfs.size() == 1);
  CHECK(codes(r.diagnostics) == std::vector<std::string>{"quantifier-range", "syntax",
                                                          "duplicate-name",
                                                          "quantifier-range", "syntax",
                                                          "nested-capture"});
  CHECK(r.diagnostics[0].line == 2);
  CHECK(r.diagnostics[1].line == 3);
  CHECK(r.diagnostics[1].expected ==
        std::vector<std::string>{"'sentence'", "'section'", "'document'"});
}

TEST_CASE("lexer details") {
  SUBCASE("comments and escapes") {
    const auto lfs = testing::parse_ok(
        "# leading comment\nlf x for amount { # note\n match: amount:(\"a\\\"b\" \"\\d+\") }");
    const auto& cap_node = std::get<Capture>(lfs[0].pattern[0].value);
    CHECK(std::get<WordLit>(cap_node.items[0].value).words == std::vector<std::string>{"a\"b"});
    CHECK(std::get<WordLit>(cap_node.items[1].value).words == std::vector<std::string>{"\\d+"});
  }
  SUBCASE("unterminated string") {
    const auto r = parse_ruleset("lf x for amount { match: \"abc }");
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].message == "unterminated string");
  }
  SUBCASE("empty input") { CHECK_FALSE(parse_ruleset("").ok()); }
  SUBCASE("deep nesting") {
    std::string src = "lf x for amount { match: amount:(";
    for (int i = 0; i < 200; ++i) src += "(";
    src += "[]";
    for (int i = 0; i < 200; ++i) src += ")";
    src += ") }";
    const auto r = parse_ruleset(src);
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].code == "depth");
  }
}

TEST_CASE("validation") {
  const auto schema = testing::demo_schema();
  SUBCASE("undeclared capture concept") {
    const auto lfs = testing::parse_ok("lf w for amount { match: wage:([pos=\"NUM\"]) }");
    const auto diags = validate(lfs, schema);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].is_error());
    CHECK(diags[0].message.find("wage") != std::string::npos);
  }
  SUBCASE("zero-length pattern") {
    const auto lfs = testing::parse_ok("lf z for amount { match: amount:([]{0,5}) }");
    const auto c = codes(validate(lfs, schema));
    CHECK(std::find(c.begin(), c.end(), "zero-length") != c.end());
  }
  SUBCASE("valid fixture") {
    CHECK(validate(testing::parse_ok(testing::kSickLeaveRuleset), schema).empty());
  }
  SUBCASE("other checks") {
    CHECK(codes(validate(testing::parse_ok("lf a for wage { match: amount:([]) }"), schema)) ==
          std::vector<std::string>{"unknown-concept"});
    CHECK(codes(validate(testing::parse_ok("lf a for amount { match: [] }"), schema)) ==
          std::vector<std::string>{"no-capture"});
    CHECK(codes(validate(testing::parse_ok("lf a for amount { match: amount:(\"a*\") }"),
                         schema)) == std::vector<std::string>{"empty-regex"});
    CHECK(codes(validate(testing::parse_ok("lf a for amount { match: amount:(\"(a\") }"),
                         schema)) == std::vector<std::string>{"bad-regex"});
    CHECK(codes(validate(testing::parse_ok("lf a for amount { match: (amount:([])){1,3} }"),
                         schema)) == std::vector<std::string>{"repeated-capture"});
    CHECK(codes(validate(testing::parse_ok("lf a for amount { match: amount:([]) unit:([]) "
                                           "amount:([]) }"),
                         schema)) == std::vector<std::string>{"duplicate-capture"});
    const auto warn = validate(
        testing::parse_ok(
            "lf a for amount { require contains(\"accru.*\" | \"accrue\") match: amount:([]) }"),
        schema);
    REQUIRE(warn.size() == 1);
    CHECK(warn[0].code == "unreachable-alternative");
    CHECK_FALSE(warn[0].is_error());
  }
}

TEST_CASE("generated LFs round-trip through the formatter") {
  testing::LfGenerator gen(17);
  for (int i = 0; i < 1000; ++i) {
    const LabelingFunction lf = gen.lf("lf" + std::to_string(i));
    const std::string text = format_lf(lf);
    const auto r = parse_ruleset(text);
    REQUIRE_MESSAGE(r.ok(), text);
    REQUIRE(r.lfs.size() == 1);
    REQUIRE_MESSAGE(r.lfs[0] == lf, text);
  }
}

TEST_CASE("validated LFs compile") {
  testing::GenOptions opts;
  opts.semantic = true;
  testing::LfGenerator gen(5, opts);
  const auto schema = testing::demo_schema();
  int compiled = 0;
  for (int i = 0; i < 3000; ++i) {
    const LabelingFunction lf = gen.lf("v" + std::to_string(i));
    const std::vector<LabelingFunction> one{lf};
    if (has_errors(validate(one, schema))) continue;
    CHECK_NOTHROW(engine::compile(lf, schema));
    ++compiled;
  }
  CHECK(compiled > 300);
}

TEST_CASE("min_length") {
  const auto lfs = testing::parse_ok(testing::kSickLeaveRuleset);
  CHECK(min_length(std::span<const PatternNode>(lfs[0].pattern)) == 2);
  CHECK(min_length(quant(cls({{Attr::kPos, "NUM"}}), 2, 4)) == 2);
  CHECK(min_length(lit({"a", "b", "c"})) == 3);
}

}  // namespace
}  // namespace lfe::dsl
