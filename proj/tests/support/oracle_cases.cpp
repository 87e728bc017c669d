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

#include "oracle_cases.hpp"

#include <sstream>

#include "fixtures.hpp"
#include "generators.hpp"
#include "lfe/engine.hpp"
#include "lfe/error.hpp"

namespace lfe::testing {

namespace {

std::string describe(const Document& d, const std::vector<engine::Match>& ms) {
  std::ostringstream os;
  os << "[";
  for (const auto& m : ms) {
    os << " w" << m.window << ":" << m.full_range.start << "-" << m.full_range.end << "{";
    for (const auto& c : m.captures) os << c.slot << "=" << d.slice(c.range) << ";";
    os << "}";
  }
  os << " ]";
  return os.str();
}

}  // namespace

OracleStats run_oracle_cases(int cases, uint64_t seed) {
  GenOptions opts;
  opts.semantic = true;
  opts.max_depth = 3;
  opts.max_repeat = 4;
  opts.max_items = 2;
  opts.quant_prob = 0.5;
  opts.guard_prob = 0.2;
  opts.words = {"a", "b", "8|hours", "hour.*", "[ab]", "B"};
  opts.attr_values = {"NUM", "WORD", "PUNCT", "TIME_UNIT", "NONE", "x",
                      "X",   "d",    "b",     "a|8",       ".",    "hours"};
  opts.capture_names = {"amount", "unit", "status", "clause"};
  opts.concepts = {"sick_leave_amount"};
  LfGenerator gen(seed, opts);
  const ConceptSchema schema = demo_schema();
  const std::vector<std::string> kinds = {"a", "B", "8", "hours", "."};

  OracleStats stats;
  while (stats.compared < cases) {
    dsl::LabelingFunction lf = gen.lf("case" + std::to_string(stats.compared));
    const std::vector<dsl::LabelingFunction> one{lf};
    if (dsl::has_errors(dsl::validate(one, schema))) {
      ++stats.rejected;
      continue;
    }
    std::string text;
    const int n = gen.uniform(0, 12);
    for (int i = 0; i < n; ++i) {
      if (i) text += gen.chance(0.15) ? "\n" : " ";
      text += gen.pick(kinds);
    }
    const Document doc = ingest_text("o", text);
    std::vector<engine::Match> expected;
    try {
      expected = engine::brute_force_match(lf, schema, doc);
    } catch (const UserError&) {
      ++stats.too_large;
      continue;
    }
    const auto clf = engine::compile(lf, schema);
    const auto got = engine::match_document(clf, doc);
    ++stats.compared;
    if (!expected.empty()) ++stats.with_matches;
    if (got != expected) {
      if (stats.mismatches++ == 0) {
        stats.first_mismatch = dsl::format_lf(lf) + "\ntext: " + text +
                               "\nengine: " + describe(doc, got) +
                               "\noracle: " + describe(doc, expected);
      }
    }
  }
  return stats;
}

}  // namespace lfe::testing
