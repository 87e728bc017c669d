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

#include "fixtures.hpp"

#include <atomic>
#include <stdexcept>

#include <unistd.h>

namespace lfe::testing {

const char* const kSickLeaveRuleset = R"(lf sick_leave_hours for sick_leave_amount priority 10 {
  require starts("full time" | "part time" | "all employees")
  require contains("accumulate.*" | "accru.*")
  match: status:("full|part" "time")? []{0,5}
         amount:([pos="NUM"]{1,2}) unit:([ner="TIME_UNIT"]{1,1})
}
)";

ConceptSchema demo_schema() {
  std::vector<Concept> cs;
  auto add = [&](std::string id, ConceptKind kind, std::vector<std::string> aliases,
                 bool is_date = false) {
    Concept c;
    c.id = std::move(id);
    c.kind = kind;
    c.display_name = c.id;
    c.aliases = std::move(aliases);
    c.is_date = is_date;
    cs.push_back(std::move(c));
  };
  add("employer_name", ConceptKind::kEntity, {"employer"});
  add("union_name", ConceptKind::kEntity, {"union"});
  add("agreement_start_date", ConceptKind::kEntity, {"start_date"}, true);
  add("agreement_end_date", ConceptKind::kEntity, {"end_date"}, true);
  add("sick_leave_clause", ConceptKind::kClause, {"clause"});
  add("sick_leave_amount", ConceptKind::kEntity, {"amount"});
  add("sick_leave_unit", ConceptKind::kEntity, {"unit"});
  add("employment_status", ConceptKind::kEntity, {"status"});
  return ConceptSchema(std::move(cs));
}

std::vector<std::string> surfaces(const Document& doc) {
  std::vector<std::string> out;
  for (size_t i = 0; i < doc.tokens().size(); ++i) out.emplace_back(doc.surface(i));
  return out;
}

std::vector<std::string> pos_tags(const Document& doc) {
  std::vector<std::string> out;
  for (size_t i = 0; i < doc.tokens().size(); ++i) out.emplace_back(doc.pos(i));
  return out;
}

std::vector<std::string> ner_tags(const Document& doc) {
  std::vector<std::string> out;
  for (size_t i = 0; i < doc.tokens().size(); ++i) out.emplace_back(doc.ner(i));
  return out;
}

std::vector<dsl::LabelingFunction> parse_ok(const std::string& source) {
  auto r = dsl::parse_ruleset(source);
  if (!r.ok()) {
    std::string msg = "unexpected parse failure:";
    for (const auto& d : r.diagnostics) msg += "\n  " + dsl::format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return std::move(r.lfs);
}

std::filesystem::path source_dir() { return LFE_SOURCE_DIR; }
std::filesystem::path demo_dir() { return source_dir() / "data" / "demo"; }

std::filesystem::path temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("lfe-" + tag + "-" + std::to_string(::getpid()) + "-" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path demo_copy(const std::string& tag) {
  namespace fs = std::filesystem;
  const auto dir = temp_dir(tag);
  for (const char* part : {"corpus", "gold", "rules"}) {
    fs::copy(demo_dir() / part, dir / part, fs::copy_options::recursive);
  }
  for (const char* file : {"schema.json", "project.toml", "expected_coverage.json"}) {
    fs::copy_file(demo_dir() / file, dir / file);
  }
  return dir / "project.toml";
}

}  // namespace lfe::testing
