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

// Drives the installed command-line binary as a subprocess.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>

#include "common/text_util.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs `lfe <args>` inside `dir`.
Outcome lfe(const fs::path& dir, const std::string& args) {
  const fs::path out = dir / ".stdout";
  const fs::path err = dir / ".stderr";
  const std::string cmd = "cd '" + dir.string() + "' && '" LFE_CLI_PATH "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = lfe::util::read_file(out);
  o.err = lfe::util::read_file(err);
  return o;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

TEST_CASE("exit codes") {
  const fs::path dir = lfe::testing::demo_copy("cli_codes").parent_path();
  CHECK(lfe(dir, "check").code == 0);
  CHECK(lfe(dir, "--version").code == 0);
  CHECK(lfe(dir, "no-such-command").code == 2);
  CHECK(lfe(dir, "eval --bucket train").code == 2);
  CHECK(lfe(dir, "--workers 0 check").code == 2);

  const auto missing = lfe(dir, "--config absent.toml check");
  CHECK(missing.code == 3);
  CHECK(missing.err.find("absent.toml") != std::string::npos);

  write(dir / "broken.toml", "[project\n");
  const auto broken = lfe(dir, "--config broken.toml check");
  CHECK(broken.code == 2);
  CHECK(broken.err.find("line 1") != std::string::npos);
}

TEST_CASE("an unknown concept names itself and its location") {
  const fs::path dir = lfe::testing::demo_copy("cli_unknown").parent_path();
  write(dir / "rules" / "demo.lf",
        lfe::util::read_file(dir / "rules" / "demo.lf") +
            "\nlf wage_rate for hourly_wage {\n  match: \"per\" \"hour\"\n}\n");
  const auto r = lfe(dir, "check");
  CHECK(r.code == 2);
  CHECK(r.err.find("hourly_wage") != std::string::npos);
  CHECK(std::regex_search(r.err, std::regex(R"(demo\.lf:\d+:\d+: error)")));
  CHECK(lfe(dir, "run").code == 2);
  CHECK_FALSE(fs::exists(dir / "out" / "labels.jsonl"));
}

TEST_CASE("eval needs gold annotations") {
  const fs::path dir = lfe::testing::demo_copy("cli_nogold").parent_path();
  std::string config = lfe::util::read_file(dir / "project.toml");
  config = std::regex_replace(config, std::regex("gold = .*\\n"), "");
  write(dir / "project.toml", config);
  const auto r = lfe(dir, "eval");
  CHECK(r.code == 2);
  CHECK(r.err.find("gold") != std::string::npos);
  CHECK(lfe(dir, "stats").code == 0);
}

TEST_CASE("split is reproducible") {
  const fs::path dir = lfe::testing::demo_copy("cli_split").parent_path();
  REQUIRE(lfe(dir, "--seed 7 split").code == 0);
  const std::string first = lfe::util::read_file(dir / "split.json");
  REQUIRE(lfe(dir, "--seed 7 split").code == 0);
  CHECK(lfe::util::read_file(dir / "split.json") == first);
  const auto j = Json::parse(first);
  CHECK(j["seed"] == 7);
  CHECK(j["assignment"].size() == 12);

  REQUIRE(lfe(dir, "--seed 8 split").code == 0);
  const auto other = Json::parse(lfe::util::read_file(dir / "split.json"));
  CHECK(other["seed"] == 8);
  const auto json = lfe(dir, "--json --seed 7 split");
  CHECK(json.code == 0);
  CHECK(json.out == first);
}

TEST_CASE("run, stats, eval and export write their artifacts") {
  const fs::path dir = lfe::testing::demo_copy("cli_flow").parent_path();
  const auto run = lfe(dir, "--json run");
  REQUIRE(run.code == 0);
  const auto summary = Json::parse(run.out);
  CHECK(summary["lfs"].size() == 13);
  CHECK(fs::file_size(dir / "out" / "labels.jsonl") > 0);
  CHECK(fs::file_size(dir / "out" / "resolved.jsonl") > 0);

  const auto stats = lfe(dir, "--json stats");
  REQUIRE(stats.code == 0);
  const auto cov = Json::parse(stats.out);
  const auto expected = Json::parse(lfe::util::read_file(dir / "expected_coverage.json"));
  CHECK(cov["train_docs"] == expected["train_docs"]);
  for (size_t i = 0; i < expected["concepts"].size(); ++i) {
    CHECK(cov["concepts"][i]["concept"] == expected["concepts"][i]["concept"]);
    CHECK(cov["concepts"][i]["labeled_docs"] == expected["concepts"][i]["labeled_docs"]);
  }
  CHECK(lfe(dir, "stats").out.find("coverage over 9 train documents") != std::string::npos);
  CHECK(lfe(dir, "--json stats --conflict").code == 0);

  const auto eval = lfe(dir, "--json eval --bucket dev");
  REQUIRE(eval.code == 0);
  for (const auto& c : Json::parse(eval.out)["concepts"]) CHECK(c["f1"] == 100.0);
  CHECK(lfe(dir, "eval").out.find("Test F1") != std::string::npos);

  const auto spans = lfe(dir, "--json export");
  REQUIRE(spans.code == 0);
  CHECK(Json::parse(spans.out)["format"] == "spans");
  CHECK(fs::file_size(dir / "out" / "train.jsonl") > 0);
  REQUIRE(lfe(dir, "export --format bio --out bio.txt").code == 0);
  const std::string bio = lfe::util::read_file(dir / "bio.txt");
  CHECK(bio.find("B-employer_name") != std::string::npos);
  CHECK(lfe(dir, "export --format csv").code == 2);

  const auto ingest = lfe(dir, "ingest");
  CHECK(ingest.code == 0);
  CHECK(ingest.out.find("12 documents") != std::string::npos);
}

TEST_CASE("bench runs a small corpus") {
  const fs::path dir = lfe::testing::temp_dir("cli_bench");
  const auto r = lfe(dir, "--json --workers 2 bench --tokens 20000");
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["identical"] == true);
  CHECK(j["lfs"].size() == 3);
}

}  // namespace
