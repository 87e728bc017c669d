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

#include "lfe/service.hpp"

#include <cstdlib>
#include <set>
#include <thread>

#include "common/text_util.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"
#include "lfe/error.hpp"

namespace lfe::service {
namespace {

using Json = nlohmann::json;

constexpr const char* kJson = "application/json";

// A demo project served on an ephemeral port for the fixture's lifetime.
struct Served {
  Project project;
  Server server;
  int port;
  std::thread thread;

  explicit Served(const std::string& tag, size_t max_body = 4u << 20)
      : project(ProjectConfig::load(testing::demo_copy(tag))),
        server(project, Options{"127.0.0.1", 0, max_body}),
        port(server.bind()),
        thread([this] { server.listen(); }) {}
  ~Served() {
    server.stop();
    thread.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(30, 0);
    return c;
  }
};

std::string demo_ruleset() { return util::read_file(testing::demo_dir() / "rules" / "demo.lf"); }

Json body_of(const httplib::Result& r) {
  REQUIRE(r);
  return Json::parse(r->body);
}

void check_error(const httplib::Result& r, int status, const std::string& kind) {
  REQUIRE(r);
  CHECK(r->status == status);
  CHECK(r->get_header_value("Content-Type").find("json") != std::string::npos);
  const auto j = Json::parse(r->body);
  CHECK(j["error"] == kind);
  CHECK(j.contains("detail"));
}

TEST_CASE("ruleset validation") {
  Served s("svc_validate", 1u << 20);
  auto c = s.client();

  SUBCASE("a valid ruleset has no diagnostics") {
    const auto r = c.Post("/api/rulesets/validate", demo_ruleset(), "text/plain");
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(body_of(r) == Json::array());
    const Json wrapped = {{"ruleset", demo_ruleset()}};
    CHECK(body_of(c.Post("/api/rulesets/validate", wrapped.dump(), kJson)) == Json::array());
  }
  SUBCASE("a syntax error is located") {
    const auto r = c.Post("/api/rulesets/validate",
                          "lf a for sick_leave_amount {\n  match: amount:([]{1,1}\n}\n",
                          "text/plain");
    REQUIRE(r);
    CHECK(r->status == 200);
    const auto j = body_of(r);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["file"] == "request");
    CHECK(j[0]["line"] == 3);
    CHECK(j[0]["col"].get<int>() >= 1);
    CHECK(j[0]["severity"] == "error");
    CHECK_FALSE(j[0]["expected"].empty());
  }
  SUBCASE("malformed or oversized requests") {
    check_error(c.Post("/api/rulesets/validate", "{not json", kJson), 400, "invalid-request");
    check_error(c.Post("/api/rulesets/validate", "{\"rules\": 1}", kJson), 400,
                "invalid-request");
    check_error(c.Post("/api/rulesets/validate", std::string(2u << 20, 'x'), "text/plain"), 413,
                "payload-too-large");
    check_error(c.Get("/api/nothing"), 404, "not-found");
  }
}

TEST_CASE("ad hoc runs") {
  Served s("svc_run");
  auto c = s.client();

  SUBCASE("one document") {
    const Json req = {{"ruleset", testing::kSickLeaveRuleset}, {"doc_id", "cba07"}};
    const auto r = c.Post("/api/run", req.dump(), kJson);
    REQUIRE(r);
    CHECK(r->status == 200);
    const auto j = body_of(r);
    CHECK(j["doc_id"] == "cba07");
    REQUIRE(j["matches"].size() == 1);
    const auto& m = j["matches"][0];
    CHECK(m["lf"] == "sick_leave_hours");
    CHECK(m["captures"][1]["text"] == "10");
    CHECK(m["captures"][2]["text"] == "hours");
    CHECK(j["budget_exceeded"] == Json::array());
    CHECK(j["diagnostics"] == Json::array());
    CHECK(j["timing_ms"].is_number());
  }
  SUBCASE("a bucket reports coverage against the saved ruleset") {
    const Json req = {{"ruleset", testing::kSickLeaveRuleset}, {"bucket", "train"}};
    const auto j = body_of(c.Post("/api/run", req.dump(), kJson));
    CHECK(j["bucket"] == "train");
    REQUIRE(j["docs"].size() == 9);
    std::vector<std::string> ids;
    for (const auto& d : j["docs"]) ids.push_back(d["doc_id"]);
    CHECK(std::is_sorted(ids.begin(), ids.end()));
    REQUIRE(j["coverage"].size() == 8);
    for (const auto& e : j["coverage"]) {
      if (e["concept"] == "employer_name") {
        CHECK(e["coverage"] == 0.0);
        CHECK(e["saved_coverage"] == 1.0);
        CHECK(e["delta"] == -1.0);
      }
      if (e["concept"] == "sick_leave_amount") {
        CHECK(e["coverage"].get<double>() > 0.0);
        CHECK(e["coverage"].get<double>() <= e["saved_coverage"].get<double>());
      }
    }
    // The same request with the saved ruleset reproduces the saved coverage.
    const Json same = {{"ruleset", demo_ruleset()}, {"bucket", "train"}};
    for (const auto& e : body_of(c.Post("/api/run", same.dump(), kJson))["coverage"]) {
      CHECK(e["delta"] == 0.0);
    }
  }
  SUBCASE("errors") {
    const Json unknown = {{"ruleset", testing::kSickLeaveRuleset}, {"doc_id", "nope"}};
    check_error(c.Post("/api/run", unknown.dump(), kJson), 404, "not-found");
    const Json invalid = {{"ruleset", "lf x for wages { match: \"a\" }"}, {"doc_id", "cba01"}};
    const auto r = c.Post("/api/run", invalid.dump(), kJson);
    check_error(r, 422, "invalid-ruleset");
    CHECK(Json::parse(r->body)["detail"][0]["message"].get<std::string>().find("wages") !=
          std::string::npos);
    const Json neither = {{"ruleset", testing::kSickLeaveRuleset}};
    check_error(c.Post("/api/run", neither.dump(), kJson), 400, "invalid-request");
    const Json bad_bucket = {{"ruleset", testing::kSickLeaveRuleset}, {"bucket", "all"}};
    check_error(c.Post("/api/run", bad_bucket.dump(), kJson), 400, "invalid-request");
    check_error(c.Post("/api/run", "[1]", kJson), 400, "invalid-request");
  }
}

TEST_CASE("documents and metrics") {
  Served s("svc_docs");
  auto c = s.client();

  const auto docs = body_of(c.Get("/api/docs"));
  REQUIRE(docs.size() == 12);
  CHECK(docs[0]["id"] == "cba01");
  CHECK(docs[0]["pages"] == 2);

  const auto doc = body_of(c.Get("/api/docs/cba02"));
  CHECK(doc["id"] == "cba02");
  CHECK(doc["text"] == std::string(s.project.corpus().find("cba02")->text()));
  CHECK_FALSE(doc["tokens"].empty());
  CHECK_FALSE(doc["sections"].empty());
  check_error(c.Get("/api/docs/cba99"), 404, "not-found");

  const auto cov = c.Get("/api/metrics/coverage");
  REQUIRE(cov);
  CHECK(cov->body == coverage_json(s.project));
  CHECK(c.Get("/api/metrics/conflict")->body == conflict_json(s.project));
  CHECK(c.Get("/api/metrics/eval?bucket=dev")->body ==
        eval_json(s.project, weaksup::Bucket::kDev));
  CHECK(c.Get("/api/metrics/eval")->body == eval_json(s.project, weaksup::Bucket::kTest));
  check_error(c.Get("/api/metrics/eval?bucket=train"), 422, "unprocessable");
  check_error(c.Get("/api/metrics/eval?bucket=holdout"), 400, "invalid-request");

  // Reads are pure: repeating them returns the same bytes.
  for (const char* path : {"/api/docs", "/api/docs/cba05", "/api/metrics/coverage",
                           "/api/metrics/conflict", "/api/corrections"}) {
    INFO(path);
    CHECK(c.Get(path)->body == c.Get(path)->body);
  }
}

TEST_CASE("corrections") {
  Served s("svc_corrections");
  auto c = s.client();
  CHECK(body_of(c.Get("/api/corrections")) == Json::array());

  const Json replace = {{"doc_id", "cba01"},
                        {"concept", "employer_name"},
                        {"start", 98},
                        {"end", 120},
                        {"verdict", "replace"},
                        {"replacement", {{"start", 98}, {"end", 102}}}};
  const auto r = c.Post("/api/corrections", replace.dump(), kJson);
  REQUIRE(r);
  CHECK(r->status == 201);
  const auto stored = body_of(r);
  CHECK(stored["seq"] == 0);
  CHECK(stored["verdict"] == "replace");
  CHECK(stored["replacement"]["end"] == 102);

  const auto listed = body_of(c.Get("/api/corrections"));
  REQUIRE(listed.size() == 1);
  CHECK(listed[0]["doc_id"] == "cba01");
  CHECK(listed[0]["start"] == 98);
  CHECK(listed[0]["replacement"]["start"] == 98);

  Json bad = replace;
  bad["end"] = 1000000;
  check_error(c.Post("/api/corrections", bad.dump(), kJson), 422, "unprocessable");
  bad = replace;
  bad["doc_id"] = "cba99";
  check_error(c.Post("/api/corrections", bad.dump(), kJson), 404, "not-found");
  bad = replace;
  bad["verdict"] = "maybe";
  check_error(c.Post("/api/corrections", bad.dump(), kJson), 400, "invalid-request");
  bad = replace;
  bad.erase("replacement");
  check_error(c.Post("/api/corrections", bad.dump(), kJson), 400, "invalid-request");
  bad = replace;
  bad["concept"] = "wages";
  check_error(c.Post("/api/corrections", bad.dump(), kJson), 422, "unprocessable");

  SUBCASE("concurrent writers each get their own sequence number") {
    constexpr int kThreads = 4;
    constexpr int kEach = 5;
    std::vector<std::thread> pool;
    for (int t = 0; t < kThreads; ++t) {
      pool.emplace_back([&, t] {
        auto tc = s.client();
        for (int i = 0; i < kEach; ++i) {
          const Json j = {{"doc_id", "cba03"},
                          {"concept", "sick_leave_unit"},
                          {"start", t * 10 + i},
                          {"end", t * 10 + i + 1},
                          {"verdict", "reject"}};
          const auto res = tc.Post("/api/corrections", j.dump(), kJson);
          CHECK((res && res->status == 201));
        }
      });
    }
    for (auto& th : pool) th.join();
    const auto journal = s.project.corrections();
    REQUIRE(journal.size() == 1 + kThreads * kEach);
    std::set<uint64_t> seqs;
    for (const auto& e : journal) seqs.insert(e.seq);
    CHECK(seqs.size() == journal.size());
    CHECK(*seqs.rbegin() == journal.size() - 1);
  }
}

TEST_CASE("environment overrides") {
  Options o;
  ProjectConfig cfg;
  ::setenv("LF_PORT", "8123", 1);
  ::setenv("LF_CORPUS_DIR", "/data/corpus", 1);
  ::setenv("LF_JOURNAL_PATH", "/data/journal.jsonl", 1);
  apply_env(o, cfg);
  CHECK(o.port == 8123);
  CHECK(cfg.corpus_dir == "/data/corpus");
  CHECK(cfg.journal_path == "/data/journal.jsonl");
  ::setenv("LF_PORT", "http", 1);
  CHECK_THROWS_AS(apply_env(o, cfg), UserError);
  ::setenv("LF_PORT", "70000", 1);
  CHECK_THROWS_AS(apply_env(o, cfg), UserError);
  ::unsetenv("LF_PORT");
  ::unsetenv("LF_CORPUS_DIR");
  ::unsetenv("LF_JOURNAL_PATH");

  Served s("svc_port");
  Project& p = s.project;
  Server clash(p, Options{"127.0.0.1", s.port, 1024});
  CHECK_THROWS_AS(clash.bind(), EnvironmentError);
}

}  // namespace
}  // namespace lfe::service
