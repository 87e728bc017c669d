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

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <set>

#include "httplib.h"
#include "lfe/error.hpp"
#include "project/render.hpp"

namespace lfe::service {

namespace {

using render::Json;
using Clock = std::chrono::steady_clock;

constexpr const char* kJsonType = "application/json";

// Carries an HTTP status through the handler wrapper.
struct HttpError {
  int status;
  std::string error;
  Json detail;
};

[[noreturn]] void fail(int status, std::string error, Json detail) {
  throw HttpError{status, std::move(error), std::move(detail)};
}

std::string error_body(const std::string& error, const Json& detail) {
  Json j;
  j["error"] = error;
  j["detail"] = detail;
  return render::dump(j);
}

Json parse_body(const httplib::Request& req) {
  try {
    Json j = Json::parse(req.body);
    if (!j.is_object()) fail(400, "invalid-request", "request body must be a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    fail(400, "invalid-request", std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T field(const Json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) fail(400, "invalid-request", std::string("missing field '") + name + "'");
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(400, "invalid-request", std::string("field '") + name + "' has the wrong type");
  }
}

// Fraction of `docs` with at least one span per concept.
std::vector<double> bucket_coverage(const weaksup::ResolvedLabels& labels,
                                    const std::set<uint32_t>& docs, size_t concepts) {
  std::vector<std::set<uint32_t>> labeled(concepts);
  for (const auto& s : labels.spans) {
    if (docs.contains(s.doc)) labeled[s.concept_index].insert(s.doc);
  }
  std::vector<double> out(concepts, 0.0);
  for (size_t c = 0; c < concepts; ++c) {
    if (!docs.empty()) {
      out[c] = static_cast<double>(labeled[c].size()) / static_cast<double>(docs.size());
    }
  }
  return out;
}

Json budget_json(const std::vector<engine::BudgetDiagnostic>& budget) {
  Json j = Json::array();
  for (const auto& b : budget) {
    j.push_back({{"doc", b.doc_id}, {"lf", b.lf}, {"window", b.window}, {"steps", b.steps}});
  }
  return j;
}

}  // namespace

void apply_env(Options& options, ProjectConfig& config) {
  if (const char* port = std::getenv("LF_PORT"); port && *port) {
    char* end = nullptr;
    const long v = std::strtol(port, &end, 10);
    if (*end != '\0' || v < 0 || v > 65535) {
      throw UserError(std::string("LF_PORT must be a port number, got '") + port + "'");
    }
    options.port = static_cast<int>(v);
  }
  if (const char* dir = std::getenv("LF_CORPUS_DIR"); dir && *dir) config.corpus_dir = dir;
  if (const char* journal = std::getenv("LF_JOURNAL_PATH"); journal && *journal) {
    config.journal_path = journal;
  }
}

struct Server::Impl {
  Project& project;
  Options options;
  httplib::Server http;
  int port = -1;
  std::mutex state_mu;
  bool listening = false;
  bool stop_requested = false;

  Impl(Project& p, Options o) : project(p), options(std::move(o)) { routes(); }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  // Maps exceptions onto the error envelope.
  static httplib::Server::Handler wrap(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
        return;
      } catch (const HttpError& e) {
        res.status = e.status;
        res.set_content(error_body(e.error, e.detail), kJsonType);
      } catch (const UserError& e) {
        res.status = 422;
        res.set_content(error_body("unprocessable", e.what()), kJsonType);
      } catch (const EnvironmentError& e) {
        res.status = 503;
        res.set_content(error_body("unavailable", e.what()), kJsonType);
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(error_body("internal", e.what()), kJsonType);
      }
    };
  }

  void routes() {
    // Plain SO_REUSEADDR: the library default of SO_REUSEPORT would let a
    // second server bind a port that is already in use.
    http.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    http.set_payload_max_length(options.max_body_bytes);
    http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      const char* kind = res.status == 404   ? "not-found"
                         : res.status == 413 ? "payload-too-large"
                         : res.status < 500  ? "invalid-request"
                                             : "internal";
      res.set_content(error_body(kind, httplib::status_message(res.status)), kJsonType);
    });

    http.Post("/api/rulesets/validate", wrap([this](const auto& req, auto& res) {
                std::string source = req.body;
                if (req.get_header_value("Content-Type").find("json") != std::string::npos) {
                  source = field<std::string>(parse_body(req), "ruleset");
                }
                const auto report = check_sources({{"request", source}}, project.schema());
                res.set_content(render::dump(render::diagnostics(report.diagnostics)),
                                kJsonType);
              }));

    http.Post("/api/run", wrap([this](const auto& req, auto& res) { run(req, res); }));

    http.Get("/api/docs", wrap([this](const auto&, auto& res) {
               res.set_content(doc_list_json(project.corpus()), kJsonType);
             }));
    http.Get(R"(/api/docs/([^/]+))", wrap([this](const auto& req, auto& res) {
               const std::string id = req.matches[1];
               const Document* doc = project.corpus().find(id);
               if (!doc) fail(404, "not-found", "unknown document '" + id + "'");
               res.set_content(doc_json(*doc), kJsonType);
             }));

    http.Get("/api/metrics/coverage", wrap([this](const auto&, auto& res) {
               res.set_content(coverage_json(project), kJsonType);
             }));
    http.Get("/api/metrics/conflict", wrap([this](const auto&, auto& res) {
               res.set_content(conflict_json(project), kJsonType);
             }));
    http.Get("/api/metrics/eval", wrap([this](const auto& req, auto& res) {
               const std::string b =
                   req.has_param("bucket") ? req.get_param_value("bucket") : "test";
               weaksup::Bucket bucket;
               try {
                 bucket = weaksup::parse_bucket(b);
               } catch (const UserError& e) {
                 fail(400, "invalid-request", e.what());
               }
               res.set_content(eval_json(project, bucket), kJsonType);
             }));

    http.Post("/api/corrections", wrap([this](const auto& req, auto& res) {
                const Json body = parse_body(req);
                weaksup::Correction c;
                c.doc_id = field<std::string>(body, "doc_id");
                c.concept_id = field<std::string>(body, "concept");
                c.range = {field<uint32_t>(body, "start"), field<uint32_t>(body, "end")};
                try {
                  c.verdict = weaksup::parse_verdict(field<std::string>(body, "verdict"));
                } catch (const UserError& e) {
                  fail(400, "invalid-request", e.what());
                }
                if (c.verdict == weaksup::Verdict::kReplace) {
                  const Json r = field<Json>(body, "replacement");
                  c.replacement = {field<uint32_t>(r, "start"), field<uint32_t>(r, "end")};
                }
                if (!project.corpus().find(c.doc_id)) {
                  fail(404, "not-found", "unknown document '" + c.doc_id + "'");
                }
                const auto stored = project.add_correction(std::move(c));
                res.status = 201;
                res.set_content(render::dump(render::correction(stored)), kJsonType);
              }));
    http.Get("/api/corrections", wrap([this](const auto&, auto& res) {
               res.set_content(corrections_json(project.corrections()), kJsonType);
             }));
  }

  void run(const httplib::Request& req, httplib::Response& res) {
    const auto t0 = Clock::now();
    const Json body = parse_body(req);
    const auto source = field<std::string>(body, "ruleset");
    const auto report = check_sources({{"request", source}}, project.schema());
    if (!report.ok()) fail(422, "invalid-ruleset", render::diagnostics(report.diagnostics));
    std::vector<dsl::Diagnostic> diags;
    const auto clfs = engine::compile_ruleset(report.lfs, project.schema(), diags);
    engine::MatchOptions mo;
    mo.step_budget = project.config().step_budget;

    const auto docs = project.corpus().documents();
    Json out;
    if (body.contains("doc_id")) {
      const auto id = field<std::string>(body, "doc_id");
      const Document* doc = project.corpus().find(id);
      if (!doc) fail(404, "not-found", "unknown document '" + id + "'");
      auto m = render::match_document(clfs, *doc, 0, mo);
      out["doc_id"] = id;
      out["matches"] = std::move(m.matches);
      out["budget_exceeded"] = budget_json(m.budget);
    } else if (body.contains("bucket")) {
      weaksup::Bucket bucket;
      try {
        bucket = weaksup::parse_bucket(field<std::string>(body, "bucket"));
      } catch (const UserError& e) {
        fail(400, "invalid-request", e.what());
      }
      const auto split = project.split();
      LabelSet votes;
      for (const auto& clf : clfs) votes.source_index(clf.name());
      std::set<uint32_t> members;
      Json per_doc = Json::array();
      std::vector<engine::BudgetDiagnostic> budget;
      std::vector<std::pair<std::string_view, uint32_t>> ordered;
      for (size_t i = 0; i < docs.size(); ++i) {
        if (split.bucket_of(docs[i]->id()) == bucket) {
          ordered.emplace_back(docs[i]->id(), static_cast<uint32_t>(i));
        }
      }
      std::sort(ordered.begin(), ordered.end());
      for (const auto& [id, i] : ordered) {
        members.insert(i);
        auto m = render::match_document(clfs, *docs[i], i, mo);
        per_doc.push_back({{"doc_id", id}, {"matches", std::move(m.matches)}});
        votes.votes.insert(votes.votes.end(), m.votes.begin(), m.votes.end());
        budget.insert(budget.end(), m.budget.begin(), m.budget.end());
      }
      weaksup::PriorityMap prio;
      for (const auto& lf : report.lfs) prio.emplace(lf.name, lf.priority);
      const auto resolved = weaksup::aggregate(votes, prio, project.corpus(), project.schema());
      const size_t n = project.schema().concepts().size();
      const auto now = bucket_coverage(resolved, members, n);
      std::vector<double> saved;
      if (project.check().ok()) saved = bucket_coverage(project.predictions(), members, n);
      Json cov = Json::array();
      for (size_t c = 0; c < n; ++c) {
        Json e;
        e["concept"] = project.schema().concepts()[c].id;
        e["coverage"] = now[c];
        if (saved.empty()) {
          e["saved_coverage"] = nullptr;
          e["delta"] = nullptr;
        } else {
          e["saved_coverage"] = saved[c];
          e["delta"] = now[c] - saved[c];
        }
        cov.push_back(std::move(e));
      }
      out["bucket"] = weaksup::bucket_name(bucket);
      out["docs"] = std::move(per_doc);
      out["coverage"] = std::move(cov);
      out["budget_exceeded"] = budget_json(budget);
    } else {
      fail(400, "invalid-request", "give either 'doc_id' or 'bucket'");
    }
    out["diagnostics"] = render::diagnostics(report.diagnostics);
    out["timing_ms"] =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    res.set_content(render::dump(out), kJsonType);
  }
};

Server::Server(Project& project, Options options)
    : impl_(std::make_unique<Impl>(project, std::move(options))) {}

Server::~Server() { stop(); }

int Server::bind() {
  const auto& o = impl_->options;
  if (o.port == 0) {
    impl_->port = impl_->http.bind_to_any_port(o.host);
  } else {
    impl_->port = impl_->http.bind_to_port(o.host, o.port) ? o.port : -1;
  }
  if (impl_->port < 0) {
    throw EnvironmentError("cannot listen on " + o.host + ":" + std::to_string(o.port));
  }
  return impl_->port;
}

void Server::listen() {
  if (impl_->port < 0) throw DefectError("Server::listen called before bind");
  {
    std::lock_guard lock(impl_->state_mu);
    if (impl_->stop_requested) return;
    impl_->listening = true;
  }
  impl_->http.listen_after_bind();
}

void Server::stop() {
  if (!impl_) return;
  {
    std::lock_guard lock(impl_->state_mu);
    impl_->stop_requested = true;
    if (!impl_->listening) return;
  }
  // A stop that arrives before the accept loop starts would otherwise be lost.
  impl_->http.wait_until_ready();
  impl_->http.stop();
}

}  // namespace lfe::service
