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

// HTTP/1.1 JSON API over one project.
//
//   POST /api/rulesets/validate   body: ruleset text, or {"ruleset": text}
//   POST /api/run                 {"ruleset": text, "doc_id": id} or
//                                 {"ruleset": text, "bucket": name}
//   GET  /api/docs                document summaries
//   GET  /api/docs/{id}           text and every layer
//   GET  /api/metrics/coverage    same bytes as `lfe stats --json`
//   GET  /api/metrics/conflict
//   GET  /api/metrics/eval?bucket=dev|test
//   POST /api/corrections         {"doc_id", "concept", "start", "end",
//                                  "verdict", "replacement": {...}}
//   GET  /api/corrections         effective corrections
//
// Errors are {"error": kind, "detail": ...} with 400 for malformed
// requests, 404 for unknown resources, 413 for bodies over the cap and 422
// for requests that fail validation.

#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "lfe/project.hpp"

namespace lfe::service {

inline constexpr int kDefaultPort = 7070;

struct Options {
  std::string host = "127.0.0.1";
  int port = kDefaultPort;  // 0 picks a free port
  size_t max_body_bytes = 4u << 20;
};

// LF_PORT overrides the port; LF_CORPUS_DIR and LF_JOURNAL_PATH override the
// corresponding config paths. A malformed LF_PORT is a UserError.
void apply_env(Options& options, ProjectConfig& config);

class Server {
 public:
  Server(Project& project, Options options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the listening socket and returns the port. EnvironmentError when
  // the address is unavailable.
  int bind();
  // Serves until stop(); call bind() first. Returns at once if stop() came
  // first. stop() may be called from any thread.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lfe::service
