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

// Command-line front end. Talks to the library only through lfe.h.

#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lfe/lfe.h"

namespace {

struct Globals {
  std::string config = "project.toml";
  bool json = false;
  int workers = 0;
  std::optional<uint64_t> seed;
};

// Prints a result's streams and returns its status.
int finish(lfe_result* r) {
  if (!r) {
    std::fputs("error: out of memory\n", stderr);
    return LFE_ENVIRONMENT_ERROR;
  }
  std::fputs(lfe_result_output(r), stdout);
  std::fflush(stdout);
  std::fputs(lfe_result_errors(r), stderr);
  const int status = lfe_result_status(r);
  lfe_result_free(r);
  return status;
}

class OpenProject {
 public:
  OpenProject(const Globals& g, bool service_env) {
    lfe_open_options opts{};
    opts.workers = g.workers;
    opts.has_seed = g.seed.has_value();
    opts.seed = g.seed.value_or(0);
    opts.service_env = service_env;
    lfe_result* r = lfe_project_open(g.config.c_str(), &opts, &p_);
    status_ = finish(r);
  }
  ~OpenProject() { lfe_project_free(p_); }
  OpenProject(const OpenProject&) = delete;
  OpenProject& operator=(const OpenProject&) = delete;

  lfe_project* get() const { return p_; }
  int status() const { return status_; }

 private:
  lfe_project* p_ = nullptr;
  int status_ = LFE_OK;
};

void announce(int port, void*) {
  std::fprintf(stderr, "listening on port %d\n", port);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Labeling-function engine for contract extraction"};
  app.set_version_flag("--version", lfe_version());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Project config file")->capture_default_str();
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--workers", g.workers, "Worker threads (overrides the config)")
      ->check(CLI::Range(1, 1024));
  app.add_option("--seed", g.seed, "Split seed (overrides the config)");

  auto* ingest = app.add_subcommand("ingest", "Ingest the corpus and summarize documents");
  auto* check = app.add_subcommand("check", "Validate the rulesets");
  auto* run = app.add_subcommand("run", "Run the rulesets and write label files");
  auto* stats = app.add_subcommand("stats", "Coverage of the train bucket");
  bool conflict = false;
  stats->add_flag("--conflict", conflict, "Report LF conflict rates instead");
  auto* split = app.add_subcommand("split", "Write the train/dev/test manifest");

  auto* eval = app.add_subcommand("eval", "Score LF predictions against gold");
  std::optional<std::string> bucket;
  eval->add_option("--bucket", bucket, "dev or test")->check(CLI::IsMember({"dev", "test"}));

  auto* exp = app.add_subcommand("export", "Write training data for the train bucket");
  std::string format = "spans";
  std::optional<std::string> out_path;
  exp->add_option("--format", format, "spans or bio")
      ->check(CLI::IsMember({"spans", "bio"}))
      ->capture_default_str();
  exp->add_option("--out", out_path, "Output file");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  std::string host = "127.0.0.1";
  int port = -1;
  serve->add_option("--host", host, "Address to bind")->capture_default_str();
  serve->add_option("--port", port, "Port (default LF_PORT or 7070)")
      ->check(CLI::Range(0, 65535));

  auto* bench = app.add_subcommand("bench", "Synthetic throughput benchmark");
  uint64_t tokens = 10'000'000;
  bench->add_option("--tokens", tokens, "Corpus size in tokens")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : LFE_USER_ERROR;
  }

  const int json = g.json ? 1 : 0;
  if (bench->parsed()) {
    return finish(lfe_bench(tokens, g.workers > 0 ? g.workers : 1, g.seed.value_or(0), json));
  }

  OpenProject p(g, serve->parsed());
  if (p.status() != LFE_OK) return p.status();

  if (ingest->parsed()) return finish(lfe_ingest(p.get(), json));
  if (check->parsed()) return finish(lfe_check(p.get(), json));
  if (run->parsed()) return finish(lfe_run(p.get(), json));
  if (stats->parsed()) {
    return finish(conflict ? lfe_conflict(p.get(), json) : lfe_stats(p.get(), json));
  }
  if (split->parsed()) return finish(lfe_split(p.get(), json));
  if (eval->parsed()) {
    return finish(lfe_eval(p.get(), bucket ? bucket->c_str() : nullptr, json));
  }
  if (exp->parsed()) {
    return finish(
        lfe_export(p.get(), format.c_str(), out_path ? out_path->c_str() : nullptr, json));
  }
  if (serve->parsed()) {
    return finish(lfe_serve(p.get(), host.c_str(), port, announce, nullptr));
  }
  return LFE_INTERNAL_ERROR;
}
