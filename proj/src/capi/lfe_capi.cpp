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

#include "lfe/lfe.h"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "common/text_util.hpp"
#include "json.hpp"
#include "lfe/error.hpp"
#include "lfe/project.hpp"
#include "lfe/service.hpp"

struct lfe_project {
  std::unique_ptr<lfe::Project> project;
};

struct lfe_result {
  int status = LFE_OK;
  std::string output;
  std::string errors;
};

namespace {

using lfe::Project;
using Json = nlohmann::ordered_json;

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string strf(const char* fmt, auto... args) {
  const int n = std::snprintf(nullptr, 0, fmt, args...);
  std::string out(static_cast<size_t>(n), '\0');
  std::snprintf(out.data(), out.size() + 1, fmt, args...);
  return out;
}

// Runs `body` and converts any exception into a status and message.
template <typename F>
lfe_result* guarded(F&& body) {
  auto* r = new (std::nothrow) lfe_result;
  if (!r) return nullptr;
  try {
    body(*r);
  } catch (const lfe::Error& e) {
    r->status = static_cast<int>(e.kind());
    r->errors += std::string("error: ") + e.what() + "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    r->status = LFE_ENVIRONMENT_ERROR;
    r->errors += std::string("error: ") + e.what() + "\n";
  } catch (const std::bad_alloc&) {
    r->status = LFE_ENVIRONMENT_ERROR;
    r->errors += "error: out of memory\n";
  } catch (const std::exception& e) {
    r->status = LFE_INTERNAL_ERROR;
    r->errors += std::string("internal error: ") + e.what() + "\n";
  }
  return r;
}

Project& project_of(lfe_project* p) {
  if (!p || !p->project) throw lfe::UserError("no project is open");
  return *p->project;
}

// Warnings go to standard error; errors make the result a user error.
void report_diagnostics(const Project& p, lfe_result& r) {
  r.errors += lfe::format_diagnostics(p.check().diagnostics);
  if (!p.check().ok()) r.status = LFE_USER_ERROR;
}

std::string ingest_text(const lfe::Corpus& corpus) {
  std::string out = strf("%-24s %8s %8s %9s %8s %11s\n", "document", "chars", "tokens",
                         "sentences", "sections", "boilerplate");
  uint64_t tokens = 0;
  for (const auto& id : corpus.ids()) {
    const lfe::Document& d = *corpus.find(id);
    tokens += d.tokens().size();
    out += strf("%-24s %8zu %8zu %9zu %8zu %11zu\n", id.c_str(), d.text().size(),
                d.tokens().size(), d.sentences().size(), d.sections().size(),
                d.header_footer_spans().size());
  }
  out += strf("%zu documents, %llu tokens\n", corpus.size(),
              static_cast<unsigned long long>(tokens));
  return out;
}

std::string stats_text(const lfe::weaksup::CoverageReport& report) {
  std::string out = strf("coverage over %llu train documents\n",
                         static_cast<unsigned long long>(report.train_docs));
  for (const auto& c : report.concepts) {
    if (c.coverage) {
      out += strf("  %-28s %4llu  %6.1f%%\n", c.concept_id.c_str(),
                  static_cast<unsigned long long>(c.labeled_docs), *c.coverage * 100.0);
    } else {
      out += strf("  %-28s %4llu  %7s\n", c.concept_id.c_str(),
                  static_cast<unsigned long long>(c.labeled_docs), "n/a");
    }
  }
  return out;
}

std::string conflict_text(const std::vector<lfe::weaksup::ConceptConflict>& stats) {
  std::string out = "conflicting documents per concept\n";
  for (const auto& c : stats) {
    out += strf("  %-28s %4llu  %6.1f%%\n", c.concept_id.c_str(),
                static_cast<unsigned long long>(c.conflicting_docs),
                c.conflict.value_or(0.0) * 100.0);
  }
  return out;
}

lfe::evalkit::MetricsReport score(const Project& p, lfe::weaksup::Bucket b) {
  return lfe::evalkit::score_corpus(p.predictions(), p.gold(), p.corpus(), p.schema(), p.split(),
                                    b, p.config().policies);
}

}  // namespace

extern "C" {

const char* lfe_version(void) { return "0.1.0"; }

int lfe_result_status(const lfe_result* r) { return r ? r->status : LFE_INTERNAL_ERROR; }
const char* lfe_result_output(const lfe_result* r) { return r ? r->output.c_str() : ""; }
const char* lfe_result_errors(const lfe_result* r) {
  return r ? r->errors.c_str() : "error: out of memory\n";
}
void lfe_result_free(lfe_result* r) { delete r; }

lfe_result* lfe_project_open(const char* config_path, const lfe_open_options* options,
                             lfe_project** out) {
  if (out) *out = nullptr;
  return guarded([&](lfe_result&) {
    if (!config_path) throw lfe::UserError("no config file given");
    if (!out) throw lfe::UserError("no output handle given");
    auto config = lfe::ProjectConfig::load(config_path);
    if (options) {
      if (options->workers < 0) throw lfe::UserError("worker count must be at least 1");
      if (options->workers > 0) config.workers = options->workers;
      if (options->has_seed) config.seed = options->seed;
      if (options->service_env) {
        lfe::service::Options ignored;
        lfe::service::apply_env(ignored, config);
      }
    }
    auto handle = std::make_unique<lfe_project>();
    handle->project = std::make_unique<Project>(std::move(config));
    *out = handle.release();
  });
}

void lfe_project_free(lfe_project* p) { delete p; }

lfe_result* lfe_ingest(lfe_project* handle, int json) {
  return guarded([&](lfe_result& r) {
    const auto& corpus = project_of(handle).corpus();
    r.output = json ? lfe::doc_list_json(corpus) : ingest_text(corpus);
  });
}

lfe_result* lfe_check(lfe_project* handle, int json) {
  return guarded([&](lfe_result& r) {
    const Project& p = project_of(handle);
    report_diagnostics(p, r);
    if (json) {
      r.output = lfe::diagnostics_json(p.check().diagnostics);
    } else if (p.check().ok()) {
      r.output = strf("%zu labeling functions OK\n", p.check().lfs.size());
    }
  });
}

lfe_result* lfe_run(lfe_project* handle, int json) {
  return guarded([&](lfe_result& r) {
    const Project& p = project_of(handle);
    report_diagnostics(p, r);
    if (r.status != LFE_OK) return;
    const auto& result = p.run();
    const auto& out_dir = p.config().output_dir;
    const auto labels_path = out_dir / "labels.jsonl";
    const auto resolved_path = out_dir / "resolved.jsonl";
    lfe::util::write_file_atomic(labels_path,
                                 lfe::labels_to_jsonl(result.labels, p.corpus(), p.schema()));
    lfe::util::write_file_atomic(resolved_path,
                                 lfe::resolved_jsonl(p.resolved(), p.corpus(), p.schema()));
    const lfe::Artifacts artifacts = {{"labels", labels_path.string()},
                                      {"resolved", resolved_path.string()}};
    r.output = json ? lfe::run_summary_json(p, result, artifacts)
                    : lfe::run_summary_text(p, result, artifacts);
  });
}

lfe_result* lfe_stats(lfe_project* handle, int json) {
  return guarded([&](lfe_result& r) {
    const Project& p = project_of(handle);
    if (json) {
      r.output = lfe::coverage_json(p);
    } else {
      r.output = stats_text(lfe::weaksup::coverage(p.resolved(), p.split(), p.corpus(), p.schema()));
    }
  });
}

lfe_result* lfe_conflict(lfe_project* handle, int json) {
  return guarded([&](lfe_result& r) {
    const Project& p = project_of(handle);
    if (json) {
      r.output = lfe::conflict_json(p);
    } else {
      r.output = conflict_text(lfe::weaksup::conflict_stats(p.run().labels, p.corpus(), p.schema()));
    }
  });
}

lfe_result* lfe_split(lfe_project* handle, int json) {
  return guarded([&](lfe_result& r) {
    const Project& p = project_of(handle);
    const auto manifest = p.compute_split(p.config().seed);
    const std::string text = lfe::weaksup::manifest_to_json(manifest);
    lfe::util::write_file_atomic(p.config().split_path, text);
    if (json) {
      r.output = text;
    } else {
      using lfe::weaksup::Bucket;
      r.output = strf("wrote %s: %zu train, %zu dev, %zu test (seed %llu)\n",
                      p.config().split_path.string().c_str(),
                      manifest.ids_in(Bucket::kTrain).size(), manifest.ids_in(Bucket::kDev).size(),
                      manifest.ids_in(Bucket::kTest).size(),
                      static_cast<unsigned long long>(manifest.seed));
    }
  });
}

lfe_result* lfe_eval(lfe_project* handle, const char* bucket, int json) {
  return guarded([&](lfe_result& r) {
    const Project& p = project_of(handle);
    using lfe::weaksup::Bucket;
    std::optional<Bucket> b;
    if (bucket) {
      b = lfe::weaksup::parse_bucket(bucket);
      if (*b == Bucket::kTrain) throw lfe::UserError("evaluation buckets are dev and test");
    }
    if (json) {
      r.output = lfe::eval_json(p, b.value_or(Bucket::kTest));
      return;
    }
    std::optional<lfe::evalkit::MetricsReport> dev, test;
    if (!b || *b == Bucket::kDev) dev = score(p, Bucket::kDev);
    if (!b || *b == Bucket::kTest) test = score(p, Bucket::kTest);
    r.output = lfe::evalkit::report_table(p.schema(), dev ? &*dev : nullptr,
                                          test ? &*test : nullptr);
  });
}

lfe_result* lfe_export(lfe_project* handle, const char* format_name, const char* out_path,
                       int json) {
  return guarded([&](lfe_result& r) {
    const Project& p = project_of(handle);
    const auto fmt = lfe::weaksup::parse_export_format(format_name ? format_name : "spans");
    const bool spans = fmt == lfe::weaksup::ExportFormat::kSpansJsonl;
    const std::filesystem::path path =
        out_path ? std::filesystem::path(out_path)
                 : p.config().output_dir / (spans ? "train.jsonl" : "train.bio");
    const auto exported =
        lfe::weaksup::export_training(p.resolved(), p.corpus(), p.schema(), p.split(), fmt);
    lfe::util::write_file_atomic(path, exported.data);
    for (const auto& w : exported.warnings) r.errors += "warning: " + w + "\n";
    if (json) {
      Json j;
      j["path"] = path.string();
      j["format"] = spans ? "spans" : "bio";
      j["bytes"] = exported.data.size();
      j["warnings"] = exported.warnings;
      r.output = dump(j);
    } else {
      r.output = strf("wrote %s (%zu bytes, %zu warnings)\n", path.string().c_str(),
                      exported.data.size(), exported.warnings.size());
    }
  });
}

lfe_result* lfe_serve(lfe_project* handle, const char* host, int port, lfe_ready_fn on_ready,
                      void* user) {
  return guarded([&](lfe_result&) {
    Project& p = project_of(handle);
    lfe::service::Options options;
    lfe::ProjectConfig unused = p.config();
    lfe::service::apply_env(options, unused);
    if (host) options.host = host;
    if (port >= 0) options.port = port;
    lfe::service::Server server(p, options);
    const int bound = server.bind();
    if (on_ready) on_ready(bound, user);
    server.listen();
  });
}

lfe_result* lfe_bench(uint64_t tokens, int workers, uint64_t seed, int json) {
  return guarded([&](lfe_result& r) {
    const auto report = lfe::run_bench(tokens, workers, seed);
    r.output = json ? lfe::bench_json(report) : lfe::bench_text(report);
  });
}

}  // extern "C"
