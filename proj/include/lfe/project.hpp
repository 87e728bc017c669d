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

// A labeling project: configuration, loaded corpus and ruleset, and the
// operations behind every CLI command and service route. JSON renderings
// live here so that both front ends emit identical bytes.

#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lfe/docmodel.hpp"
#include "lfe/dsl.hpp"
#include "lfe/engine.hpp"
#include "lfe/evalkit.hpp"
#include "lfe/weaksup.hpp"

namespace lfe {

struct ProjectConfig {
  std::filesystem::path root;  // directory holding the config file
  std::filesystem::path corpus_dir;
  std::filesystem::path schema_path;
  std::vector<std::filesystem::path> ruleset_paths;
  std::filesystem::path split_path;
  std::vector<std::filesystem::path> gold_paths;
  std::filesystem::path output_dir;
  std::filesystem::path journal_path;
  evalkit::PolicyMap policies;
  std::array<double, 3> ratios = {0.8, 0.1, 0.1};
  uint64_t seed = 0;
  int workers = 1;
  uint64_t step_budget = engine::kDefaultStepBudget;

  // Relative paths resolve against the config file's directory. Syntax
  // errors and bad values are UserErrors; a missing config file, corpus
  // directory, schema, ruleset or gold file is an EnvironmentError.
  static ProjectConfig load(const std::filesystem::path& config_file);
  void check_paths() const;
};

struct RulesetDiagnostic {
  std::string file;
  dsl::Diagnostic diag;
};

struct CheckReport {
  std::vector<dsl::LabelingFunction> lfs;
  std::vector<RulesetDiagnostic> diagnostics;
  bool ok() const;
};

// Parses and validates ruleset sources. Each (file name, text) pair is
// parsed separately; validation runs over the union so duplicate LF names
// across files are reported.
CheckReport check_sources(const std::vector<std::pair<std::string, std::string>>& files,
                          const ConceptSchema& schema);

// One "file:line:col: error [code] (lf) message" line per diagnostic.
std::string format_diagnostics(const std::vector<RulesetDiagnostic>& diags);
std::string diagnostics_json(const std::vector<RulesetDiagnostic>& diags);

class Project {
 public:
  explicit Project(ProjectConfig config);

  const ProjectConfig& config() const { return config_; }
  const Corpus& corpus() const { return corpus_; }
  const ConceptSchema& schema() const { return schema_; }
  const CheckReport& check() const { return check_; }

  // The compiled saved ruleset; a UserError when it has errors.
  const std::vector<engine::CompiledLF>& compiled() const;
  weaksup::PriorityMap priorities() const;

  // Runs the saved ruleset once and caches the result. Thread-safe.
  const engine::RunResult& run() const;

  // Stored manifest when the split file exists, otherwise computed from the
  // configured seed and ratios.
  weaksup::SplitManifest split() const;
  weaksup::SplitManifest compute_split(uint64_t seed) const;

  // Corrections currently in the journal.
  std::vector<weaksup::Correction> corrections() const;
  // Validates, timestamps and appends a correction. Thread-safe.
  weaksup::Correction add_correction(weaksup::Correction c);

  // LF votes with corrections applied, and their resolution.
  LabelSet corrected_votes() const;
  weaksup::ResolvedLabels resolved() const;
  // Resolution of LF votes alone, which is what gets scored.
  weaksup::ResolvedLabels predictions() const;
  // A UserError when no gold files are configured.
  weaksup::ResolvedLabels gold() const;

 private:
  ProjectConfig config_;
  Corpus corpus_;
  ConceptSchema schema_;
  CheckReport check_;
  std::vector<engine::CompiledLF> compiled_;

  mutable std::once_flag run_once_;
  mutable std::unique_ptr<engine::RunResult> run_;
  mutable std::mutex journal_mu_;
  std::unique_ptr<weaksup::CorrectionJournal> journal_;
};

// --- Shared JSON renderings -------------------------------------------------

std::string coverage_json(const weaksup::CoverageReport& report, const Corpus& corpus);
std::string coverage_json(const Project& p);
std::string conflict_json(const Project& p);
std::string eval_json(const Project& p, weaksup::Bucket bucket);
std::string doc_list_json(const Corpus& corpus);
std::string doc_json(const Document& doc);
std::string corrections_json(const std::vector<weaksup::Correction>& effective);

// One SPANS_JSONL line per resolved span, over every document.
std::string resolved_jsonl(const weaksup::ResolvedLabels& resolved, const Corpus& corpus,
                           const ConceptSchema& schema);

// Per-LF summary of a run: {"lfs": [...], "documents", "votes", "resolved",
// "budget_exceeded": [...], "meta": {...timings...}}.
// `artifacts` names written files, as (kind, path) pairs.
using Artifacts = std::vector<std::pair<std::string, std::string>>;
std::string run_summary_json(const Project& p, const engine::RunResult& r,
                             const Artifacts& artifacts = {});
std::string run_summary_text(const Project& p, const engine::RunResult& r,
                             const Artifacts& artifacts = {});

// Every LF's matches over one document with capture offsets and a context
// snippet reaching one sentence beyond the match on each side.
std::string matches_json(const std::vector<engine::CompiledLF>& clfs, const Document& doc,
                         const engine::MatchOptions& options);

// --- Synthetic throughput benchmark -----------------------------------------

// Collective-agreement-like documents of about `tokens_per_doc` tokens each
// with page headers, footers and article headings, about `tokens` tokens in
// total. Deterministic in the seed.
Corpus synthetic_corpus(uint64_t tokens, uint64_t seed, size_t tokens_per_doc = 50000);
// The three example LFs used by the benchmark.
std::string bench_ruleset();
ConceptSchema bench_schema();

struct BenchLf {
  std::string name;
  uint64_t matches = 0;
  double seconds = 0;
  double tokens_per_second = 0;
};

struct BenchReport {
  uint64_t tokens = 0;
  uint64_t documents = 0;
  int workers = 1;
  double single_seconds = 0;
  double parallel_seconds = 0;  // 0 when workers == 1
  double speedup = 0;
  bool identical = true;
  std::vector<BenchLf> lfs;
};

BenchReport run_bench(uint64_t tokens, int workers, uint64_t seed);
std::string bench_json(const BenchReport& r);
std::string bench_text(const BenchReport& r);

}  // namespace lfe
