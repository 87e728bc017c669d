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

#include "lfe/project.hpp"

#include <chrono>
#include <ctime>

#include "common/text_util.hpp"
#include "lfe/error.hpp"
#include "project/render.hpp"

namespace lfe {

bool CheckReport::ok() const {
  for (const auto& d : diagnostics) {
    if (d.diag.is_error()) return false;
  }
  return true;
}

CheckReport check_sources(const std::vector<std::pair<std::string, std::string>>& files,
                          const ConceptSchema& schema) {
  CheckReport report;
  // LF name -> file, to attribute validation diagnostics.
  std::map<std::string, std::string> origin;
  for (const auto& [name, text] : files) {
    dsl::ParseResult r = dsl::parse_ruleset(text);
    for (auto& d : r.diagnostics) report.diagnostics.push_back({name, std::move(d)});
    for (auto& lf : r.lfs) {
      origin.emplace(lf.name, name);
      report.lfs.push_back(std::move(lf));
    }
  }
  for (auto& d : dsl::validate(report.lfs, schema)) {
    auto it = origin.find(d.lf);
    const std::string file =
        it != origin.end() ? it->second : (files.empty() ? std::string() : files.front().first);
    report.diagnostics.push_back({file, std::move(d)});
  }
  return report;
}

std::string format_diagnostics(const std::vector<RulesetDiagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    out += d.file + ":" + dsl::format_diagnostic(d.diag) + "\n";
  }
  return out;
}

namespace {

nlohmann::ordered_json diagnostic_to_json(const RulesetDiagnostic& d) {
  nlohmann::ordered_json j;
  j["file"] = d.file;
  j["line"] = d.diag.line;
  j["col"] = d.diag.col;
  j["severity"] = d.diag.is_error() ? "error" : "warning";
  j["code"] = d.diag.code;
  j["message"] = d.diag.message;
  j["lf"] = d.diag.lf;
  j["expected"] = d.diag.expected;
  return j;
}

std::string now_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

render::Json render::diagnostics(const std::vector<RulesetDiagnostic>& diags) {
  Json j = Json::array();
  for (const auto& d : diags) j.push_back(diagnostic_to_json(d));
  return j;
}

std::string diagnostics_json(const std::vector<RulesetDiagnostic>& diags) {
  return render::dump(render::diagnostics(diags));
}

Project::Project(ProjectConfig config) : config_(std::move(config)) {
  config_.check_paths();
  schema_ = ConceptSchema::from_json(util::read_file(config_.schema_path));
  corpus_ = load_corpus_dir(config_.corpus_dir, {}, config_.workers);
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& p : config_.ruleset_paths) {
    files.emplace_back(p.lexically_relative(config_.root).string(), util::read_file(p));
  }
  check_ = check_sources(files, schema_);
  if (check_.ok()) {
    std::vector<dsl::Diagnostic> diags;
    compiled_ = engine::compile_ruleset(check_.lfs, schema_, diags);
  }
  for (const auto& [id, policy] : config_.policies) {
    if (!schema_.find(id)) throw UserError("policy for unknown concept '" + id + "'");
  }
  journal_ = std::make_unique<weaksup::CorrectionJournal>(config_.journal_path);
}

const std::vector<engine::CompiledLF>& Project::compiled() const {
  if (!check_.ok()) {
    throw UserError("ruleset has errors:\n" + format_diagnostics(check_.diagnostics));
  }
  return compiled_;
}

weaksup::PriorityMap Project::priorities() const {
  weaksup::PriorityMap out;
  for (const auto& lf : check_.lfs) out.emplace(lf.name, lf.priority);
  return out;
}

const engine::RunResult& Project::run() const {
  std::call_once(run_once_, [&] {
    engine::RunOptions opts;
    opts.workers = config_.workers;
    opts.step_budget = config_.step_budget;
    run_ = std::make_unique<engine::RunResult>(engine::run_ruleset(compiled(), corpus_, opts));
  });
  return *run_;
}

weaksup::SplitManifest Project::compute_split(uint64_t seed) const {
  return weaksup::split_corpus(corpus_.ids(), config_.ratios, seed);
}

weaksup::SplitManifest Project::split() const {
  std::error_code ec;
  if (!std::filesystem::exists(config_.split_path, ec)) return compute_split(config_.seed);
  auto m = weaksup::manifest_from_json(util::read_file(config_.split_path));
  for (const auto& id : corpus_.ids()) {
    if (!m.bucket_of(id)) {
      throw UserError("split manifest " + config_.split_path.string() +
                      " does not assign document '" + id + "'; rerun split");
    }
  }
  return m;
}

std::vector<weaksup::Correction> Project::corrections() const {
  std::lock_guard lock(journal_mu_);
  return weaksup::effective_corrections(journal_->entries());
}

weaksup::Correction Project::add_correction(weaksup::Correction c) {
  weaksup::check_correction(c, corpus_, schema_);
  c.timestamp = now_utc();
  std::lock_guard lock(journal_mu_);
  return journal_->append(std::move(c));
}

LabelSet Project::corrected_votes() const {
  return weaksup::apply_corrections(run().labels, corrections(), corpus_, schema_);
}

weaksup::ResolvedLabels Project::resolved() const {
  return weaksup::aggregate(corrected_votes(), priorities(), corpus_, schema_);
}

weaksup::ResolvedLabels Project::predictions() const {
  return weaksup::aggregate(run().labels, priorities(), corpus_, schema_);
}

weaksup::ResolvedLabels Project::gold() const {
  if (config_.gold_paths.empty()) throw UserError("no gold annotations configured");
  std::string all;
  for (const auto& p : config_.gold_paths) {
    std::string text = util::read_file(p);
    if (!text.empty() && text.back() != '\n') text.push_back('\n');
    all += text;
  }
  return weaksup::import_spans(all, corpus_, schema_, nullptr, kGoldSource);
}

}  // namespace lfe
