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

#include <set>

#include "common/text_util.hpp"
#include "lfe/error.hpp"
#include "lfe/project.hpp"
#include "project/toml_lite.hpp"

namespace lfe {

namespace {

namespace fs = std::filesystem;

const std::set<std::string, std::less<>> kKnownKeys = {
    "project.corpus", "project.schema", "project.rulesets", "project.gold",
    "project.split",  "project.output", "project.journal",  "project.workers",
    "project.budget", "split.seed",     "split.ratios",
};

std::string where(const std::string& file, const toml::Value& v) {
  return file + ":" + std::to_string(v.line) + ": ";
}

const std::string& as_string(const std::string& file, const std::string& key,
                             const toml::Value& v) {
  if (const auto* s = std::get_if<std::string>(&v.v)) return *s;
  throw UserError(where(file, v) + "'" + key + "' must be a string");
}

int64_t as_int(const std::string& file, const std::string& key, const toml::Value& v) {
  if (const auto* i = std::get_if<int64_t>(&v.v)) return *i;
  throw UserError(where(file, v) + "'" + key + "' must be an integer");
}

double as_number(const std::string& file, const std::string& key, const toml::Value& v) {
  if (const auto* i = std::get_if<int64_t>(&v.v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v.v)) return *d;
  throw UserError(where(file, v) + "'" + key + "' must be a number");
}

std::vector<std::string> as_strings(const std::string& file, const std::string& key,
                                    const toml::Value& v) {
  const auto* a = std::get_if<toml::Array>(&v.v);
  if (!a) throw UserError(where(file, v) + "'" + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : *a) out.push_back(as_string(file, key, e));
  return out;
}

}  // namespace

ProjectConfig ProjectConfig::load(const fs::path& config_file) {
  std::error_code ec;
  if (!fs::is_regular_file(config_file, ec)) {
    throw EnvironmentError("config file not found: " + config_file.string());
  }
  const std::string file = config_file.string();
  toml::Table t;
  try {
    t = toml::parse(util::read_file(config_file));
  } catch (const UserError& e) {
    throw UserError(file + ": " + e.what());
  }

  ProjectConfig c;
  c.root = fs::absolute(config_file).parent_path();
  auto path_of = [&](const std::string& s) {
    const fs::path p(s);
    return p.is_absolute() ? p : (c.root / p).lexically_normal();
  };
  for (const auto& [key, value] : t) {
    if (key.starts_with("policies.")) {
      const std::string concept_id = key.substr(9);
      c.policies.emplace(concept_id, evalkit::parse_policy(as_string(file, key, value)));
      continue;
    }
    if (!kKnownKeys.contains(key)) {
      throw UserError(where(file, value) + "unknown key '" + key + "'");
    }
    if (key == "project.corpus") {
      c.corpus_dir = path_of(as_string(file, key, value));
    } else if (key == "project.schema") {
      c.schema_path = path_of(as_string(file, key, value));
    } else if (key == "project.rulesets") {
      for (const auto& s : as_strings(file, key, value)) c.ruleset_paths.push_back(path_of(s));
    } else if (key == "project.gold") {
      for (const auto& s : as_strings(file, key, value)) c.gold_paths.push_back(path_of(s));
    } else if (key == "project.split") {
      c.split_path = path_of(as_string(file, key, value));
    } else if (key == "project.output") {
      c.output_dir = path_of(as_string(file, key, value));
    } else if (key == "project.journal") {
      c.journal_path = path_of(as_string(file, key, value));
    } else if (key == "project.workers") {
      const auto w = as_int(file, key, value);
      if (w < 1 || w > 1024) throw UserError(where(file, value) + "workers must be in [1, 1024]");
      c.workers = static_cast<int>(w);
    } else if (key == "project.budget") {
      const auto b = as_int(file, key, value);
      if (b < 1) throw UserError(where(file, value) + "budget must be positive");
      c.step_budget = static_cast<uint64_t>(b);
    } else if (key == "split.seed") {
      const auto s = as_int(file, key, value);
      if (s < 0) throw UserError(where(file, value) + "seed must be non-negative");
      c.seed = static_cast<uint64_t>(s);
    } else if (key == "split.ratios") {
      const auto* a = std::get_if<toml::Array>(&value.v);
      if (!a || a->size() != 3) {
        throw UserError(where(file, value) + "ratios must be an array of three numbers");
      }
      for (size_t i = 0; i < 3; ++i) c.ratios[i] = as_number(file, key, (*a)[i]);
    }
  }
  if (c.corpus_dir.empty()) throw UserError(file + ": missing project.corpus");
  if (c.schema_path.empty()) throw UserError(file + ": missing project.schema");
  if (c.ruleset_paths.empty()) throw UserError(file + ": missing project.rulesets");
  if (c.split_path.empty()) c.split_path = c.root / "split.json";
  if (c.output_dir.empty()) c.output_dir = c.root / "out";
  c.check_paths();
  return c;
}

void ProjectConfig::check_paths() const {
  std::error_code ec;
  if (!fs::is_directory(corpus_dir, ec)) {
    throw EnvironmentError("corpus directory not found: " + corpus_dir.string());
  }
  auto need_file = [&](const fs::path& p, const char* what) {
    if (!fs::is_regular_file(p, ec)) {
      throw EnvironmentError(std::string(what) + " not found: " + p.string());
    }
  };
  need_file(schema_path, "schema");
  for (const auto& p : ruleset_paths) need_file(p, "ruleset");
  for (const auto& p : gold_paths) need_file(p, "gold file");
  if (workers < 1) throw UserError("worker count must be at least 1");
}

}  // namespace lfe
