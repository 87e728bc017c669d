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

// Shared test fixtures.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lfe/docmodel.hpp"
#include "lfe/dsl.hpp"

namespace lfe::testing {

// The sick-leave example ruleset.
extern const char* const kSickLeaveRuleset;

// The eight demo concepts, with the aliases used by the example ruleset.
ConceptSchema demo_schema();

std::vector<std::string> surfaces(const Document& doc);
std::vector<std::string> pos_tags(const Document& doc);
std::vector<std::string> ner_tags(const Document& doc);

// Parses source that is expected to be valid.
std::vector<dsl::LabelingFunction> parse_ok(const std::string& source);

std::filesystem::path source_dir();
std::filesystem::path demo_dir();

// A fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

// A private copy of the demo project without generated artifacts; returns the
// path of its project.toml.
std::filesystem::path demo_copy(const std::string& tag);

}  // namespace lfe::testing
