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

// JSON building blocks shared by the project renderings and the service.

#pragma once

#include "json.hpp"
#include "lfe/project.hpp"

namespace lfe::render {

using Json = nlohmann::ordered_json;

// Every public rendering ends in this: two-space indent plus a newline.
std::string dump(const Json& j);

Json coverage(const weaksup::CoverageReport& report, const Corpus& corpus);
Json diagnostics(const std::vector<RulesetDiagnostic>& diags);
Json correction(const weaksup::Correction& c);

// Matches of every LF over one document, in LF order then document order.
struct DocMatches {
  Json matches = Json::array();
  std::vector<Vote> votes;  // source = LF position in `clfs`
  std::vector<engine::BudgetDiagnostic> budget;
};
DocMatches match_document(const std::vector<engine::CompiledLF>& clfs, const Document& doc,
                          uint32_t doc_index, const engine::MatchOptions& options);

}  // namespace lfe::render
