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

// Compiled labeling functions and their evaluation over documents.
//
// Matching semantics: each window of the LF's scope is first gated by the
// guards. The pattern is then tried at every start token from left to right.
// Quantifiers are greedy: a quantifier commits to a repeat count before its
// body is matched, trying the largest count first, and backtracks to smaller
// counts on failure. The first successful derivation at the leftmost start is
// emitted and scanning resumes after its last token.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lfe/docmodel.hpp"
#include "lfe/dsl.hpp"
#include "lfe/labels.hpp"

namespace lfe::engine {

inline constexpr uint64_t kDefaultStepBudget = 100000;

struct CaptureSlot {
  std::string name;
  std::string concept_id;
  int concept_index = -1;  // position in the schema
  bool clause = false;     // expands to the enclosing section when voting
};

namespace detail {
struct Program;
}

class CompiledLF {
 public:
  CompiledLF(const CompiledLF&) = default;
  CompiledLF(CompiledLF&&) noexcept = default;
  CompiledLF& operator=(const CompiledLF&) = default;
  CompiledLF& operator=(CompiledLF&&) noexcept = default;
  ~CompiledLF();

  const std::string& name() const;
  const dsl::LabelingFunction& source() const;
  int priority() const;
  // Captures in pattern order; CapturedSpan::slot indexes this list.
  std::span<const CaptureSlot> captures() const;
  int min_match_len() const;
  // Number of token predicates in the pattern program.
  size_t predicate_count() const;

  const detail::Program& program() const { return *program_; }

 private:
  friend CompiledLF compile(const dsl::LabelingFunction&, const ConceptSchema&);
  explicit CompiledLF(std::shared_ptr<const detail::Program> p);
  std::shared_ptr<const detail::Program> program_;
};

// Throws DefectError if `lf` cannot be compiled, which only happens for LFs
// that do not pass dsl::validate.
CompiledLF compile(const dsl::LabelingFunction& lf, const ConceptSchema& schema);

// Compiles every LF; diagnostics from validation are returned in `diags` and
// nothing is compiled if any of them is an error.
std::vector<CompiledLF> compile_ruleset(std::span<const dsl::LabelingFunction> lfs,
                                        const ConceptSchema& schema,
                                        std::vector<dsl::Diagnostic>& diags);

struct CapturedSpan {
  uint32_t slot = 0;
  CharRange range;
  uint32_t first_token = 0;  // document token indices, inclusive
  uint32_t last_token = 0;
  bool operator==(const CapturedSpan&) const = default;
};

struct Match {
  // Sentence index, section window index, or 0 for document scope.
  uint32_t window = 0;
  CharRange full_range;
  uint32_t first_token = 0;  // document token indices, inclusive
  uint32_t last_token = 0;
  std::vector<CapturedSpan> captures;  // in pattern order; absent ones omitted
  bool operator==(const Match&) const = default;
};

struct Window {
  CharRange range;
  // Document token indices, boilerplate excluded; a slice of
  // Document::effective_tokens().
  std::span<const uint32_t> tokens;
};

// Windows of a scope in document order. Section scope uses the top-level
// sections; tokens outside every top-level section form windows of their own.
std::vector<Window> windows_for(const Document& doc, dsl::Scope scope);

struct BudgetDiagnostic {
  std::string doc_id;
  std::string lf;
  uint32_t window = 0;
  uint64_t steps = 0;
};

struct MatchOptions {
  // Backtracking steps allowed for one match attempt. An attempt that runs
  // out skips the rest of its window.
  uint64_t step_budget = kDefaultStepBudget;
};

struct MatchReport {
  uint64_t windows = 0;
  uint64_t windows_passed = 0;  // windows whose guards held
  std::vector<BudgetDiagnostic> budget;
};

std::vector<Match> match_document(const CompiledLF& clf, const Document& doc,
                                  const MatchOptions& options = {},
                                  MatchReport* report = nullptr);

// Reference semantics by exhaustive enumeration. Only for documents with at
// most kOracleMaxTokens non-boilerplate tokens; larger input is a UserError.
inline constexpr size_t kOracleMaxTokens = 16;
std::vector<Match> brute_force_match(const dsl::LabelingFunction& lf,
                                     const ConceptSchema& schema, const Document& doc);

// Votes contributed by one match. Clause captures expand to the innermost
// section enclosing them.
void emit_votes(const CompiledLF& clf, const Document& doc, const Match& m,
                uint32_t doc_index, uint32_t source, std::vector<Vote>& out);

struct LfStats {
  std::string name;
  uint64_t matches = 0;
  uint64_t votes = 0;
  uint64_t windows = 0;
  uint64_t windows_passed = 0;  // windows whose guards held
  double seconds = 0;
};

struct DocStats {
  std::string doc_id;
  uint64_t matches = 0;
  double seconds = 0;
};

struct RunStats {
  std::vector<LfStats> lfs;   // in ruleset order
  std::vector<DocStats> docs;  // in corpus order
  std::vector<BudgetDiagnostic> budget;
  int workers = 1;
  double seconds = 0;
};

struct RunOptions {
  int workers = 1;
  uint64_t step_budget = kDefaultStepBudget;
};

struct RunResult {
  LabelSet labels;
  RunStats stats;
};

// Evaluates every (LF, document) pair on a pool of workers. The label set's
// sources are the LF names in ruleset order and is canonically sorted, so
// the result does not depend on the worker count.
RunResult run_ruleset(std::span<const CompiledLF> clfs, const Corpus& corpus,
                      const RunOptions& options = {});

}  // namespace lfe::engine
