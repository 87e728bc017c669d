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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "engine/matcher.hpp"
#include "lfe/error.hpp"

namespace lfe::engine {

namespace {

using Clock = std::chrono::steady_clock;

struct UnitResult {
  std::vector<Vote> votes;
  MatchReport report;
  uint64_t matches = 0;
  double seconds = 0;
};

}  // namespace

RunResult run_ruleset(std::span<const CompiledLF> clfs, const Corpus& corpus,
                      const RunOptions& options) {
  if (options.workers < 1) throw UserError("worker count must be at least 1");
  const auto start = Clock::now();
  const auto docs = corpus.documents();

  // Units in canonical order: documents by id, then LFs by name, so that
  // concatenating per-unit results yields a sorted label set.
  std::vector<uint32_t> doc_order(docs.size());
  std::iota(doc_order.begin(), doc_order.end(), 0u);
  std::sort(doc_order.begin(), doc_order.end(),
            [&](uint32_t a, uint32_t b) { return docs[a]->id() < docs[b]->id(); });
  std::vector<uint32_t> lf_order(clfs.size());
  std::iota(lf_order.begin(), lf_order.end(), 0u);
  std::sort(lf_order.begin(), lf_order.end(),
            [&](uint32_t a, uint32_t b) { return clfs[a].name() < clfs[b].name(); });
  for (size_t i = 1; i < lf_order.size(); ++i) {
    if (clfs[lf_order[i]].name() == clfs[lf_order[i - 1]].name()) {
      throw UserError("duplicate labeling function name '" + clfs[lf_order[i]].name() + "'");
    }
  }

  const size_t units = docs.size() * clfs.size();
  std::vector<UnitResult> results(units);
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&] {
    std::vector<std::unique_ptr<detail::EvalCache>> caches(clfs.size());
    for (;;) {
      const size_t u = next.fetch_add(1);
      if (u >= units) return;
      const uint32_t d = doc_order[u / clfs.size()];
      const uint32_t l = lf_order[u % clfs.size()];
      try {
        if (!caches[l]) caches[l] = std::make_unique<detail::EvalCache>(clfs[l].program());
        const auto t0 = Clock::now();
        UnitResult& r = results[u];
        MatchOptions mo;
        mo.step_budget = options.step_budget;
        const auto matches =
            detail::match_with(clfs[l].program(), *docs[d], *caches[l], mo, &r.report);
        r.matches = matches.size();
        for (const Match& m : matches) emit_votes(clfs[l], *docs[d], m, d, l, r.votes);
        std::sort(r.votes.begin(), r.votes.end(), [](const Vote& a, const Vote& b) {
          return std::tie(a.range.start, a.range.end, a.concept_index) <
                 std::tie(b.range.start, b.range.end, b.concept_index);
        });
        r.votes.erase(std::unique(r.votes.begin(), r.votes.end()), r.votes.end());
        r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(units);
        return;
      }
    }
  };

  const int workers =
      static_cast<int>(std::min<size_t>(static_cast<size_t>(options.workers),
                                        std::max<size_t>(units, 1)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  RunResult out;
  out.stats.workers = options.workers;
  for (const auto& clf : clfs) {
    out.labels.sources.push_back(clf.name());
    out.stats.lfs.push_back({clf.name(), 0, 0, 0, 0, 0});
  }
  for (const auto& doc : docs) out.stats.docs.push_back({doc->id(), 0, 0});

  size_t total = 0;
  for (const auto& r : results) total += r.votes.size();
  out.labels.votes.reserve(total);
  for (size_t u = 0; u < units; ++u) {
    const uint32_t d = doc_order[u / clfs.size()];
    const uint32_t l = lf_order[u % clfs.size()];
    UnitResult& r = results[u];
    out.labels.votes.insert(out.labels.votes.end(), r.votes.begin(), r.votes.end());
    LfStats& ls = out.stats.lfs[l];
    ls.matches += r.matches;
    ls.votes += r.votes.size();
    ls.windows += r.report.windows;
    ls.windows_passed += r.report.windows_passed;
    ls.seconds += r.seconds;
    out.stats.docs[d].matches += r.matches;
    out.stats.docs[d].seconds += r.seconds;
    for (auto& b : r.report.budget) out.stats.budget.push_back(std::move(b));
    std::vector<Vote>().swap(r.votes);
  }
  out.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

}  // namespace lfe::engine
