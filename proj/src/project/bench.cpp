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
#include <cstdio>
#include <optional>
#include <random>
#include <thread>

#include "lfe/error.hpp"
#include "lfe/project.hpp"
#include "project/render.hpp"

namespace lfe {

namespace {

constexpr const char* kStatuses[] = {"Full", "Part", "All"};
constexpr const char* kUnits[] = {"hours", "days", "weeks", "shifts"};
constexpr const char* kFillers[] = {"regular", "eligible", "permanent", "seasonal", "covered"};

// Appends one sentence and returns its token count.
size_t sentence(std::mt19937_64& rng, std::string& out) {
  auto pick = [&](const auto& arr) {
    return arr[rng() % (sizeof(arr) / sizeof(arr[0]))];
  };
  const unsigned n = 1 + static_cast<unsigned>(rng() % 40);
  char buf[256];
  int len = 0;
  size_t tokens = 0;
  switch (rng() % 6) {
    case 0: {
      const char* status = pick(kStatuses);
      const bool all = status[0] == 'A';
      len = std::snprintf(buf, sizeof buf,
                          "%s %s %s employees shall accrue %u %s of sick leave per pay period.",
                          status, all ? "employees" : "time", pick(kFillers), n, pick(kUnits));
      tokens = 14;
      break;
    }
    case 1:
      len = std::snprintf(buf, sizeof buf,
                          "The Employer shall pay wages on the %u day of each month.", n);
      tokens = 13;
      break;
    case 2:
      len = std::snprintf(buf, sizeof buf,
                          "Employees may carry over up to %u %s of unused leave.", n, pick(kUnits));
      tokens = 11;
      break;
    case 3:
      len = std::snprintf(buf, sizeof buf,
                          "This Agreement shall remain in effect until June %u, 20%02u.",
                          1 + n % 28, 10 + n % 20);
      tokens = 12;
      break;
    case 4:
      len = std::snprintf(buf, sizeof buf,
                          "Grievances must be filed within %u days of the event.", n);
      tokens = 10;
      break;
    default:
      len = std::snprintf(buf, sizeof buf,
                          "Overtime is paid at one and one half times the %s rate.", pick(kFillers));
      tokens = 12;
      break;
  }
  out.append(buf, static_cast<size_t>(len));
  return tokens;
}

std::string synthetic_text(uint64_t seed, size_t target_tokens) {
  std::mt19937_64 rng(seed);
  std::string text;
  size_t tokens = 0;
  size_t page = 1;
  size_t article = 1;
  size_t lines_on_page = 0;
  auto page_header = [&] {
    text += "ACME MANUFACTURING CBA 2021\n";
    tokens += 4;
  };
  page_header();
  while (tokens < target_tokens) {
    if (lines_on_page % 12 == 0) {
      text += "ARTICLE " + std::to_string(article++) + "\nGENERAL PROVISIONS\n";
      tokens += 4;
    }
    const size_t sentences = 1 + rng() % 4;
    for (size_t s = 0; s < sentences; ++s) {
      if (s) text.push_back(' ');
      tokens += sentence(rng, text);
    }
    text.push_back('\n');
    if (++lines_on_page == 36) {
      text += "Page " + std::to_string(page++) + "\n\f";
      tokens += 2;
      lines_on_page = 0;
      page_header();
    }
  }
  return text;
}

}  // namespace

Corpus synthetic_corpus(uint64_t tokens, uint64_t seed, size_t tokens_per_doc) {
  if (tokens_per_doc == 0) throw UserError("tokens per document must be positive");
  const size_t docs = std::max<size_t>(1, (tokens + tokens_per_doc - 1) / tokens_per_doc);
  std::vector<std::optional<Document>> built(docs);
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < docs; i = next++) {
      char id[32];
      std::snprintf(id, sizeof id, "syn%06zu", i);
      built[i] = ingest_text(id, synthetic_text(seed * 1000003 + i, tokens_per_doc));
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  Corpus corpus;
  for (auto& d : built) corpus.add(std::move(*d));
  return corpus;
}

std::string bench_ruleset() {
  return R"(lf sick_leave_hours for sick_leave_amount priority 10 {
  require starts("full time" | "part time" | "all employees")
  require contains("accumulate.*" | "accru.*")
  match: status:("full|part" "time")? []{0,5}
         amount:([pos="NUM"]{1,2}) unit:([ner="TIME_UNIT"]{1,1})
}
lf amount_unit for amount { match: amount:([pos="NUM"]{1,1}) [ner="TIME_UNIT"]{1,1} }
lf x for amount { match: a:([]{1,1}) }
)";
}

ConceptSchema bench_schema() {
  std::vector<Concept> cs(3);
  cs[0].id = "sick_leave_amount";
  cs[0].aliases = {"amount", "a"};
  cs[1].id = "sick_leave_unit";
  cs[1].aliases = {"unit"};
  cs[2].id = "employment_status";
  cs[2].aliases = {"status"};
  return ConceptSchema(std::move(cs));
}

BenchReport run_bench(uint64_t tokens, int workers, uint64_t seed) {
  if (workers < 1) throw UserError("worker count must be at least 1");
  const ConceptSchema schema = bench_schema();
  const auto check = check_sources({{"bench", bench_ruleset()}}, schema);
  if (!check.ok()) throw DefectError("benchmark ruleset does not validate");
  std::vector<dsl::Diagnostic> diags;
  const auto clfs = engine::compile_ruleset(check.lfs, schema, diags);

  const Corpus corpus = synthetic_corpus(tokens, seed);
  BenchReport report;
  report.documents = corpus.size();
  for (const auto& d : corpus.documents()) report.tokens += d->tokens().size();
  report.workers = workers;

  engine::RunOptions one;
  const auto single = engine::run_ruleset(clfs, corpus, one);
  report.single_seconds = single.stats.seconds;
  for (const auto& s : single.stats.lfs) {
    BenchLf lf;
    lf.name = s.name;
    lf.matches = s.matches;
    lf.seconds = s.seconds;
    lf.tokens_per_second = s.seconds > 0 ? static_cast<double>(report.tokens) / s.seconds : 0;
    report.lfs.push_back(std::move(lf));
  }
  if (workers > 1) {
    engine::RunOptions many;
    many.workers = workers;
    const auto parallel = engine::run_ruleset(clfs, corpus, many);
    report.parallel_seconds = parallel.stats.seconds;
    report.speedup = parallel.stats.seconds > 0 ? single.stats.seconds / parallel.stats.seconds : 0;
    report.identical = parallel.labels == single.labels;
  }
  return report;
}

std::string bench_json(const BenchReport& r) {
  render::Json j;
  j["tokens"] = r.tokens;
  j["documents"] = r.documents;
  j["workers"] = r.workers;
  j["hardware_threads"] = std::thread::hardware_concurrency();
  j["single_seconds"] = r.single_seconds;
  j["parallel_seconds"] = r.parallel_seconds;
  j["speedup"] = r.speedup;
  j["identical"] = r.identical;
  render::Json lfs = render::Json::array();
  for (const auto& lf : r.lfs) {
    lfs.push_back({{"name", lf.name},
                   {"matches", lf.matches},
                   {"seconds", lf.seconds},
                   {"tokens_per_second", lf.tokens_per_second}});
  }
  j["lfs"] = std::move(lfs);
  return render::dump(j);
}

std::string bench_text(const BenchReport& r) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%llu tokens in %llu documents\n",
                static_cast<unsigned long long>(r.tokens),
                static_cast<unsigned long long>(r.documents));
  out += buf;
  for (const auto& lf : r.lfs) {
    std::snprintf(buf, sizeof buf, "  %-20s %10llu matches  %8.2f s  %12.0f tokens/s\n",
                  lf.name.c_str(), static_cast<unsigned long long>(lf.matches), lf.seconds,
                  lf.tokens_per_second);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "single worker: %.2f s\n", r.single_seconds);
  out += buf;
  if (r.workers > 1) {
    std::snprintf(buf, sizeof buf, "%d workers: %.2f s (speedup %.2fx, %s label set)\n",
                  r.workers, r.parallel_seconds, r.speedup,
                  r.identical ? "identical" : "DIFFERENT");
    out += buf;
  }
  return out;
}

}  // namespace lfe
