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
#include <cmath>

#include "common/text_util.hpp"
#include "json.hpp"
#include "lfe/error.hpp"
#include "lfe/weaksup.hpp"

namespace lfe::weaksup {

std::string_view bucket_name(Bucket b) {
  switch (b) {
    case Bucket::kTrain:
      return "train";
    case Bucket::kDev:
      return "dev";
    case Bucket::kTest:
      return "test";
  }
  return "?";
}

Bucket parse_bucket(std::string_view name) {
  if (name == "train") return Bucket::kTrain;
  if (name == "dev") return Bucket::kDev;
  if (name == "test") return Bucket::kTest;
  throw UserError("unknown bucket '" + std::string(name) + "' (expected train, dev or test)");
}

std::optional<Bucket> SplitManifest::bucket_of(std::string_view doc_id) const {
  const auto it = assignment.find(doc_id);
  if (it == assignment.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> SplitManifest::ids_in(Bucket b) const {
  std::vector<std::string> out;
  for (const auto& [id, bucket] : assignment) {
    if (bucket == b) out.push_back(id);
  }
  return out;
}

uint64_t split_key(uint64_t seed, std::string_view doc_id) {
  char seed_bytes[8];
  for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<char>((seed >> (8 * i)) & 0xff);
  uint64_t h = util::fnv1a64(std::string_view(seed_bytes, 8));
  h = util::fnv1a64(doc_id, h);
  return util::mix64(h);
}

SplitManifest split_corpus(std::vector<std::string> doc_ids,
                           const std::array<double, 3>& ratios, uint64_t seed) {
  double sum = 0;
  for (double r : ratios) {
    if (!(r >= 0)) throw UserError("split ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw UserError("split ratios must sum to 1");

  std::vector<std::pair<uint64_t, std::string>> keyed;
  keyed.reserve(doc_ids.size());
  for (auto& id : doc_ids) {
    const uint64_t k = split_key(seed, id);
    keyed.emplace_back(k, std::move(id));
  }
  std::sort(keyed.begin(), keyed.end());
  for (size_t i = 1; i < keyed.size(); ++i) {
    if (keyed[i].second == keyed[i - 1].second) {
      throw UserError("duplicate document id '" + keyed[i].second + "' in split input");
    }
  }

  const auto n = static_cast<double>(keyed.size());
  const auto n_train = static_cast<size_t>(std::floor(ratios[0] * n));
  const auto n_dev = static_cast<size_t>(std::floor(ratios[1] * n));
  SplitManifest m;
  m.seed = seed;
  m.ratios = ratios;
  for (size_t i = 0; i < keyed.size(); ++i) {
    const Bucket b = i < n_train ? Bucket::kTrain
                     : i < n_train + n_dev ? Bucket::kDev
                                           : Bucket::kTest;
    m.assignment.emplace(std::move(keyed[i].second), b);
  }
  return m;
}

std::string manifest_to_json(const SplitManifest& m) {
  nlohmann::ordered_json j;
  j["seed"] = m.seed;
  j["ratios"] = m.ratios;
  nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
  for (const auto& [id, b] : m.assignment) assignment[id] = bucket_name(b);
  j["assignment"] = std::move(assignment);
  return j.dump(2) + "\n";
}

SplitManifest manifest_from_json(std::string_view json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    SplitManifest m;
    m.seed = j.at("seed").get<uint64_t>();
    const auto& r = j.at("ratios");
    if (!r.is_array() || r.size() != 3) throw UserError("split manifest needs three ratios");
    for (size_t i = 0; i < 3; ++i) m.ratios[i] = r[i].get<double>();
    for (const auto& [id, b] : j.at("assignment").items()) {
      m.assignment.emplace(id, parse_bucket(b.get<std::string>()));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("malformed split manifest: ") + e.what());
  }
}

}  // namespace lfe::weaksup
