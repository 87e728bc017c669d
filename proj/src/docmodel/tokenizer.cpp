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

#include "common/text_util.hpp"
#include "lfe/docmodel.hpp"

namespace lfe {

std::vector<CharRange> tokenize(std::string_view raw) {
  std::vector<CharRange> out;
  const auto n = static_cast<uint32_t>(raw.size());
  uint32_t i = 0;
  while (i < n) {
    const auto c = static_cast<unsigned char>(raw[i]);
    if (util::is_space(c)) {
      ++i;
    } else if (util::is_word_byte(c)) {
      uint32_t j = i + 1;
      while (j < n && util::is_word_byte(static_cast<unsigned char>(raw[j]))) ++j;
      out.push_back({i, j});
      i = j;
    } else {
      out.push_back({i, i + 1});
      ++i;
    }
  }
  return out;
}

// digits -> d, uppercase -> X, lowercase -> x, others verbatim; runs of the
// same class collapse to one symbol.
std::string token_shape(std::string_view surface) {
  std::string out;
  for (unsigned char c : surface) {
    char cls;
    if (util::is_digit(c)) {
      cls = 'd';
    } else if (util::is_upper(c)) {
      cls = 'X';
    } else if (util::is_lower(c) || c >= 0x80) {
      cls = 'x';
    } else {
      cls = static_cast<char>(c);
    }
    if (out.empty() || out.back() != cls) out.push_back(cls);
  }
  return out;
}

}  // namespace lfe
