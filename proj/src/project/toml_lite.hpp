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

// Reader for the TOML subset used by project files: [table] headers, bare
// keys, basic strings, integers, floats, booleans and arrays of those.
// Inline tables, dotted keys, literal and multi-line strings and dates are
// rejected.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lfe::toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::string, int64_t, double, bool, Array> v;
  int line = 0;
};

// Keys are "table.key"; top-level keys have no prefix.
using Table = std::map<std::string, Value, std::less<>>;

// Throws UserError with "line N: ..." on malformed input or duplicate keys.
Table parse(std::string_view text);

}  // namespace lfe::toml
