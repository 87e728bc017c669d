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

#include "project/toml_lite.hpp"

#include <cctype>
#include <charconv>

#include "lfe/error.hpp"

namespace lfe::toml {

namespace {

bool is_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '-';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {}

  Table run() {
    Table out;
    std::string table;
    for (;;) {
      skip_blank_lines();
      if (at_end()) return out;
      if (peek() == '[') {
        ++pos_;
        skip_ws();
        table = key();
        skip_ws();
        expect(']');
        end_of_line();
        continue;
      }
      const int line = line_;
      std::string k = key();
      skip_ws();
      expect('=');
      skip_ws();
      Value v = value();
      v.line = line;
      end_of_line();
      std::string full = table.empty() ? k : table + "." + k;
      if (out.contains(full)) fail(line, "duplicate key '" + full + "'");
      out.emplace(std::move(full), std::move(v));
    }
  }

 private:
  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw UserError("line " + std::to_string(line) + ": " + msg);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(line_, msg); }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }
  // Whitespace, comments and newlines, for array bodies and between entries.
  void skip_blank_lines() {
    for (;;) {
      skip_ws();
      skip_comment();
      if (peek() == '\r') ++pos_;
      if (peek() != '\n') return;
      ++pos_;
      ++line_;
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (at_end()) return;
    if (peek() != '\n') fail(std::string("unexpected '") + peek() + "'");
    ++pos_;
    ++line_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string key() {
    const size_t b = pos_;
    while (!at_end() && is_key_char(peek())) ++pos_;
    if (pos_ == b) fail("expected a key");
    return std::string(s_.substr(b, pos_ - b));
  }

  Value value() {
    const char c = peek();
    if (c == '"') return {string()};
    if (c == '[') return {array()};
    if (s_.substr(pos_).starts_with("true")) {
      pos_ += 4;
      return {true};
    }
    if (s_.substr(pos_).starts_with("false")) {
      pos_ += 5;
      return {false};
    }
    return number();
  }

  std::string string() {
    ++pos_;
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (at_end()) fail("unterminated string");
      const char e = s_[pos_++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        default: fail(std::string("unsupported escape '\\") + e + "'");
      }
    }
  }

  Array array() {
    ++pos_;
    Array out;
    for (;;) {
      skip_blank_lines();
      if (peek() == ']') {
        ++pos_;
        return out;
      }
      const int line = line_;
      Value v = value();
      v.line = line;
      out.push_back(std::move(v));
      skip_blank_lines();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      skip_blank_lines();
      expect(']');
      return out;
    }
  }

  Value number() {
    const size_t b = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' ||
                         peek() == '-' || peek() == '+' || peek() == '_')) {
      ++pos_;
    }
    std::string tok(s_.substr(b, pos_ - b));
    std::erase(tok, '_');
    if (tok.empty()) fail("expected a value");
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (*first == '+') ++first;
    if (tok.find_first_of(".eE") == std::string::npos) {
      int64_t i = 0;
      const auto [p, ec] = std::from_chars(first, last, i);
      if (ec == std::errc() && p == last) return {i};
    } else {
      double d = 0;
      const auto [p, ec] = std::from_chars(first, last, d);
      if (ec == std::errc() && p == last) return {d};
    }
    fail("bad value '" + tok + "'");
  }

  std::string_view s_;
  size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

Table parse(std::string_view text) { return Reader(text).run(); }

}  // namespace lfe::toml
