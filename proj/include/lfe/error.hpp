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

#pragma once

#include <stdexcept>
#include <string>

namespace lfe {

// Error categories map one-to-one onto process exit codes and C API status
// values: user errors are fixable by editing inputs, environment errors come
// from the filesystem or network, defects are bugs in this library.
enum class ErrorKind { kUser = 2, kEnvironment = 3, kDefect = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class UserError : public Error {
 public:
  explicit UserError(const std::string& what) : Error(ErrorKind::kUser, what) {}
};

class EnvironmentError : public Error {
 public:
  explicit EnvironmentError(const std::string& what)
      : Error(ErrorKind::kEnvironment, what) {}
};

// A validated input that still fails downstream. Always a bug.
class DefectError : public Error {
 public:
  explicit DefectError(const std::string& what)
      : Error(ErrorKind::kDefect, what) {}
};

// Structured rejection of a pre-tokenized payload. `token_index` is -1 when
// the problem is not attached to a single token.
class ValidationError : public UserError {
 public:
  ValidationError(const std::string& what, long token_index)
      : UserError(what), token_index_(token_index) {}

  long token_index() const { return token_index_; }

 private:
  long token_index_;
};

}  // namespace lfe
