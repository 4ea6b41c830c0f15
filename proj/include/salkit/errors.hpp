// Copyright 2026 The salkit Authors.
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

namespace salkit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke a precondition (shapes, ranges, centering).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Input data is unusable (non-finite entries, too few samples).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A decomposition or optimizer failed to produce a usable result.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A metric has no defined value for the given inputs.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. The message always names the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Eraser file could not be loaded (bad magic, version, truncation, invariant).
class LoadError : public Error {
 public:
  using Error::Error;
};

}  // namespace salkit
