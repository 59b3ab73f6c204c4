/*
 * Copyright 2026 The pimfw Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Core>

#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace pimfw {

// Dense index type shared with Eigen.
using Index = Eigen::Index;

// 128-bit accumulator for cycles, counts and femtojoules.
using Wide = unsigned __int128;
using Cycles = Wide;

std::string to_string(Wide v);

// ---------------------------------------------------------------------------
// Errors. Every failure surfaced by the library derives from Error so the CLI
// can map it to a stable exit code.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// 2M > C*G: the wavefront cannot stage every pivot row/column tile at once.
class ConstraintViolation : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class UnavailableError : public Error {
 public:
  using Error::Error;
};

// Functional execution refused because the matrix is too large.
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace pimfw
