// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ivoro {

/// Broad failure classes; the CLI maps each one to its own exit code.
enum class ErrorCategory { config, data, runtime };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

/// Malformed or inconsistent input data: dimension mismatches, empty sets,
/// label collisions, out-of-range values.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

/// A binary container failed validation at a known byte offset.
class FormatError : public DataError {
 public:
  FormatError(std::uint64_t offset, const std::string& what)
      : DataError(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

/// Numerical breakdown during a computation, e.g. a non-finite training loss.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorCategory::runtime, what) {}
};

}  // namespace ivoro
