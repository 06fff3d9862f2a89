// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mimojscc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine failed to converge or produced non-finite output.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument is outside its domain (negative variance, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Configuration is inconsistent (divisibility, conflicting flags, unknown keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Matrix too close to singular for an explicit inverse.
class IllConditionedError : public NumericError {
 public:
  IllConditionedError(const std::string& what, double condition)
      : NumericError(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace mimojscc
