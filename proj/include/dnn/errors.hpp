// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dnn {

/// Malformed or inconsistent input (dimensions, non-finite entries, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix that must lie (approximately) in a cone does not.
class ConeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Text input that does not follow the expected file format.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Every problem was excluded from a performance profile.
class EmptyProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dnn
