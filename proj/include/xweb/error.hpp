#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xweb {

/// Root of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range or inconsistent caller-supplied parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A structure (model, taxonomy, query) violates one of its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries the 1-based position when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : what + " at line " + std::to_string(line) + ", column " +
                              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Failure reported by, or while talking to, a benchmark backend.
class DriverError : public Error {
 public:
  using Error::Error;
};

/// A query exceeded its deadline.
class TimeoutError : public Error {
 public:
  using Error::Error;
};

}  // namespace xweb
