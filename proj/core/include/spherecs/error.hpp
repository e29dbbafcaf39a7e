#pragma once

#include <stdexcept>
#include <string>

namespace spherecs {

/// Argument outside the mathematical domain of a function (|x| > 1, |k| > l, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Inconsistent sizes or otherwise malformed inputs.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A normalized quantity was requested for a vector with zero norm.
class ZeroNormError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace spherecs
