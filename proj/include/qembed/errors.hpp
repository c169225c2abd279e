#pragma once

#include <stdexcept>
#include <string>

namespace qembed {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Data violates a structural invariant (symmetry, partition, sizes).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Problem exceeds a configured size limit.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace qembed
