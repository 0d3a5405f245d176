#pragma once

#include <stdexcept>
#include <string>

namespace ontodex {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input. `position` is a 1-based line number when known, else 0.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t position = 0)
      : Error(position == 0 ? what : "line " + std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Well-formed input that violates a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain of an operation.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Persisted artifact written by an incompatible format version.
class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ontodex
