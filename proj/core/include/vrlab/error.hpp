#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vrlab {

// Base for every error raised by the library. Callers that only need to
// distinguish "bad input" from "bug" can catch this and InvariantError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range input data (OBJ text, index buffers).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Parameter combination that cannot produce a valid result.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Violated internal consistency check. Indicates a bug, not bad input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace vrlab
