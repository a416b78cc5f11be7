#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctxspell {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by caller-supplied data (empty corpus, bad phrase, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A text file could not be parsed. `line()` is 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Inconsistent or out-of-range configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxspell
