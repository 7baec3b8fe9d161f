#pragma once

#include <stdexcept>
#include <string>

namespace lipread {

// Input violates a documented invariant (bad landmark count, unknown symbol,
// out-of-range index, ...). Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. Carries the 1-based line number when known.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : ValidationError(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Filesystem failures: missing files, unreadable or mismatched patches.
// Maps to CLI exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lipread
