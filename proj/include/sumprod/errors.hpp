#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sumprod {

// Violated mathematical precondition (zero denominator, degenerate dilation,
// zero element under a multiplicative statistic, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input too large for an exhaustive or quadratic routine.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sumprod
