#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wright_poisson {

/// Argument outside the mathematical domain of an operation (bad parameters,
/// gamma pole in an upper argument, probability outside [0, 1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series or iterative search hit its term/iteration cap before meeting its
/// stopping rule.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed count data. line() is 1-based; 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Data that cannot identify the requested model (e.g. all counts equal).
class DegenerateDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace wright_poisson
