#pragma once

#include <stdexcept>
#include <string>

namespace dyncliq {

// Input text could not be parsed; `line` is 1-based.
struct ParseError : std::runtime_error {
  size_t line;
  ParseError(size_t line_, const std::string& what_)
      : std::runtime_error("parse error at line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
};

// Caller passed an argument outside the documented domain.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A documented precondition was violated (bug in the caller, not bad user input).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// The request is valid but would exceed a configured resource guard.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dyncliq
