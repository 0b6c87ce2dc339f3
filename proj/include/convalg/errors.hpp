#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace convalg {

/// Malformed textual input. Line and column are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// A documented precondition of an operation does not hold
/// (object mismatch, ring without the required inverse, depth too small, ...).
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Input data violates a structural invariant (groupoid axioms, module relations, sheaf condition).
class InvariantError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace convalg
