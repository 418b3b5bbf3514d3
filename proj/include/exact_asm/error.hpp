#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exact_asm {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A symbol, arity, or structural invariant is violated by the input
// (unknown symbol, malformed state, malformed behavioral spec).
class SpecificationError : public Error {
 public:
  using Error::Error;
};

// Program or term text does not conform to the grammar.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A file does not match the documented JSON layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition (inconsistent update set,
// update of a static symbol, flatten of a case statement).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// The exploration-tree construction cannot proceed on the given spec.
class SynthesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace exact_asm
