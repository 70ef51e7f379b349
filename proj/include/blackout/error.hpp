#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blackout {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed surface syntax. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A recognised PDDL construct outside the STRIPS + typing subset.
class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& construct)
      : Error("unsupported construct: " + construct), construct_(construct) {}

  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

/// Well-formed input that violates a semantic rule (undeclared names, arity, typing).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Consecutive states of a trajectory disagree.
class ChainError : public ValidationError {
 public:
  ChainError(const std::string& message, std::size_t index)
      : ValidationError("transition " + std::to_string(index) + ": " + message), index_(index) {}

  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

}  // namespace blackout
