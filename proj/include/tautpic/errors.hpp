#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tautpic {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// (g, n) outside the admissible range, excluded boundary symbols, etc.
class DomainError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class ParameterError : public Error {
public:
  using Error::Error;
};

// A class or character was used with a presentation it does not belong to.
class MismatchError : public Error {
public:
  using Error::Error;
};

// A computed result contradicts a structural fact the library relies on
// (e.g. a stable presentation with torsion).
class IntegrityError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  enum class Kind { syntax, unknown_symbol, genus_out_of_range, marking_out_of_range, excluded_pair };

  ParseError(Kind kind, std::size_t position, const std::string &what)
      : Error("at position " + std::to_string(position) + ": " + what), kind_(kind),
        position_(position) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

private:
  Kind kind_;
  std::size_t position_;
};

} // namespace tautpic
