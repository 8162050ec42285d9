#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cohprop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax error in a Hamiltonian expression. position is a 0-based column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ScaleMismatchError : public Error {
 public:
  using Error::Error;
};

class DegreeError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

// Fock truncation failed to converge within the allowed basis size.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// Adaptive integration could not proceed (step-size underflow, escape to
// complex infinity, step budget exhausted).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

// delta_v(T) (or a discrete recursion denominator) vanished.
class CausticError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace cohprop
