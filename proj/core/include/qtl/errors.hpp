#pragma once

#include <stdexcept>
#include <string>

namespace qtl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible with the requested operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A complex matrix does not have quaternionic (complex adjoint) structure.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// A matrix claimed to be z-block circulant is not.
class NotZCirculantError : public Error {
 public:
  using Error::Error;
};

/// A matrix or tensor is numerically singular where an inverse was requested.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied argument violates a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Two independent computational routes disagree, or an internal invariant
/// (such as off-diagonal leakage after diagonalization) failed.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// A perturbation hypothesis does not hold for the given pair.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string which, const std::string& what)
      : Error(what), which_(std::move(which)) {}

  const std::string& which() const noexcept { return which_; }

 private:
  std::string which_;
};

/// The norm bounds cannot be evaluated because ||A^D * E||_s >= 1.
class BoundInapplicableError : public Error {
 public:
  using Error::Error;
};

/// Malformed tensor file. Carries 1-based line/column when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Tensor file parses but its arrays do not match the declared dims.
class ShapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace qtl
