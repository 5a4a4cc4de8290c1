#pragma once

#include <stdexcept>
#include <string>

namespace cab {

/// Base class for every error raised by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation (axis out of range, degree
/// overflow, singular matrix, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A structure failed one of its defining identities (Jacobi, cocycle,
/// Schouten, ...). The message names the violating instance.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// An operator was applied where it is undefined (kernel of D, degenerate
/// two-form).
class KernelError : public Error {
 public:
  using Error::Error;
};

/// Input text or file could not be understood.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A float trajectory left the finite range; `step` is the first bad step.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace cab
