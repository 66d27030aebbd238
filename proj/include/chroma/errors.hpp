#pragma once

#include <stdexcept>
#include <string>

namespace chroma {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input lies outside the domain where an operation is defined.
/// The CLI maps this family to exit code 1.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computation disagreed with itself (two routes to the same quantity
/// differ, or a bracketed root could not be found). CLI exit code 2.
class InternalError : public Error {
 public:
  using Error::Error;
};

// v is at (or numerically indistinguishable from) the vacuum singularity.
class DegenerateState : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotOnCurve : public DomainError {
 public:
  using DomainError::DomainError;
};

class EqualV : public DomainError {
 public:
  using DomainError::DomainError;
};

class BlowUp : public DomainError {
 public:
  using DomainError::DomainError;
};

class InsufficientTail : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonConvergent : public DomainError {
 public:
  using DomainError::DomainError;
};

class SingularDenominator : public DomainError {
 public:
  using DomainError::DomainError;
};

class CFLCollapse : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoFront : public DomainError {
 public:
  using DomainError::DomainError;
};

class WindowEscape : public DomainError {
 public:
  using DomainError::DomainError;
};

class QuadratureFailure : public InternalError {
 public:
  using InternalError::InternalError;
};

class NoIntermediate : public InternalError {
 public:
  using InternalError::InternalError;
};

class InconsistentFormula : public InternalError {
 public:
  using InternalError::InternalError;
};

}  // namespace chroma
