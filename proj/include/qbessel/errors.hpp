#pragma once

#include <stdexcept>
#include <string>

namespace qbessel {

/// Base class for every precondition or evaluation failure raised by the
/// library. The CLI maps all of these to exit code 1.
class QError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A negative-index q-shifted factorial hit a vanishing factor.
class ZeroDivisor : public QError {
 public:
  using QError::QError;
};

/// Parameters outside the documented domain of an operation.
class DomainError : public QError {
 public:
  using QError::QError;
};

/// Finite product with |base| > 1 whose length exceeds the term budget, or a
/// non-finite intermediate.
class OverflowError : public QError {
 public:
  using QError::QError;
};

/// Series with no applicable stopping rule (1+s-r < 0, or 1+s-r = 0 with
/// |z| >= 1).
class DivergenceError : public QError {
 public:
  using QError::QError;
};

/// A denominator factor of a series vanishes before termination.
class PoleError : public QError {
 public:
  using QError::QError;
};

/// max_terms reached before the stopping rule was satisfied.
class BudgetExceeded : public QError {
 public:
  using QError::QError;
};

/// z^alpha requested off the principal branch domain.
class BranchError : public QError {
 public:
  using QError::QError;
};

/// Square root of a negative quantity requested.
class NegativeRadicand : public QError {
 public:
  using QError::QError;
};

}  // namespace qbessel
