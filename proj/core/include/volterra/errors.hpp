#pragma once

#include <stdexcept>
#include <string>

namespace volterra {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point or parameter lies outside the domain where an operation is defined
/// (for example a point on or outside the unit sphere).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter combination violates a documented precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An integrand or summand produced NaN or infinity at a sample node.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// A sampling grid is too coarse to resolve the requested set.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// An adaptive procedure stopped before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A computation would exceed a configured size budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace volterra
