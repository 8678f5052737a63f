#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace picomm {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Default tolerances. Every operation that uses one takes it as a defaulted
// argument so callers can override per call.
namespace tol {
inline constexpr double kBehaviorNormalization = 1e-9;
inline constexpr double kStateEigenvalue = 1e-8;
inline constexpr double kPovmEntry = 1e-8;
inline constexpr double kHermitian = 1e-8;
inline constexpr double kEquivalenceWeights = 1e-12;
inline constexpr double kImaginaryPart = 1e-10;
inline constexpr double kUnitNorm = 1e-10;
inline constexpr double kCommRowSum = 1e-9;
inline constexpr double kCommEntry = 1e-10;
}  // namespace tol

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a documented domain constraint (e.g. an invalid task).
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

/// A label referenced by a metric, behaviour or equivalence does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A quantum model fails its positivity / normalization invariants.
class ModelValidationError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive search or enumeration would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, double attempted)
      : Error(what), attempted_(attempted) {}
  double attempted() const noexcept { return attempted_; }

 private:
  double attempted_;
};

/// The conic backend did not reach a usable answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Declared operational equivalences cannot be satisfied.
class InfeasibleConstraints : public Error {
 public:
  using Error::Error;
};

/// A metric does not have the structure an analytic bound requires.
class ShapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace picomm
