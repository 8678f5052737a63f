#include "picomm/frames.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace picomm {

void UnitFrame::validate(double tolerance) const {
  if (dimension < 1) throw ConstraintViolation("frame dimension must be positive");
  for (const CVector& v : vectors) {
    if (v.size() != dimension) throw ConstraintViolation("frame vector has the wrong length");
    if (std::abs(v.norm() - 1.0) > tolerance) throw ConstraintViolation("frame vector is not a unit vector");
    if (real && v.imag().cwiseAbs().maxCoeff() > tolerance) throw ConstraintViolation("real frame has a complex entry");
  }
}

double max_frame_correlation(const UnitFrame& frame) {
  frame.validate();
  if (frame.vectors.size() < 2) throw ConstraintViolation("frame correlation needs at least two vectors");
  double best = 0.0;
  for (std::size_t j = 0; j < frame.vectors.size(); ++j)
    for (std::size_t k = j + 1; k < frame.vectors.size(); ++k)
      best = std::max(best, std::abs(frame.vectors[j].dot(frame.vectors[k])));
  return best;
}

double welch_bound(int n, int d) {
  if (d < 1 || n < d) throw ConstraintViolation("Welch bound needs n >= d >= 1");
  if (n == 1) return 0.0;
  return std::sqrt(static_cast<double>(n - d) / (static_cast<double>(d) * (n - 1)));
}

int welch_attainability_limit(int d, bool real) {
  if (d < 1) throw ConstraintViolation("dimension must be positive");
  return real ? d * (d + 1) / 2 : d * d;
}

double ambiguous_psuc(double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw ConstraintViolation("overlap must lie in [0, 1]");
  return 0.5 * (1.0 + std::sqrt(1.0 - overlap * overlap));
}

double t41_analytic_bound(int d) {
  if (d < 2 || d > 4) throw ConstraintViolation("closed-form T_{4,1} bound is defined for 2 <= d <= 4");
  const double overlap_sq = static_cast<double>(4 - d) / (3.0 * d);
  return std::min(12.0, 12.0 * ambiguous_psuc(std::sqrt(overlap_sq)));
}

bool verify_equiangular(const UnitFrame& frame, double tolerance) {
  if (frame.vectors.size() < 2) throw ConstraintViolation("equiangularity needs at least two vectors");
  double lo = 1e300, hi = -1e300;
  for (std::size_t j = 0; j < frame.vectors.size(); ++j)
    for (std::size_t k = j + 1; k < frame.vectors.size(); ++k) {
      const double o = std::abs(frame.vectors[j].dot(frame.vectors[k]));
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
  return hi - lo <= tolerance;
}

UnitFrame frame_from_states(const std::map<IndexSet, CMatrix>& states, std::vector<std::string>* warnings) {
  UnitFrame f;
  if (states.empty()) throw ConstraintViolation("no states to convert");
  f.dimension = static_cast<int>(states.begin()->second.rows());
  for (const auto& [label, rho] : states) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es((rho + rho.adjoint()) / 2.0);
    const Eigen::Index top = es.eigenvalues().size() - 1;
    if (warnings && es.eigenvalues()(top) < 1.0 - 1e-4)
      warnings->push_back("state " + to_string(label) + " is mixed (top eigenvalue " + std::to_string(es.eigenvalues()(top)) + ")");
    f.vectors.push_back(es.eigenvectors().col(top).normalized());
  }
  return f;
}

}  // namespace picomm
