#pragma once

#include <map>
#include <string>
#include <vector>

#include "picomm/task.hpp"

namespace picomm {

/// n unit vectors in C^d (or R^d when `real` is set).
struct UnitFrame {
  int dimension = 1;
  std::vector<CVector> vectors;
  bool real = false;

  /// Throws ConstraintViolation if a vector has the wrong length or its norm
  /// differs from 1 by more than `tolerance`.
  void validate(double tolerance = tol::kUnitNorm) const;
};

/// max_{j != k} |<f_j, f_k>|. Needs at least two vectors.
double max_frame_correlation(const UnitFrame& frame);

/// sqrt((n - d) / (d (n - 1))). Requires n >= d >= 1.
double welch_bound(int n, int d);

/// Largest n for which the bound can be met by an equiangular tight frame:
/// d^2 (complex) or d (d + 1) / 2 (real).
int welch_attainability_limit(int d, bool real);

/// Optimal probability of telling two equiprobable pure states apart given
/// |<phi_1, phi_2>| = overlap in [0, 1].
double ambiguous_psuc(double overlap);

/// Tight value of the canonical T_{4,1} metric in dimension d (2 <= d <= 4):
/// 12 * ambiguous_psuc(sqrt((4 - d) / (3 d))).
double t41_analytic_bound(int d);

/// All pairwise overlap magnitudes agree within `tolerance`.
bool verify_equiangular(const UnitFrame& frame, double tolerance);

/// Dominant eigenvector of each state (map order). States whose top eigenvalue
/// is below 1 - 1e-4 are named in `warnings` when given.
UnitFrame frame_from_states(const std::map<IndexSet, CMatrix>& states, std::vector<std::string>* warnings = nullptr);

}  // namespace picomm
