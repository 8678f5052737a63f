#pragma once

#include <vector>

#include <Eigen/Dense>

#include "picomm/conic.hpp"

namespace picomm::detail {

/// Upper-triangle entry (row <= col) of a symmetric coefficient matrix; the
/// mirrored entry carries the same value.
struct SymEntry {
  int block;
  int row;
  int col;
  double value;
};

/// min <C, X> subject to <A_i, X> = b_i, X in (R_+^lp) x PSD blocks.
struct ConicData {
  int lp_dim = 0;
  std::vector<int> psd_sizes;
  Eigen::MatrixXd lp_matrix;                 // m x lp_dim
  std::vector<std::vector<SymEntry>> psd_rows;  // m rows of sparse symmetric terms
  Eigen::VectorXd b;
  Eigen::VectorXd c_lp;
  std::vector<Eigen::MatrixXd> c_psd;

  int rows() const { return static_cast<int>(b.size()); }
};

struct ConicResult {
  SolveStatus status = SolveStatus::kNumericalFailure;
  Eigen::VectorXd x_lp;
  std::vector<Eigen::MatrixXd> x_psd;
  Eigen::VectorXd y;
  /// Certificate for kInfeasible: A^T y <= 0 on the cone (dual slack in cone)
  /// and b^T y = 1.
  Eigen::VectorXd ray;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double relative_gap = 0.0;
  int iterations = 0;
  std::string message;
};

ConicResult solve_conic(const ConicData& data, const SolverSettings& settings);

}  // namespace picomm::detail
