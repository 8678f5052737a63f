#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "picomm/common.hpp"

namespace picomm {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };
enum class ObjectiveSense { kMinimize, kMaximize };
enum class RowSense { kLessEqual, kGreaterEqual };

const char* to_string(SolveStatus status);

struct SolverSettings {
  double feasibility_tolerance = 1e-8;
  double gap_tolerance = 1e-8;
  /// Ratio test used to accept an infeasibility / unboundedness certificate.
  double certificate_tolerance = 1e-8;
  int max_iterations = 150;
  bool verbose = false;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kNumericalFailure;
  /// Objective value in the program's own sense (including constants).
  double value = 0.0;
  /// LP: original variables. SDP: scalar variables.
  Eigen::VectorXd primal;
  /// SDP primal blocks.
  std::vector<Eigen::MatrixXd> blocks;
  /// Sensitivity d(value)/d(rhs) per constraint row (LP: equalities first,
  /// then inequalities; SDP: equality constraints).
  Eigen::VectorXd dual;
  /// Primal infeasibility certificate when status == kInfeasible: a vector y
  /// over the standard-form rows with A^T y <= 0 and b^T y > 0.
  Eigen::VectorXd dual_ray;
  SolverSettings settings;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double relative_gap = 0.0;
  std::string message;
};

struct VariableBound {
  std::optional<double> lower = 0.0;
  std::optional<double> upper;
};

/// min / max c^T x subject to equality rows, one-sided inequality rows and
/// per-variable bounds (default x >= 0).
struct LinearProgram {
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_matrix;
  Eigen::VectorXd ineq_rhs;
  std::vector<RowSense> ineq_sense;
  /// Empty means every variable is nonnegative.
  std::vector<VariableBound> bounds;

  Eigen::Index variable_count() const { return objective.size(); }
  /// Throws ConstraintViolation on inconsistent dimensions.
  void validate() const;
};

SolveReport solve_lp(const LinearProgram& lp, const SolverSettings& settings = {});

/// coeff * X_block(row, col). X is symmetric, so (r, c) and (c, r) name the
/// same variable.
struct EntryTerm {
  int block = 0;
  int row = 0;
  int col = 0;
  double coeff = 0.0;
};

/// Linear function of the matrix blocks and the nonnegative scalar variables.
struct LinearForm {
  std::vector<EntryTerm> entries;
  std::vector<std::pair<int, double>> scalars;

  void add(int block, int row, int col, double coeff) { entries.push_back({block, row, col, coeff}); }
  void add_scalar(int index, double coeff) { scalars.emplace_back(index, coeff); }
  bool empty() const noexcept { return entries.empty() && scalars.empty(); }
};

/// Real symmetric matrix blocks X_b >= 0 and scalars s >= 0, a linear
/// objective, and affine equality constraints.
struct SemidefiniteProgram {
  ObjectiveSense sense = ObjectiveSense::kMaximize;
  std::vector<int> block_sizes;
  int scalar_count = 0;
  LinearForm objective;
  double objective_constant = 0.0;
  std::vector<LinearForm> constraints;
  std::vector<double> rhs;
  /// Optional names for debug dumps; may be empty.
  std::vector<std::string> constraint_labels;

  int add_block(int size) {
    block_sizes.push_back(size);
    return static_cast<int>(block_sizes.size()) - 1;
  }
  int add_constraint(LinearForm form, double value, std::string label = {}) {
    constraints.push_back(std::move(form));
    rhs.push_back(value);
    if (!label.empty() || !constraint_labels.empty()) {
      constraint_labels.resize(constraints.size() - 1);
      constraint_labels.push_back(std::move(label));
    }
    return static_cast<int>(constraints.size()) - 1;
  }
  /// Throws ConstraintViolation if a term references an undeclared block,
  /// entry or scalar.
  void validate() const;
};

SolveReport solve_sdp(const SemidefiniteProgram& sdp, const SolverSettings& settings = {});

/// [[Re H, -Im H], [Im H, Re H]]. Rejects non-Hermitian input.
Eigen::MatrixXd hermitian_embed(const CMatrix& h, double tolerance = tol::kHermitian);

/// Hermitian matrix represented by a real symmetric 2d x 2d block, averaging
/// the two copies: ((Y11 + Y22) + i (Y21 - Y12)) / 2.
CMatrix hermitian_extract(const Eigen::MatrixXd& y);

/// Adds scale * Re tr(C H) to `form`, where H is the Hermitian matrix held in
/// the embedded real block `block` (so the term is scale * tr(embed(C) Y) / 2).
void add_hermitian_functional(LinearForm& form, int block, const CMatrix& c, double scale = 1.0);

/// Hermitian matrix with a single 1 (diagonal) or the pair selecting Re / Im
/// of entry (p, q): Re tr(C H) then equals H_pp, Re H_pq or Im H_pq.
CMatrix entry_selector(int d, int p, int q, bool imaginary);

/// Adds the d^2 real equality constraints sum_t coeff_t H_{block_t} = rhs over
/// embedded Hermitian blocks (diagonal, then Re and Im of each upper entry).
void add_hermitian_equality(SemidefiniteProgram& sdp, const std::vector<std::pair<int, double>>& terms, const CMatrix& rhs,
                            const std::string& label = {});

/// Debug dumps for solver-independent replay.
nlohmann::json to_json(const LinearProgram& lp);
nlohmann::json to_json(const SemidefiniteProgram& sdp);
LinearProgram linear_program_from_json(const nlohmann::json& j);
SemidefiniteProgram semidefinite_program_from_json(const nlohmann::json& j);

}  // namespace picomm
