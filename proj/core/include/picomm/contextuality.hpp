#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "picomm/behavior.hpp"
#include "picomm/conic.hpp"

namespace picomm {

/// Extremal response functions: each vertex assigns a probability to every
/// (measurement, outcome) column.
struct VertexSet {
  TaskSpec task{3, 1};
  /// Columns in layout order: measurements ascending, outcomes ascending.
  std::vector<EffectKey> columns;
  std::vector<Eigen::VectorXd> vertices;
  /// Exact values as "p/q" strings, parallel to `vertices`.
  std::vector<std::vector<std::string>> exact;

  std::size_t size() const noexcept { return vertices.size(); }
  std::size_t column(const EffectKey& key) const;
};

struct VertexEnumerationOptions {
  std::size_t max_vertices = 1000000;
  /// Use double description even without effect equivalences.
  bool force_double_description = false;
};

/// Without effect equivalences: every deterministic assignment (product over
/// measurements, last measurement varying fastest). Otherwise: exact double
/// description over rationals of {x >= 0, per-measurement sums 1,
/// equivalences}, vertices sorted lexicographically.
VertexSet enumerate_vertices(const TaskSpec& task, const std::vector<EffectEquivalence>& effect_equivalences,
                             const VertexEnumerationOptions& options = {});

/// Epistemic weights nu(i, kappa): preparations x vertices.
struct NCModel {
  std::vector<IndexSet> preparations;
  Eigen::MatrixXd weights;
};

/// p(k | i, j) = sum_kappa xi_kappa(j, k) nu(i, kappa).
Behavior nc_behavior(const VertexSet& vertices, const NCModel& model);

/// Throws ConstraintViolation if weights are negative, rows do not sum to one
/// or a preparation equivalence fails for some vertex (all at `tolerance`).
void validate_nc_model(const NCModel& model, const VertexSet& vertices, const std::vector<PreparationEquivalence>& prep_equivalences,
                       double tolerance = 1e-9);

/// Maximum of the metric over noncontextual behaviours.
double nc_max(const TaskSpec& task, const SuccessMetric& metric, const VertexSet& vertices,
              const std::vector<PreparationEquivalence>& prep_equivalences, const SolverSettings& settings = {});

/// A noncontextuality inequality sum coeff * p <= bound together with its
/// value on the tested behaviour.
struct FarkasCertificate {
  std::map<EventKey, double> coefficients;
  double bound = 1.0;
  double achieved = 0.0;

  double ratio() const { return achieved / bound; }
  /// "+0.250000 p(0|{1},{2,3}) - ... <= 1.000000", zero coefficients omitted.
  std::string inequality(int precision = 6, double zero_tolerance = 1e-9) const;
  double evaluate(const Behavior& behavior) const;
};

nlohmann::json to_json(const FarkasCertificate& certificate);
FarkasCertificate certificate_from_json(const nlohmann::json& j);

struct NCFeasibility {
  bool feasible = false;
  std::optional<NCModel> model;
  std::optional<FarkasCertificate> certificate;
  /// Optimal value of the normalized Farkas program (negative iff infeasible).
  double farkas_value = 0.0;
};

/// Decides whether `behavior` has a noncontextual model over `vertices`. The
/// Farkas program min b^T y s.t. M^T y >= 0 is normalized by requiring the
/// multipliers of the per-preparation normalization rows to sum to one; data
/// rows use every outcome except the last of each measurement.
NCFeasibility nc_feasibility(const Behavior& behavior, const VertexSet& vertices,
                             const std::vector<PreparationEquivalence>& prep_equivalences, const SolverSettings& settings = {},
                             double decision_tolerance = 1e-7);

/// Maximum of the metric over raw behaviours obeying normalization,
/// nonnegativity and the behaviour-level consequences of the preparation
/// equivalences.
double behavior_lp_bound(const TaskSpec& task, const SuccessMetric& metric,
                         const std::vector<PreparationEquivalence>& prep_equivalences, const SolverSettings& settings = {});

}  // namespace picomm
