#pragma once

#include <string>
#include <vector>

#include "picomm/behavior.hpp"

namespace picomm {

/// Outcome distributions of one measurement, one row per preparation.
struct CommunicationMatrix {
  IndexSet measurement;
  std::vector<IndexSet> preparations;
  std::vector<int> outcomes;
  Eigen::MatrixXd entries;

  /// Throws ConstraintViolation unless entries >= -tol::kCommEntry and every
  /// row sums to one within tol::kCommRowSum.
  void validate(double entry_tolerance = tol::kCommEntry, double row_tolerance = tol::kCommRowSum) const;
};

/// Entry (i, k) = p(k | preparation i, measurement). Rows follow the sorted
/// preparation labels that define `measurement`, columns its outcomes.
CommunicationMatrix comm_matrix(const Behavior& behavior, const IndexSet& measurement);

/// Sum over columns of the column maximum.
double lambda_max(const CommunicationMatrix& a);

enum class WitnessVerdict { kConsistent, kExcluded };
const char* to_string(WitnessVerdict verdict);

/// kExcluded when lambda_max(a) > d + tolerance: no d-dimensional quantum
/// implementation can produce `a`. kConsistent makes no existence claim.
WitnessVerdict dimension_witness(const CommunicationMatrix& a, int d, double tolerance = 1e-9);

/// Sum over measurements of min(d, number of metric columns). Requires unit
/// weights, at most one term per (preparation, measurement) pair and per
/// (measurement, outcome) column; otherwise throws ShapeError. The constant
/// offset is added.
double metric_bound_via_lambda(const TaskSpec& task, const SuccessMetric& metric, int d);

/// Text table, preparations down and outcomes across; entries the metric
/// rewards (if given) are wrapped in brackets.
std::string render(const CommunicationMatrix& a, const SuccessMetric* metric = nullptr, int precision = 4);

}  // namespace picomm
