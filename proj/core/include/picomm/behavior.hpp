#pragma once

#include <compare>
#include <map>
#include <utility>
#include <vector>

#include "picomm/task.hpp"

namespace picomm {

/// (preparation, measurement, outcome) triple; the outcome is a position in
/// {0..n-1} outside the measurement label.
struct EventKey {
  IndexSet preparation;
  IndexSet measurement;
  int outcome = 0;

  friend auto operator<=>(const EventKey&, const EventKey&) = default;
};

/// An effect M_b(k) named by its measurement label and outcome.
struct EffectKey {
  IndexSet measurement;
  int outcome = 0;

  friend auto operator<=>(const EffectKey&, const EffectKey&) = default;
};

/// Table of outcome probabilities p(k | preparation, measurement).
class Behavior {
 public:
  Behavior() = default;
  explicit Behavior(std::map<EventKey, double> probabilities) : p_(std::move(probabilities)) {}

  const std::map<EventKey, double>& probabilities() const noexcept { return p_; }
  void set(const EventKey& key, double value) { p_[key] = value; }
  /// Throws LookupError if the event is absent.
  double at(const EventKey& key) const;
  bool contains(const EventKey& key) const { return p_.count(key) != 0; }
  bool empty() const noexcept { return p_.empty(); }

  /// Throws ConstraintViolation if some (preparation, measurement) pair has
  /// probabilities outside [0,1] or not summing to one within `tolerance`.
  void validate(double tolerance = tol::kBehaviorNormalization) const;

  friend bool operator==(const Behavior&, const Behavior&) = default;

 private:
  std::map<EventKey, double> p_;
};

/// Every (preparation, measurement) pair of the task with uniform outcomes.
Behavior uniform_behavior(const TaskLayout& layout);

/// Linear objective sum_w w * p(k|i,j) + constant_offset over a behaviour.
struct SuccessMetric {
  std::map<EventKey, double> weights;
  double constant_offset = 0.0;

  friend bool operator==(const SuccessMetric&, const SuccessMetric&) = default;
};

/// Weight 1 on (a, b, s) for every scenario row; maximum equals the row count.
SuccessMetric canonical_metric(const TaskSpec& task);

/// The T_{4,1} objective written on first effects with coefficients +-1: for
/// every measurement with outcomes j < k the term on preparation {k} is +1 and
/// the term on preparation {j} is -1. Equals canonical value minus 6.
SuccessMetric signed_metric_t41();

/// Throws LookupError if the metric references a label outside the task.
void validate_metric(const SuccessMetric& metric, const TaskLayout& layout);

/// sum of weight * probability plus the constant offset. Missing events throw
/// LookupError.
double evaluate_metric(const SuccessMetric& metric, const Behavior& behavior);

/// Minimum over scenario rows (s, a, b) of p(s | a, b).
double worst_case_success(const TaskSpec& task, const Behavior& behavior);

/// Rewrites a metric on a binary-outcome (or general) task so that no term sits
/// on the last outcome of its measurement, using p(last) = 1 - sum(others).
/// The value on every normalized behaviour is unchanged.
SuccessMetric eliminate_last_outcomes(const SuccessMetric& metric, const TaskLayout& layout);

/// Convex combinations sum_a w_a X_a = sum_b w_b X_b over preparations
/// (Key = IndexSet) or effects (Key = EffectKey).
template <class Key>
struct Equivalence {
  std::map<Key, double> side_a;
  std::map<Key, double> side_b;

  friend bool operator==(const Equivalence&, const Equivalence&) = default;
};

using PreparationEquivalence = Equivalence<IndexSet>;
using EffectEquivalence = Equivalence<EffectKey>;

enum class EquivalenceKind { kPreparation, kEffect };

/// Weights nonnegative and summing to one on each side; labels must exist.
void validate_equivalence(const PreparationEquivalence& eq, const TaskLayout& layout,
                          double tolerance = tol::kEquivalenceWeights);
void validate_equivalence(const EffectEquivalence& eq, const TaskLayout& layout,
                          double tolerance = tol::kEquivalenceWeights);

/// Signed coefficient per label: side_a weights minus side_b weights.
std::map<IndexSet, double> signed_coefficients(const PreparationEquivalence& eq);
std::map<EffectKey, double> signed_coefficients(const EffectEquivalence& eq);

/// rho_1 + rho_2 ~ rho_3 + rho_4 on T_{4,1} (weights 1/2).
PreparationEquivalence t41_preparation_equivalence();

/// rho_01 + rho_02 ~ rho_03 + rho_12 ~ rho_13 + rho_23 on T_{4,2}, as two
/// pairwise equivalences with weights 1/2.
std::vector<PreparationEquivalence> t42_preparation_equivalences();

}  // namespace picomm
