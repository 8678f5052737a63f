#include "picomm/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace picomm {

namespace {

std::string describe(const EventKey& key) {
  return "(" + to_string(key.preparation) + ", " + to_string(key.measurement) + ", " + std::to_string(key.outcome) + ")";
}

void check_label(const TaskLayout& layout, const EventKey& key) {
  const std::size_t j = layout.measurement_index(key.measurement);
  layout.preparation_index(key.preparation);
  layout.outcome_index(j, key.outcome);
}

template <class Key>
void check_weights(const std::map<Key, double>& side, double tolerance, const char* name) {
  double total = 0.0;
  for (const auto& [label, w] : side) {
    if (w < -tolerance) throw ConstraintViolation(std::string("negative weight on ") + name + " of an equivalence");
    total += w;
  }
  if (std::abs(total - 1.0) > tolerance) {
    throw ConstraintViolation(std::string("weights on ") + name + " of an equivalence sum to " + std::to_string(total));
  }
}

template <class Key>
std::map<Key, double> signed_impl(const Equivalence<Key>& eq) {
  std::map<Key, double> out = eq.side_a;
  for (const auto& [label, w] : eq.side_b) out[label] -= w;
  return out;
}

}  // namespace

double Behavior::at(const EventKey& key) const {
  auto it = p_.find(key);
  if (it == p_.end()) throw LookupError("behavior has no entry for " + describe(key));
  return it->second;
}

void Behavior::validate(double tolerance) const {
  std::map<std::pair<IndexSet, IndexSet>, double> sums;
  for (const auto& [key, value] : p_) {
    if (!(value >= -tolerance && value <= 1.0 + tolerance)) {
      throw ConstraintViolation("probability " + std::to_string(value) + " outside [0,1] at " + describe(key));
    }
    sums[{key.preparation, key.measurement}] += value;
  }
  for (const auto& [pair, total] : sums) {
    if (std::abs(total - 1.0) > tolerance) {
      throw ConstraintViolation("outcome probabilities of (" + to_string(pair.first) + ", " + to_string(pair.second) +
                                ") sum to " + std::to_string(total));
    }
  }
}

Behavior uniform_behavior(const TaskLayout& layout) {
  Behavior out;
  for (const IndexSet& a : layout.preparations()) {
    for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
      const double p = 1.0 / static_cast<double>(layout.outcome_count(j));
      for (int k : layout.outcomes(j)) out.set({a, layout.measurements()[j], k}, p);
    }
  }
  return out;
}

SuccessMetric canonical_metric(const TaskSpec& task) {
  SuccessMetric metric;
  for (const ScenarioRow& row : enumerate_scenarios(task)) metric.weights[{row.a, row.b, row.s}] = 1.0;
  return metric;
}

SuccessMetric signed_metric_t41() {
  const TaskLayout layout(TaskSpec(4, 1));
  SuccessMetric metric;
  for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
    const auto& outs = layout.outcomes(j);
    const IndexSet& b = layout.measurements()[j];
    const int first = outs[0];
    const int second = outs[1];
    metric.weights[{IndexSet{second}, b, first}] = 1.0;
    metric.weights[{IndexSet{first}, b, first}] = -1.0;
  }
  return metric;
}

void validate_metric(const SuccessMetric& metric, const TaskLayout& layout) {
  for (const auto& [key, w] : metric.weights) {
    try {
      check_label(layout, key);
    } catch (const LookupError& e) {
      throw LookupError("metric term " + describe(key) + ": " + e.what());
    }
  }
}

double evaluate_metric(const SuccessMetric& metric, const Behavior& behavior) {
  double total = metric.constant_offset;
  for (const auto& [key, w] : metric.weights) total += w * behavior.at(key);
  return total;
}

double worst_case_success(const TaskSpec& task, const Behavior& behavior) {
  double worst = 1.0;
  for (const ScenarioRow& row : enumerate_scenarios(task)) worst = std::min(worst, behavior.at({row.a, row.b, row.s}));
  return worst;
}

SuccessMetric eliminate_last_outcomes(const SuccessMetric& metric, const TaskLayout& layout) {
  SuccessMetric out;
  out.constant_offset = metric.constant_offset;
  for (const auto& [key, w] : metric.weights) {
    const std::size_t j = layout.measurement_index(key.measurement);
    const auto& outs = layout.outcomes(j);
    if (key.outcome != outs.back()) {
      out.weights[key] += w;
      continue;
    }
    out.constant_offset += w;
    for (std::size_t k = 0; k + 1 < outs.size(); ++k) out.weights[{key.preparation, key.measurement, outs[k]}] -= w;
  }
  for (auto it = out.weights.begin(); it != out.weights.end();) {
    it = (it->second == 0.0) ? out.weights.erase(it) : std::next(it);
  }
  return out;
}

void validate_equivalence(const PreparationEquivalence& eq, const TaskLayout& layout, double tolerance) {
  for (const auto* side : {&eq.side_a, &eq.side_b})
    for (const auto& [label, w] : *side) layout.preparation_index(label);
  check_weights(eq.side_a, tolerance, "side a");
  check_weights(eq.side_b, tolerance, "side b");
}

void validate_equivalence(const EffectEquivalence& eq, const TaskLayout& layout, double tolerance) {
  for (const auto* side : {&eq.side_a, &eq.side_b})
    for (const auto& [label, w] : *side) layout.outcome_index(layout.measurement_index(label.measurement), label.outcome);
  check_weights(eq.side_a, tolerance, "side a");
  check_weights(eq.side_b, tolerance, "side b");
}

std::map<IndexSet, double> signed_coefficients(const PreparationEquivalence& eq) { return signed_impl(eq); }
std::map<EffectKey, double> signed_coefficients(const EffectEquivalence& eq) { return signed_impl(eq); }

PreparationEquivalence t41_preparation_equivalence() {
  PreparationEquivalence eq;
  eq.side_a = {{IndexSet{0}, 0.5}, {IndexSet{1}, 0.5}};
  eq.side_b = {{IndexSet{2}, 0.5}, {IndexSet{3}, 0.5}};
  return eq;
}

std::vector<PreparationEquivalence> t42_preparation_equivalences() {
  PreparationEquivalence first;
  first.side_a = {{IndexSet{0, 1}, 0.5}, {IndexSet{0, 2}, 0.5}};
  first.side_b = {{IndexSet{0, 3}, 0.5}, {IndexSet{1, 2}, 0.5}};
  PreparationEquivalence second;
  second.side_a = {{IndexSet{0, 3}, 0.5}, {IndexSet{1, 2}, 0.5}};
  second.side_b = {{IndexSet{1, 3}, 0.5}, {IndexSet{2, 3}, 0.5}};
  return {first, second};
}

}  // namespace picomm
