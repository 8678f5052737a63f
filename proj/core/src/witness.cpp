#include "picomm/witness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace picomm {

void CommunicationMatrix::validate(double entry_tolerance, double row_tolerance) const {
  if (entries.rows() != static_cast<Eigen::Index>(preparations.size()) || entries.cols() != static_cast<Eigen::Index>(outcomes.size()))
    throw ConstraintViolation("communication matrix shape does not match its labels");
  if (entries.size() > 0 && entries.minCoeff() < -entry_tolerance) throw ConstraintViolation("communication matrix has a negative entry");
  for (Eigen::Index i = 0; i < entries.rows(); ++i)
    if (std::abs(entries.row(i).sum() - 1.0) > row_tolerance)
      throw ConstraintViolation("communication matrix row " + to_string(preparations[static_cast<std::size_t>(i)]) + " is not normalized");
}

CommunicationMatrix comm_matrix(const Behavior& behavior, const IndexSet& measurement) {
  std::set<IndexSet> preps;
  std::set<int> outs;
  for (const auto& [key, p] : behavior.probabilities()) {
    if (key.measurement != measurement) continue;
    preps.insert(key.preparation);
    outs.insert(key.outcome);
  }
  if (preps.empty()) throw LookupError("behaviour has no data for measurement " + to_string(measurement));
  CommunicationMatrix a;
  a.measurement = measurement;
  a.preparations.assign(preps.begin(), preps.end());
  a.outcomes.assign(outs.begin(), outs.end());
  a.entries.resize(static_cast<Eigen::Index>(preps.size()), static_cast<Eigen::Index>(outs.size()));
  for (std::size_t i = 0; i < a.preparations.size(); ++i)
    for (std::size_t k = 0; k < a.outcomes.size(); ++k)
      a.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = behavior.at({a.preparations[i], measurement, a.outcomes[k]});
  return a;
}

double lambda_max(const CommunicationMatrix& a) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < a.entries.cols(); ++k) total += a.entries.col(k).maxCoeff();
  return total;
}

const char* to_string(WitnessVerdict verdict) {
  return verdict == WitnessVerdict::kExcluded ? "excluded" : "consistent";
}

WitnessVerdict dimension_witness(const CommunicationMatrix& a, int d, double tolerance) {
  if (d < 1) throw ConstraintViolation("dimension must be positive");
  return lambda_max(a) > d + tolerance ? WitnessVerdict::kExcluded : WitnessVerdict::kConsistent;
}

double metric_bound_via_lambda(const TaskSpec& task, const SuccessMetric& metric, int d) {
  if (d < 1) throw ConstraintViolation("dimension must be positive");
  const TaskLayout layout(task);
  validate_metric(metric, layout);
  std::set<std::pair<IndexSet, IndexSet>> pairs;
  std::map<IndexSet, std::set<int>> columns;
  for (const auto& [key, w] : metric.weights) {
    if (w == 0.0) continue;
    if (w != 1.0) throw ShapeError("metric weights must all equal 1 for the lambda_max bound");
    if (!pairs.insert({key.preparation, key.measurement}).second)
      throw ShapeError("metric has two terms on preparation " + to_string(key.preparation) + " and measurement " + to_string(key.measurement));
    if (!columns[key.measurement].insert(key.outcome).second)
      throw ShapeError("metric has two terms in column " + std::to_string(key.outcome) + " of measurement " + to_string(key.measurement));
  }
  double bound = metric.constant_offset;
  for (const auto& [b, cols] : columns) bound += std::min<double>(d, static_cast<double>(cols.size()));
  return bound;
}

std::string render(const CommunicationMatrix& a, const SuccessMetric* metric, int precision) {
  auto rewarded = [&](std::size_t i, std::size_t k) {
    if (!metric) return false;
    auto it = metric->weights.find({a.preparations[i], a.measurement, a.outcomes[k]});
    return it != metric->weights.end() && it->second != 0.0;
  };
  std::vector<std::vector<std::string>> cells(a.preparations.size() + 1);
  cells[0].push_back("M" + to_string(a.measurement));
  for (int k : a.outcomes) cells[0].push_back(std::to_string(k));
  for (std::size_t i = 0; i < a.preparations.size(); ++i) {
    cells[i + 1].push_back(to_string(a.preparations[i]));
    for (std::size_t k = 0; k < a.outcomes.size(); ++k) {
      double v = a.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      if (std::abs(v) < 0.5 * std::pow(10.0, -precision)) v = 0.0;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", precision, v);
      cells[i + 1].push_back(rewarded(i, k) ? "[" + std::string(buf) + "]" : " " + std::string(buf) + " ");
    }
  }
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += row[c] + std::string(width[c] - row[c].size(), ' ');
      out += c + 1 < row.size() ? "  " : "\n";
    }
  }
  return out;
}

}  // namespace picomm
