#include "picomm/task.hpp"

#include <algorithm>
#include <sstream>

namespace picomm {

std::string to_bitstring(const IndexSet& set, int n) {
  std::string bits(static_cast<std::size_t>(n), '0');
  for (int i : set) {
    if (i < 0 || i >= n) throw ConstraintViolation("index " + std::to_string(i) + " outside bit string of length " + std::to_string(n));
    bits[static_cast<std::size_t>(i)] = '1';
  }
  return bits;
}

IndexSet from_bitstring(const std::string& bits) {
  IndexSet set;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      set.push_back(static_cast<int>(i));
    } else if (bits[i] != '0') {
      throw ConstraintViolation("malformed bit string '" + bits + "'");
    }
  }
  return set;
}

std::string to_string(const IndexSet& set) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out << ',';
    out << set[i];
  }
  out << '}';
  return out.str();
}

std::vector<IndexSet> k_subsets(int n, int k) {
  std::vector<IndexSet> out;
  if (k < 0 || k > n) return out;
  IndexSet cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

TaskSpec::TaskSpec(int n, int m) : n_(n), m_(m) {
  if (n < 2 || m < 1 || m > n - 1) {
    throw ConstraintViolation("invalid task T_{" + std::to_string(n) + "," + std::to_string(m) + "}: require 1 <= m <= n-1");
  }
  if (n > 30) throw ConstraintViolation("task size n > 30 is not supported");
}

std::vector<ScenarioRow> enumerate_scenarios(const TaskSpec& task) {
  const int n = task.n();
  const int m = task.m();
  std::vector<ScenarioRow> rows;
  for (int s = 0; s < n; ++s) {
    IndexSet zeros;
    for (int i = 0; i < n; ++i)
      if (i != s) zeros.push_back(i);
    for (const IndexSet& pick : k_subsets(n - 1, m)) {
      ScenarioRow row;
      row.s = s;
      std::vector<bool> in_a(zeros.size(), false);
      for (int p : pick) in_a[static_cast<std::size_t>(p)] = true;
      for (std::size_t z = 0; z < zeros.size(); ++z) (in_a[z] ? row.a : row.b).push_back(zeros[z]);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

TaskLayout::TaskLayout(const TaskSpec& task)
    : task_(task),
      rows_(enumerate_scenarios(task)),
      preparations_(k_subsets(task.n(), task.m())),
      measurements_(k_subsets(task.n(), task.n() - 1 - task.m())) {
  for (std::size_t i = 0; i < preparations_.size(); ++i) prep_index_[preparations_[i]] = i;
  for (std::size_t j = 0; j < measurements_.size(); ++j) {
    meas_index_[measurements_[j]] = j;
    std::vector<int> outs;
    for (int x = 0; x < task.n(); ++x)
      if (!std::binary_search(measurements_[j].begin(), measurements_[j].end(), x)) outs.push_back(x);
    outcomes_.push_back(std::move(outs));
  }
}

std::size_t TaskLayout::preparation_index(const IndexSet& a) const {
  auto it = prep_index_.find(a);
  if (it == prep_index_.end()) throw LookupError("unknown preparation label " + to_string(a));
  return it->second;
}

std::size_t TaskLayout::measurement_index(const IndexSet& b) const {
  auto it = meas_index_.find(b);
  if (it == meas_index_.end()) throw LookupError("unknown measurement label " + to_string(b));
  return it->second;
}

std::size_t TaskLayout::outcome_index(std::size_t measurement, int outcome) const {
  const auto& outs = outcomes_.at(measurement);
  auto it = std::lower_bound(outs.begin(), outs.end(), outcome);
  if (it == outs.end() || *it != outcome) {
    throw LookupError("outcome " + std::to_string(outcome) + " not in outcome set of measurement " + to_string(measurements_[measurement]));
  }
  return static_cast<std::size_t>(it - outs.begin());
}

int compressed_outcome_label(const IndexSet& b, int outcome) {
  if (b.size() != 1) throw ConstraintViolation("compressed outcome labels need a single revealed zero");
  const int k = b.front();
  if (outcome == k) throw LookupError("outcome equals the revealed position");
  return outcome < k ? outcome + 1 : outcome;
}

}  // namespace picomm
