#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "picomm/common.hpp"

namespace picomm {

/// Sorted, duplicate-free set of positions in {0, ..., n-1}. Preparation and
/// measurement labels are index sets; bit strings are only a rendering.
using IndexSet = std::vector<int>;

/// Renders an index set as an n-character bit string, position 0 first
/// ({0, 2} with n = 4 -> "1010").
std::string to_bitstring(const IndexSet& set, int n);

/// Inverse of to_bitstring. Throws ConstraintViolation on malformed input.
IndexSet from_bitstring(const std::string& bits);

/// Renders {0, 2} as "{0,2}".
std::string to_string(const IndexSet& set);

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<IndexSet> k_subsets(int n, int k);

std::uint64_t binomial(int n, int k);

/// The game T_{n,m}: Charlie hides a 1 in an n-bit string, reveals m zero
/// positions to Alice and the remaining n-1-m zero positions to Bob.
class TaskSpec {
 public:
  /// Throws ConstraintViolation unless 1 <= m <= n-1.
  TaskSpec(int n, int m);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;

 private:
  int n_;
  int m_;
};

/// One (s, a, b) combination: s is the prize position, a the zeros revealed to
/// Alice, b the zeros revealed to Bob. {s}, a and b partition {0..n-1}.
struct ScenarioRow {
  int s = 0;
  IndexSet a;
  IndexSet b;

  friend auto operator<=>(const ScenarioRow&, const ScenarioRow&) = default;
};

/// Rows ordered lexicographically by (s, a). Count n * C(n-1, m).
std::vector<ScenarioRow> enumerate_scenarios(const TaskSpec& task);

/// Everything derived from a task that the solvers index into: labels in
/// canonical order plus position lookups.
class TaskLayout {
 public:
  explicit TaskLayout(const TaskSpec& task);

  const TaskSpec& task() const noexcept { return task_; }
  const std::vector<ScenarioRow>& rows() const noexcept { return rows_; }

  /// All m-subsets (Alice's inputs), lexicographic.
  const std::vector<IndexSet>& preparations() const noexcept { return preparations_; }
  /// All (n-1-m)-subsets (Bob's inputs), lexicographic.
  const std::vector<IndexSet>& measurements() const noexcept { return measurements_; }
  /// Outcome labels of measurement j: the indices outside b, ascending.
  const std::vector<int>& outcomes(std::size_t j) const { return outcomes_.at(j); }
  std::size_t outcome_count(std::size_t j) const { return outcomes_.at(j).size(); }

  /// Position lookups; throw LookupError for unknown labels.
  std::size_t preparation_index(const IndexSet& a) const;
  std::size_t measurement_index(const IndexSet& b) const;
  std::size_t outcome_index(std::size_t measurement, int outcome) const;

  bool has_preparation(const IndexSet& a) const { return prep_index_.count(a) != 0; }
  bool has_measurement(const IndexSet& b) const { return meas_index_.count(b) != 0; }

 private:
  TaskSpec task_;
  std::vector<ScenarioRow> rows_;
  std::vector<IndexSet> preparations_;
  std::vector<IndexSet> measurements_;
  std::vector<std::vector<int>> outcomes_;
  std::map<IndexSet, std::size_t> prep_index_;
  std::map<IndexSet, std::size_t> meas_index_;
};

/// Outcome relabelling used in the literature for T_{n,m} when printing
/// compressed outcome sets: outcome l of the measurement revealing the single
/// zero k becomes l+1 if l < k, else l (1-based). Pure formatting helper,
/// valid only for measurements with |b| = 1.
int compressed_outcome_label(const IndexSet& b, int outcome);

}  // namespace picomm
