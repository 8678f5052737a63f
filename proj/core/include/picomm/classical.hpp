#pragma once

#include <map>
#include <string>
#include <utility>

#include "picomm/behavior.hpp"

namespace picomm {

/// Deterministic strategy with a c-bit message: Alice sends r(a), Bob answers
/// g(b, r(a)).
struct ClassicalStrategy {
  int message_bits = 1;
  std::map<IndexSet, int> encoding;
  std::map<std::pair<IndexSet, int>, int> decoding;

  /// Throws ConstraintViolation if a message is out of range, a cell is
  /// missing, or a decoded answer is not an outcome of its measurement.
  void validate(const TaskLayout& layout) const;

  friend bool operator==(const ClassicalStrategy&, const ClassicalStrategy&) = default;
};

struct ClassicalOptimum {
  int correct_count = 0;
  int row_count = 0;
  ClassicalStrategy strategy;
};

struct ClassicalSearchOptions {
  /// Maximum number of encodings (2^(c * #preparations)) to enumerate.
  double budget = 16777216.0;
  int threads = 1;
};

/// Exact maximum number of scenario rows answered correctly. Encodings are
/// enumerated lexicographically (first preparation most significant); each
/// (b, message) cell then takes its majority answer, ties to the smallest
/// outcome. The first encoding reaching the maximum is returned.
ClassicalOptimum optimal_classical(const TaskSpec& task, int message_bits, const ClassicalSearchOptions& options = {});

/// Rows answered correctly by `strategy`.
int correct_count(const TaskSpec& task, const ClassicalStrategy& strategy);

/// p(k | a, b) = 1 iff k = g(b, r(a)).
Behavior strategy_behavior(const TaskSpec& task, const ClassicalStrategy& strategy);

/// Minimum over scenario rows of the 0/1 success indicator.
double worst_case_success(const TaskSpec& task, const ClassicalStrategy& strategy);

/// Three aligned text tables: encoding, decoding, and scenarios with wrong
/// guesses marked by '*'.
std::string render_strategy(const TaskSpec& task, const ClassicalStrategy& strategy);

}  // namespace picomm
