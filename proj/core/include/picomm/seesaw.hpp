#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "picomm/conic.hpp"
#include "picomm/quantum.hpp"

namespace picomm {

struct SeesawConfig {
  int dimension = 2;
  int restarts = 20;
  /// A restart stops once a full round improves the value by less than this.
  double epsilon = 1e-9;
  int max_rounds = 200;
  /// After convergence, effect eigenvalues below this are zeroed, the POVMs
  /// renormalized and the states re-optimized; the result is kept only if the
  /// value does not drop. Zero disables it. Skipped under effect equivalences.
  double polish_threshold = 1e-3;
  std::uint64_t seed = 0;
  std::vector<PreparationEquivalence> prep_equivalences;
  std::vector<EffectEquivalence> effect_equivalences;
  /// Restarts run on this many worker threads; results do not depend on it.
  int threads = 1;
  SolverSettings solver;

  /// Throws ConstraintViolation on d < 1, restarts < 1, epsilon <= 0 or
  /// max_rounds < 1 or a negative polish threshold.
  void validate() const;
};

struct RestartTrace {
  int restart = 0;
  std::uint64_t seed = 0;
  int rounds = 0;
  double value = 0.0;
  bool converged = false;
  /// Whether the post-convergence rank polish was accepted.
  bool polished = false;
  /// Metric value after every completed round.
  std::vector<double> values;
};

struct SeesawResult {
  double best_value = 0.0;
  QuantumModel model;
  std::vector<RestartTrace> traces;
  int best_restart = 0;
  /// Whether the restart that produced best_value met the epsilon criterion.
  bool converged = false;
};

/// Alternating optimization from Haar-random pure states (restart r uses seed
/// cfg.seed + r). best_value is recomputed from the returned model.
SeesawResult seesaw(const TaskSpec& task, const SuccessMetric& metric, const SeesawConfig& cfg);

struct MeasurementStepResult {
  double value = 0.0;
  std::map<IndexSet, std::vector<CMatrix>> povms;
};

/// Optimal POVMs for fixed states. Measurements coupled by effect
/// equivalences are solved as one SDP; an uncoupled binary measurement uses
/// the exact Helstrom projector.
MeasurementStepResult measurement_step(const TaskSpec& task, const std::map<IndexSet, CMatrix>& states, const SuccessMetric& metric,
                                       const std::vector<EffectEquivalence>& effect_equivalences, const SolverSettings& settings = {});

struct StateStepResult {
  double value = 0.0;
  std::map<IndexSet, CMatrix> states;
};

/// Optimal states for fixed POVMs. Preparations coupled by equivalences are
/// solved as one SDP; the others take the top eigenvector of their
/// accumulated operator sum_{b,k} w M_b(k).
StateStepResult state_step(const TaskSpec& task, const std::map<IndexSet, std::vector<CMatrix>>& povms, const SuccessMetric& metric,
                           const std::vector<PreparationEquivalence>& prep_equivalences, const SolverSettings& settings = {});

}  // namespace picomm
