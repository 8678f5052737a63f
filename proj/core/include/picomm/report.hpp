#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "picomm/conic.hpp"
#include "picomm/hierarchy.hpp"
#include "picomm/serialization.hpp"

namespace picomm {

/// One experiment: a task, the methods to run and their knobs.
struct ExperimentConfig {
  TaskSpec task{3, 1};
  /// Any of classical, seesaw, outer, contextual, frames, witness, all.
  std::vector<std::string> methods;
  std::vector<int> dimensions{2};
  /// "canonical", "signed_t41" or an explicit metric object.
  Json metric = "canonical";
  std::vector<PreparationEquivalence> prep_equivalences;
  std::vector<EffectEquivalence> effect_equivalences;
  std::uint64_t seed = 0;
  int restarts = 20;
  int message_bits = 1;
  int threads = 1;
  double seesaw_epsilon = 1e-9;
  SolverSettings solver;
  SolverSettings outer_solver = outer_default_settings();
  std::string out;

  /// Throws ConstraintViolation on unknown methods or bad numbers and
  /// LookupError on labels that do not belong to the task.
  void validate() const;
  /// Methods in execution order with "all" expanded and duplicates removed.
  std::vector<std::string> resolved_methods() const;
  SuccessMetric resolved_metric() const;
};

Json to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults.
ExperimentConfig config_from_json(const Json& j);

struct MethodResult {
  std::string method;
  bool ok = true;
  std::string error;
  double wall_seconds = 0.0;
  Json data = Json::object();
};

struct Check {
  std::string name;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct Report {
  std::string version;
  Json config;
  std::vector<MethodResult> results;
  std::vector<Check> checks;
  std::string generated_at;

  bool all_ok() const;
  bool all_checks_passed() const;
};

Json to_json(const Report& report);
Report report_from_json(const Json& j);

/// Drops the timestamp and every "wall_seconds" field, for comparing reruns.
Json without_volatile_fields(Json j);

/// Runs the configured methods in dependency order (see-saw models feed the
/// contextual, frame and witness analyses). Errors are caught per method and
/// recorded; the rest of the run continues.
Report run(const ExperimentConfig& config);

struct ReproductionOptions {
  std::uint64_t seed = 1;
  int restarts = 20;
  int threads = 1;
};

/// Runs the reference experiment matrix and records one Check per expected
/// number.
Report reference_reproduction(const ReproductionOptions& options = {});

/// Plain-text rendering: one section per method, checks at the end.
std::string render_text(const Report& report);

}  // namespace picomm
