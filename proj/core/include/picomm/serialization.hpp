#pragma once

#include <nlohmann/json.hpp>

#include "picomm/classical.hpp"
#include "picomm/quantum.hpp"

namespace picomm {

using Json = nlohmann::json;

// Labels are written as index arrays ([0, 2]). Readers also accept bit
// strings ("1010").
Json label_to_json(const IndexSet& label);
IndexSet label_from_json(const Json& j);

Json to_json(const TaskSpec& task);
TaskSpec task_from_json(const Json& j);

Json to_json(const Behavior& behavior);
Behavior behavior_from_json(const Json& j);

Json to_json(const SuccessMetric& metric);
SuccessMetric metric_from_json(const Json& j);

/// Complex matrices are nested arrays of [re, im] pairs.
Json to_json(const CMatrix& m);
CMatrix cmatrix_from_json(const Json& j);

Json to_json(const QuantumModel& model);
QuantumModel model_from_json(const Json& j);

Json to_json(const PreparationEquivalence& eq);
Json to_json(const EffectEquivalence& eq);
PreparationEquivalence preparation_equivalence_from_json(const Json& j);
EffectEquivalence effect_equivalence_from_json(const Json& j);

Json to_json(const ClassicalStrategy& strategy);
ClassicalStrategy strategy_from_json(const Json& j);

}  // namespace picomm
