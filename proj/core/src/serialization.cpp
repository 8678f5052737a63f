#include "picomm/serialization.hpp"

#include <string>

namespace picomm {

namespace {

Json event_json(const EventKey& key) {
  return {{"preparation", label_to_json(key.preparation)}, {"measurement", label_to_json(key.measurement)}, {"outcome", key.outcome}};
}

EventKey event_from(const Json& j) {
  return {label_from_json(j.at("preparation")), label_from_json(j.at("measurement")), j.at("outcome").get<int>()};
}

void expect_kind(const Json& j, const char* kind) {
  if (j.contains("kind") && j.at("kind").get<std::string>() != kind) {
    throw ConstraintViolation(std::string("expected an equivalence of kind '") + kind + "'");
  }
}

}  // namespace

Json label_to_json(const IndexSet& label) { return Json(label); }

IndexSet label_from_json(const Json& j) {
  if (j.is_string()) return from_bitstring(j.get<std::string>());
  if (!j.is_array()) throw ConstraintViolation("label must be an index array or a bit string");
  IndexSet out = j.get<IndexSet>();
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] <= out[i - 1]) throw ConstraintViolation("label index arrays must be strictly increasing");
  }
  return out;
}

Json to_json(const TaskSpec& task) { return {{"n", task.n()}, {"m", task.m()}}; }

TaskSpec task_from_json(const Json& j) {
  if (j.is_array()) return TaskSpec(j.at(0).get<int>(), j.at(1).get<int>());
  return TaskSpec(j.at("n").get<int>(), j.at("m").get<int>());
}

Json to_json(const Behavior& behavior) {
  Json entries = Json::array();
  for (const auto& [key, p] : behavior.probabilities()) {
    Json e = event_json(key);
    e["p"] = p;
    entries.push_back(e);
  }
  return {{"entries", entries}};
}

Behavior behavior_from_json(const Json& j) {
  Behavior out;
  for (const Json& e : j.at("entries")) out.set(event_from(e), e.at("p").get<double>());
  return out;
}

Json to_json(const SuccessMetric& metric) {
  Json terms = Json::array();
  for (const auto& [key, w] : metric.weights) {
    Json e = event_json(key);
    e["weight"] = w;
    terms.push_back(e);
  }
  return {{"terms", terms}, {"constant_offset", metric.constant_offset}};
}

SuccessMetric metric_from_json(const Json& j) {
  SuccessMetric out;
  out.constant_offset = j.value("constant_offset", 0.0);
  for (const Json& e : j.at("terms")) out.weights[event_from(e)] += e.at("weight").get<double>();
  return out;
}

Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMatrix cmatrix_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw ShapeError("ragged complex matrix");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& z = row.at(static_cast<std::size_t>(c));
      m(r, c) = z.is_number() ? Complex(z.get<double>(), 0.0) : Complex(z.at(0).get<double>(), z.at(1).get<double>());
    }
  }
  return m;
}

Json to_json(const QuantumModel& model) {
  Json states = Json::array();
  for (const auto& [label, rho] : model.states) states.push_back({{"label", label_to_json(label)}, {"matrix", to_json(rho)}});
  Json povms = Json::array();
  for (const auto& [label, effects] : model.povms) {
    Json list = Json::array();
    for (const CMatrix& e : effects) list.push_back(to_json(e));
    povms.push_back({{"label", label_to_json(label)}, {"effects", list}});
  }
  return {{"task", to_json(model.task)}, {"dimension", model.dimension}, {"states", states}, {"povms", povms}};
}

QuantumModel model_from_json(const Json& j) {
  QuantumModel model;
  model.task = task_from_json(j.at("task"));
  model.dimension = j.at("dimension").get<int>();
  for (const Json& s : j.at("states")) model.states[label_from_json(s.at("label"))] = cmatrix_from_json(s.at("matrix"));
  for (const Json& p : j.at("povms")) {
    std::vector<CMatrix> effects;
    for (const Json& e : p.at("effects")) effects.push_back(cmatrix_from_json(e));
    model.povms[label_from_json(p.at("label"))] = std::move(effects);
  }
  return model;
}

Json to_json(const PreparationEquivalence& eq) {
  auto side = [](const std::map<IndexSet, double>& m) {
    Json out = Json::array();
    for (const auto& [label, w] : m) out.push_back({{"label", label_to_json(label)}, {"weight", w}});
    return out;
  };
  return {{"kind", "preparation"}, {"side_a", side(eq.side_a)}, {"side_b", side(eq.side_b)}};
}

Json to_json(const EffectEquivalence& eq) {
  auto side = [](const std::map<EffectKey, double>& m) {
    Json out = Json::array();
    for (const auto& [key, w] : m) {
      out.push_back({{"measurement", label_to_json(key.measurement)}, {"outcome", key.outcome}, {"weight", w}});
    }
    return out;
  };
  return {{"kind", "effect"}, {"side_a", side(eq.side_a)}, {"side_b", side(eq.side_b)}};
}

PreparationEquivalence preparation_equivalence_from_json(const Json& j) {
  expect_kind(j, "preparation");
  PreparationEquivalence eq;
  for (const Json& e : j.at("side_a")) eq.side_a[label_from_json(e.at("label"))] += e.at("weight").get<double>();
  for (const Json& e : j.at("side_b")) eq.side_b[label_from_json(e.at("label"))] += e.at("weight").get<double>();
  return eq;
}

EffectEquivalence effect_equivalence_from_json(const Json& j) {
  expect_kind(j, "effect");
  EffectEquivalence eq;
  auto key = [](const Json& e) { return EffectKey{label_from_json(e.at("measurement")), e.at("outcome").get<int>()}; };
  for (const Json& e : j.at("side_a")) eq.side_a[key(e)] += e.at("weight").get<double>();
  for (const Json& e : j.at("side_b")) eq.side_b[key(e)] += e.at("weight").get<double>();
  return eq;
}

Json to_json(const ClassicalStrategy& strategy) {
  Json enc = Json::array();
  for (const auto& [a, msg] : strategy.encoding) enc.push_back({{"preparation", label_to_json(a)}, {"message", msg}});
  Json dec = Json::array();
  for (const auto& [cell, guess] : strategy.decoding) {
    dec.push_back({{"measurement", label_to_json(cell.first)}, {"message", cell.second}, {"guess", guess}});
  }
  return {{"message_bits", strategy.message_bits}, {"encoding", enc}, {"decoding", dec}};
}

ClassicalStrategy strategy_from_json(const Json& j) {
  ClassicalStrategy s;
  s.message_bits = j.at("message_bits").get<int>();
  for (const Json& e : j.at("encoding")) s.encoding[label_from_json(e.at("preparation"))] = e.at("message").get<int>();
  for (const Json& d : j.at("decoding")) {
    s.decoding[{label_from_json(d.at("measurement")), d.at("message").get<int>()}] = d.at("guess").get<int>();
  }
  return s;
}

}  // namespace picomm
