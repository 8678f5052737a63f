#include "picomm/seesaw.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

namespace picomm {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

int dimension_of(const std::map<IndexSet, CMatrix>& states) {
  if (states.empty()) throw ModelValidationError("no states given");
  return static_cast<int>(states.begin()->second.rows());
}

int dimension_of(const std::map<IndexSet, std::vector<CMatrix>>& povms) {
  if (povms.empty() || povms.begin()->second.empty()) throw ModelValidationError("no POVMs given");
  return static_cast<int>(povms.begin()->second.front().rows());
}

CMatrix clip_psd(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

void clean_povm(std::vector<CMatrix>& effects) {
  const Eigen::Index d = effects.front().rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (CMatrix& e : effects) {
    e = clip_psd(e);
    total += e;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(total);
  const CMatrix inv_sqrt =
      es.eigenvectors() * es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  for (CMatrix& e : effects) {
    e = inv_sqrt * e * inv_sqrt;
    e = (e + e.adjoint()) / 2.0;
  }
}

/// Drops effect eigenvalues below `threshold` and renormalizes; false if the
/// truncated effects no longer sum to something close to the identity.
bool snap_povm(std::vector<CMatrix>& effects, double threshold) {
  const Eigen::Index d = effects.front().rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (CMatrix& e : effects) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es((e + e.adjoint()) / 2.0);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) < threshold) ev(i) = 0.0;
    e = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    total += e;
  }
  if (Eigen::SelfAdjointEigenSolver<CMatrix>(total).eigenvalues().minCoeff() < 0.5) return false;
  clean_povm(effects);
  return true;
}

CMatrix clean_state(const CMatrix& rho) {
  const CMatrix h = clip_psd(rho);
  return h / h.trace().real();
}

void check_sdp(const SolveReport& r, const char* what) {
  if (r.status == SolveStatus::kOptimal) return;
  if (r.status == SolveStatus::kInfeasible) {
    throw InfeasibleConstraints(std::string(what) + ": the declared equivalences cannot be satisfied");
  }
  throw SolverError(std::string(what) + " SDP failed: " + to_string(r.status) + " (" + r.message + ")");
}

}  // namespace

void SeesawConfig::validate() const {
  if (dimension < 1) throw ConstraintViolation("see-saw dimension must be at least 1");
  if (restarts < 1) throw ConstraintViolation("see-saw needs at least one restart");
  if (!(epsilon > 0.0)) throw ConstraintViolation("see-saw epsilon must be positive");
  if (max_rounds < 1) throw ConstraintViolation("see-saw max_rounds must be at least 1");
  if (polish_threshold < 0.0) throw ConstraintViolation("see-saw polish threshold must be nonnegative");
}

MeasurementStepResult measurement_step(const TaskSpec& task, const std::map<IndexSet, CMatrix>& states, const SuccessMetric& metric,
                                       const std::vector<EffectEquivalence>& effect_equivalences, const SolverSettings& settings) {
  const TaskLayout layout(task);
  validate_metric(metric, layout);
  const int d = dimension_of(states);
  const std::size_t nm = layout.measurements().size();

  // C[j][k] = sum_a w(a, b_j, k) rho_a.
  std::vector<std::vector<CMatrix>> C(nm);
  for (std::size_t j = 0; j < nm; ++j) C[j].assign(layout.outcome_count(j), CMatrix::Zero(d, d));
  for (const auto& [key, w] : metric.weights) {
    auto it = states.find(key.preparation);
    if (it == states.end()) throw LookupError("no state for preparation " + to_string(key.preparation));
    const std::size_t j = layout.measurement_index(key.measurement);
    C[j][layout.outcome_index(j, key.outcome)] += w * it->second;
  }

  DisjointSets sets(nm);
  std::vector<char> coupled(nm, 0);
  for (const EffectEquivalence& eq : effect_equivalences) {
    validate_equivalence(eq, layout);
    std::vector<std::size_t> members;
    for (const auto& [key, w] : signed_coefficients(eq)) members.push_back(layout.measurement_index(key.measurement));
    for (std::size_t t : members) {
      coupled[t] = 1;
      sets.unite(members.front(), t);
    }
  }

  MeasurementStepResult out;
  std::vector<std::vector<CMatrix>> effects(nm);
  std::vector<char> done(nm, 0);
  for (std::size_t j0 = 0; j0 < nm; ++j0) {
    if (done[j0]) continue;
    const std::size_t root = sets.find(j0);
    std::vector<std::size_t> group;
    for (std::size_t j = 0; j < nm; ++j)
      if (sets.find(j) == root) group.push_back(j);
    for (std::size_t j : group) done[j] = 1;

    if (group.size() == 1 && !coupled[j0] && layout.outcome_count(j0) == 2) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(C[j0][0] - C[j0][1]);
      CMatrix first = CMatrix::Zero(d, d);
      for (int i = 0; i < d; ++i)
        if (es.eigenvalues()(i) > 0.0) first += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      effects[j0] = {first, CMatrix::Identity(d, d) - first};
      continue;
    }

    SemidefiniteProgram sdp;
    sdp.sense = ObjectiveSense::kMaximize;
    std::map<std::pair<std::size_t, std::size_t>, int> block_of;
    for (std::size_t j : group) {
      std::vector<std::pair<int, double>> sum;
      for (std::size_t k = 0; k < layout.outcome_count(j); ++k) {
        const int blk = sdp.add_block(2 * d);
        block_of[{j, k}] = blk;
        add_hermitian_functional(sdp.objective, blk, C[j][k]);
        sum.emplace_back(blk, 1.0);
      }
      add_hermitian_equality(sdp, sum, CMatrix::Identity(d, d), "completeness " + to_string(layout.measurements()[j]));
    }
    for (const EffectEquivalence& eq : effect_equivalences) {
      const auto coeffs = signed_coefficients(eq);
      if (sets.find(layout.measurement_index(coeffs.begin()->first.measurement)) != root) continue;
      std::vector<std::pair<int, double>> terms;
      for (const auto& [key, w] : coeffs) {
        const std::size_t j = layout.measurement_index(key.measurement);
        terms.emplace_back(block_of.at({j, layout.outcome_index(j, key.outcome)}), w);
      }
      add_hermitian_equality(sdp, terms, CMatrix::Zero(d, d), "effect equivalence");
    }
    const SolveReport r = solve_sdp(sdp, settings);
    check_sdp(r, "measurement step");
    for (std::size_t j : group) {
      for (std::size_t k = 0; k < layout.outcome_count(j); ++k) {
        effects[j].push_back(hermitian_extract(r.blocks[static_cast<std::size_t>(block_of.at({j, k}))]));
      }
    }
  }

  out.value = metric.constant_offset;
  for (std::size_t j = 0; j < nm; ++j) {
    clean_povm(effects[j]);
    for (std::size_t k = 0; k < effects[j].size(); ++k) out.value += (C[j][k] * effects[j][k]).trace().real();
    out.povms[layout.measurements()[j]] = std::move(effects[j]);
  }
  return out;
}

StateStepResult state_step(const TaskSpec& task, const std::map<IndexSet, std::vector<CMatrix>>& povms, const SuccessMetric& metric,
                           const std::vector<PreparationEquivalence>& prep_equivalences, const SolverSettings& settings) {
  const TaskLayout layout(task);
  validate_metric(metric, layout);
  const int d = dimension_of(povms);
  const std::size_t np = layout.preparations().size();

  std::vector<CMatrix> G(np, CMatrix::Zero(d, d));
  for (const auto& [key, w] : metric.weights) {
    auto it = povms.find(key.measurement);
    if (it == povms.end()) throw LookupError("no POVM for measurement " + to_string(key.measurement));
    const std::size_t j = layout.measurement_index(key.measurement);
    G[layout.preparation_index(key.preparation)] += w * it->second.at(layout.outcome_index(j, key.outcome));
  }

  DisjointSets sets(np);
  std::vector<char> coupled(np, 0);
  for (const PreparationEquivalence& eq : prep_equivalences) {
    validate_equivalence(eq, layout);
    std::vector<std::size_t> members;
    for (const auto& [label, w] : signed_coefficients(eq)) members.push_back(layout.preparation_index(label));
    for (std::size_t t : members) {
      coupled[t] = 1;
      sets.unite(members.front(), t);
    }
  }

  std::vector<CMatrix> rho(np);
  std::vector<char> done(np, 0);
  for (std::size_t i0 = 0; i0 < np; ++i0) {
    if (done[i0]) continue;
    if (!coupled[i0]) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es((G[i0] + G[i0].adjoint()) / 2.0);
      rho[i0] = projector(es.eigenvectors().col(d - 1));
      done[i0] = 1;
      continue;
    }
    const std::size_t root = sets.find(i0);
    SemidefiniteProgram sdp;
    sdp.sense = ObjectiveSense::kMaximize;
    std::map<std::size_t, int> block_of;
    for (std::size_t i = 0; i < np; ++i) {
      if (sets.find(i) != root) continue;
      done[i] = 1;
      const int blk = sdp.add_block(2 * d);
      block_of[i] = blk;
      add_hermitian_functional(sdp.objective, blk, G[i]);
      LinearForm trace;
      add_hermitian_functional(trace, blk, CMatrix::Identity(d, d));
      sdp.add_constraint(std::move(trace), 1.0, "trace " + to_string(layout.preparations()[i]));
    }
    for (const PreparationEquivalence& eq : prep_equivalences) {
      const auto coeffs = signed_coefficients(eq);
      if (sets.find(layout.preparation_index(coeffs.begin()->first)) != root) continue;
      std::vector<std::pair<int, double>> terms;
      for (const auto& [label, w] : coeffs) terms.emplace_back(block_of.at(layout.preparation_index(label)), w);
      add_hermitian_equality(sdp, terms, CMatrix::Zero(d, d), "preparation equivalence");
    }
    const SolveReport r = solve_sdp(sdp, settings);
    check_sdp(r, "state step");
    for (const auto& [i, blk] : block_of) rho[i] = hermitian_extract(r.blocks[static_cast<std::size_t>(blk)]);
  }

  StateStepResult out;
  out.value = metric.constant_offset;
  for (std::size_t i = 0; i < np; ++i) {
    rho[i] = clean_state(rho[i]);
    out.value += (G[i] * rho[i]).trace().real();
    out.states[layout.preparations()[i]] = rho[i];
  }
  return out;
}

namespace {

struct RestartOutcome {
  RestartTrace trace;
  QuantumModel model;
};

RestartOutcome run_restart(const TaskSpec& task, const SuccessMetric& metric, const SeesawConfig& cfg, int index) {
  const TaskLayout layout(task);
  RestartOutcome out;
  out.trace.restart = index;
  out.trace.seed = cfg.seed + static_cast<std::uint64_t>(index);
  std::mt19937_64 rng(out.trace.seed);

  std::map<IndexSet, CMatrix> states;
  for (const IndexSet& a : layout.preparations()) states[a] = projector(haar_vector(cfg.dimension, rng));
  std::map<IndexSet, std::vector<CMatrix>> povms;

  double previous = -std::numeric_limits<double>::infinity();
  for (int round = 1; round <= cfg.max_rounds; ++round) {
    povms = measurement_step(task, states, metric, cfg.effect_equivalences, cfg.solver).povms;
    const StateStepResult s = state_step(task, povms, metric, cfg.prep_equivalences, cfg.solver);
    states = s.states;
    out.trace.values.push_back(s.value);
    out.trace.rounds = round;
    if (s.value - previous < cfg.epsilon) {
      out.trace.converged = true;
      break;
    }
    previous = s.value;
  }
  if (cfg.polish_threshold > 0.0 && cfg.effect_equivalences.empty() && !out.trace.values.empty()) {
    auto snapped = povms;
    bool ok = true;
    for (auto& [b, effects] : snapped) ok = ok && snap_povm(effects, cfg.polish_threshold);
    if (ok) {
      const StateStepResult s = state_step(task, snapped, metric, cfg.prep_equivalences, cfg.solver);
      if (s.value >= out.trace.values.back()) {
        povms = std::move(snapped);
        states = s.states;
        out.trace.polished = true;
      }
    }
  }
  out.model.task = task;
  out.model.dimension = cfg.dimension;
  out.model.states = std::move(states);
  out.model.povms = std::move(povms);
  out.trace.value = evaluate_metric(metric, behavior_of(out.model));
  return out;
}

}  // namespace

SeesawResult seesaw(const TaskSpec& task, const SuccessMetric& metric, const SeesawConfig& cfg) {
  cfg.validate();
  const TaskLayout layout(task);
  validate_metric(metric, layout);
  for (const auto& eq : cfg.prep_equivalences) validate_equivalence(eq, layout);
  for (const auto& eq : cfg.effect_equivalences) validate_equivalence(eq, layout);

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  std::vector<std::exception_ptr> errors(outcomes.size());
  auto one = [&](int r) {
    try {
      outcomes[static_cast<std::size_t>(r)] = run_restart(task, metric, cfg, r);
    } catch (const SolverError& e) {
      errors[static_cast<std::size_t>(r)] = std::make_exception_ptr(SolverError("see-saw restart " + std::to_string(r) + ": " + e.what()));
    } catch (...) {
      errors[static_cast<std::size_t>(r)] = std::current_exception();
    }
  };
  const int workers = std::clamp(cfg.threads, 1, cfg.restarts);
  if (workers == 1) {
    for (int r = 0; r < cfg.restarts; ++r) one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int r = next++; r < cfg.restarts; r = next++) one(r);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SeesawResult result;
  result.best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.traces.push_back(outcomes[r].trace);
    if (outcomes[r].trace.value > result.best_value) {
      result.best_value = outcomes[r].trace.value;
      result.best_restart = static_cast<int>(r);
    }
  }
  result.model = outcomes[static_cast<std::size_t>(result.best_restart)].model;
  result.converged = outcomes[static_cast<std::size_t>(result.best_restart)].trace.converged;
  return result;
}

}  // namespace picomm
