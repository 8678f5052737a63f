#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "picomm/conic.hpp"
#include "picomm/quantum.hpp"

namespace picomm {

/// Monomials {1, U_1, U_1^*, U_2, U_2^*, ...}. A binary measurement owns one
/// unitary (attached to its first outcome); a measurement with more outcomes
/// owns one unitary per outcome.
struct MonomialBasis {
  struct Unitary {
    IndexSet measurement;
    int outcome = 0;
  };
  std::vector<Unitary> unitaries;

  static MonomialBasis level_one(const TaskLayout& layout);

  int size() const noexcept { return 1 + 2 * static_cast<int>(unitaries.size()); }
  /// Position of U_t (adjoint: +1) in the basis.
  int position(std::size_t unitary, bool adjoint) const { return 1 + 2 * static_cast<int>(unitary) + (adjoint ? 1 : 0); }
  std::vector<std::string> labels() const;
};

/// The level-1 program over one Hermitian moment matrix per preparation,
/// Gamma_i = P H_i P^T, where the columns of P span the complement of the
/// vectors every Gamma_i must annihilate (effect completeness for
/// multi-outcome measurements and effect equivalences).
struct MomentMatrixProgram {
  MonomialBasis basis;
  std::vector<IndexSet> preparations;
  Eigen::MatrixXd reduction;  // P, basis-size x reduced-size
  SemidefiniteProgram sdp;    // over embedded H_i blocks
  /// Human-readable constraint list phrased on the Gamma_i.
  std::vector<std::string> constraints;
  /// Optimal Gamma_i after a solve (empty before).
  std::vector<CMatrix> moments;
};

/// Solver settings used by default for outer bounds (relative gap 1e-10).
inline SolverSettings outer_default_settings() {
  SolverSettings s;
  s.feasibility_tolerance = 1e-10;
  s.gap_tolerance = 1e-10;
  return s;
}

struct OuterBoundResult {
  double bound = 0.0;
  SolveReport report;
  MomentMatrixProgram program;
};

/// Upper bound on the metric over quantum behaviours of any dimension that
/// satisfy the declared equivalences. Metric terms on the last outcome of a
/// binary measurement are rewritten through p(last) = 1 - p(first).
OuterBoundResult outer_bound_u1(const TaskSpec& task, const SuccessMetric& metric,
                                const std::vector<PreparationEquivalence>& prep_equivalences,
                                const std::vector<EffectEquivalence>& effect_equivalences,
                                const SolverSettings& settings = outer_default_settings());

/// Solves the level-1 feasibility problem with every probability pinned to
/// `behavior`; returns the solver status (kOptimal means feasible).
SolveStatus outer_feasibility(const TaskSpec& task, const Behavior& behavior,
                              const std::vector<PreparationEquivalence>& prep_equivalences,
                              const std::vector<EffectEquivalence>& effect_equivalences, const SolverSettings& settings = {});

/// (number of moment blocks, side length of each block).
std::pair<int, int> moment_size(const TaskSpec& task);

nlohmann::json to_json(const MomentMatrixProgram& program);

}  // namespace picomm
