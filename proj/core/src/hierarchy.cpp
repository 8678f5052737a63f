#include "picomm/hierarchy.hpp"

#include <sstream>

#include <Eigen/SVD>

namespace picomm {

namespace {

class ProgramBuilder {
 public:
  ProgramBuilder(const TaskSpec& task, const std::vector<PreparationEquivalence>& prep_eqs,
                 const std::vector<EffectEquivalence>& effect_eqs)
      : layout_(task), prep_eqs_(prep_eqs), effect_eqs_(effect_eqs) {
    for (const auto& eq : prep_eqs_) validate_equivalence(eq, layout_);
    for (const auto& eq : effect_eqs_) validate_equivalence(eq, layout_);
    prog_.basis = MonomialBasis::level_one(layout_);
    prog_.preparations = layout_.preparations();
    n_ = prog_.basis.size();
    first_unitary_.assign(layout_.measurements().size(), prog_.basis.unitaries.size());
    for (std::size_t t = prog_.basis.unitaries.size(); t-- > 0;) {
      first_unitary_[layout_.measurement_index(prog_.basis.unitaries[t].measurement)] = t;
    }
    build_reduction();
    r_ = static_cast<int>(prog_.reduction.cols());
    if (r_ == 0) throw InfeasibleConstraints("effect constraints force every moment matrix to vanish");
    for (std::size_t i = 0; i < layout_.preparations().size(); ++i) prog_.sdp.add_block(2 * r_);
    prog_.sdp.sense = ObjectiveSense::kMaximize;
    add_structure();
  }

  /// Coefficients of effect M_j(k) over the basis monomials.
  Eigen::VectorXd effect_vector(std::size_t j, int outcome) const {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n_);
    const std::size_t k = layout_.outcome_index(j, outcome);
    u(0) = 0.5;
    if (layout_.outcome_count(j) == 2) {
      const double sign = k == 0 ? 1.0 : -1.0;
      u(prog_.basis.position(first_unitary_[j], false)) = sign * 0.25;
      u(prog_.basis.position(first_unitary_[j], true)) = sign * 0.25;
    } else {
      u(prog_.basis.position(first_unitary_[j] + k, false)) = 0.25;
      u(prog_.basis.position(first_unitary_[j] + k, true)) = 0.25;
    }
    return u;
  }

  /// Reduced functional whose real trace against H_i gives p(k | i, j).
  CMatrix probability_functional(std::size_t j, int outcome) const {
    const Eigen::VectorXd u = effect_vector(j, outcome);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n_, n_);
    for (int t = 0; t < n_; ++t) {
      if (u(t) == 0.0) continue;
      C(0, t) += u(t) / 2.0;
      C(t, 0) += u(t) / 2.0;
    }
    return reduce(C);
  }

  int block(std::size_t prep) const { return static_cast<int>(prep); }
  const TaskLayout& layout() const { return layout_; }
  MomentMatrixProgram& program() { return prog_; }

  void extract(const SolveReport& report) {
    prog_.moments.clear();
    for (std::size_t i = 0; i < layout_.preparations().size(); ++i) {
      const CMatrix h = hermitian_extract(report.blocks[i]);
      prog_.moments.push_back(prog_.reduction.cast<Complex>() * h * prog_.reduction.transpose().cast<Complex>());
    }
  }

 private:
  CMatrix reduce(const Eigen::MatrixXd& C) const {
    const Eigen::MatrixXd& P = prog_.reduction;
    return (P.transpose() * C * P).cast<Complex>();
  }

  void build_reduction() {
    std::vector<Eigen::VectorXd> nulls;
    std::vector<std::size_t> multi;
    for (std::size_t j = 0; j < layout_.measurements().size(); ++j) {
      if (layout_.outcome_count(j) <= 2) continue;
      multi.push_back(j);
      Eigen::VectorXd v = -Eigen::VectorXd::Unit(n_, 0);
      for (int k : layout_.outcomes(j)) v += effect_vector(j, k);
      nulls.push_back(v);
    }
    for (const EffectEquivalence& eq : effect_eqs_) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n_);
      for (const auto& [key, w] : signed_coefficients(eq)) v += w * effect_vector(layout_.measurement_index(key.measurement), key.outcome);
      nulls.push_back(v);
    }

    if (effect_eqs_.empty()) {
      // Sparse basis of the complement: free binary unitaries, chained
      // differences inside each multi-outcome measurement, and one column
      // carrying the identity.
      std::vector<Eigen::VectorXd> cols;
      Eigen::VectorXd id = Eigen::VectorXd::Unit(n_, 0);
      std::vector<char> in_multi(layout_.measurements().size(), 0);
      for (std::size_t j : multi) {
        in_multi[j] = 1;
        const auto K = static_cast<int>(layout_.outcome_count(j));
        std::vector<int> coords;
        for (int k = 0; k < K; ++k) {
          coords.push_back(prog_.basis.position(first_unitary_[j] + static_cast<std::size_t>(k), false));
          coords.push_back(prog_.basis.position(first_unitary_[j] + static_cast<std::size_t>(k), true));
        }
        for (std::size_t c = 0; c + 1 < coords.size(); ++c) {
          Eigen::VectorXd v = Eigen::VectorXd::Zero(n_);
          v(coords[c]) = 1.0;
          v(coords[c + 1]) = -1.0;
          cols.push_back(v);
        }
        const double alpha = (2.0 * K - 4.0) / static_cast<double>(coords.size());
        for (int c : coords) id(c) = -alpha;
      }
      cols.push_back(id);
      for (std::size_t j = 0; j < layout_.measurements().size(); ++j) {
        if (in_multi[j]) continue;
        cols.push_back(Eigen::VectorXd::Unit(n_, prog_.basis.position(first_unitary_[j], false)));
        cols.push_back(Eigen::VectorXd::Unit(n_, prog_.basis.position(first_unitary_[j], true)));
      }
      Eigen::MatrixXd P(n_, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) P.col(static_cast<Eigen::Index>(c)) = cols[c];
      prog_.reduction = P;
      return;
    }

    Eigen::MatrixXd V(n_, static_cast<Eigen::Index>(nulls.size()));
    for (std::size_t c = 0; c < nulls.size(); ++c) V.col(static_cast<Eigen::Index>(c)) = nulls[c];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V.transpose(), Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cut) ++rank;
    prog_.reduction = svd.matrixV().rightCols(n_ - rank);
  }

  void add_structure() {
    const auto labels = prog_.basis.labels();
    const Eigen::MatrixXd& P = prog_.reduction;
    const std::size_t np = layout_.preparations().size();
    for (std::size_t i = 0; i < np; ++i) {
      const std::string g = "G" + to_string(layout_.preparations()[i]);
      prog_.constraints.push_back(g + " >= 0 (Hermitian, " + std::to_string(n_) + "x" + std::to_string(n_) + ")");
      for (int o = 0; o < n_; ++o) {
        LinearForm form;
        const Eigen::VectorXd row = P.row(o).transpose();
        add_hermitian_functional(form, block(i), (row * row.transpose()).cast<Complex>());
        prog_.sdp.add_constraint(std::move(form), 1.0, g + "[" + labels[static_cast<std::size_t>(o)] + "," + labels[static_cast<std::size_t>(o)] + "] = 1");
        prog_.constraints.push_back(g + "[" + labels[static_cast<std::size_t>(o)] + "," + labels[static_cast<std::size_t>(o)] + "] = 1");
      }
      for (std::size_t j = 0; j < layout_.measurements().size(); ++j) {
        if (layout_.outcome_count(j) <= 2) continue;
        std::ostringstream os;
        os << "for every row O: sum_k (" << g << "[O,U_k] + " << g << "[O,U_k^*]) = " << (4 - 2 * static_cast<int>(layout_.outcome_count(j)))
           << " " << g << "[O,1] over the unitaries of measurement " << to_string(layout_.measurements()[j]);
        prog_.constraints.push_back(os.str());
      }
    }
    for (const PreparationEquivalence& eq : prep_eqs_) {
      std::vector<std::pair<int, double>> terms;
      std::ostringstream os;
      for (const auto& [label, w] : signed_coefficients(eq)) {
        terms.emplace_back(block(layout_.preparation_index(label)), w);
        os << (w >= 0 ? " + " : " - ") << std::abs(w) << " G" << to_string(label);
      }
      add_hermitian_equality(prog_.sdp, terms, CMatrix::Zero(r_, r_), "preparation equivalence");
      prog_.constraints.push_back(os.str() + " = 0");
    }
    for (const EffectEquivalence& eq : effect_eqs_) {
      std::ostringstream os;
      os << "for every preparation i and row O: Gi[O, sum";
      for (const auto& [key, w] : signed_coefficients(eq)) os << (w >= 0 ? " + " : " - ") << std::abs(w) << " M" << to_string(key.measurement) << "(" << key.outcome << ")";
      prog_.constraints.push_back(os.str() + "] = 0");
    }
  }

  TaskLayout layout_;
  std::vector<PreparationEquivalence> prep_eqs_;
  std::vector<EffectEquivalence> effect_eqs_;
  MomentMatrixProgram prog_;
  std::vector<std::size_t> first_unitary_;
  int n_ = 0;
  int r_ = 0;
};

}  // namespace

MonomialBasis MonomialBasis::level_one(const TaskLayout& layout) {
  MonomialBasis basis;
  for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
    const auto& outs = layout.outcomes(j);
    if (outs.size() == 2) {
      basis.unitaries.push_back({layout.measurements()[j], outs[0]});
    } else {
      for (int k : outs) basis.unitaries.push_back({layout.measurements()[j], k});
    }
  }
  return basis;
}

std::vector<std::string> MonomialBasis::labels() const {
  std::vector<std::string> out{"1"};
  for (const Unitary& u : unitaries) {
    const std::string name = "U" + to_string(u.measurement) + "(" + std::to_string(u.outcome) + ")";
    out.push_back(name);
    out.push_back(name + "^*");
  }
  return out;
}

OuterBoundResult outer_bound_u1(const TaskSpec& task, const SuccessMetric& metric,
                                const std::vector<PreparationEquivalence>& prep_equivalences,
                                const std::vector<EffectEquivalence>& effect_equivalences, const SolverSettings& settings) {
  ProgramBuilder builder(task, prep_equivalences, effect_equivalences);
  const TaskLayout& layout = builder.layout();
  validate_metric(metric, layout);
  MomentMatrixProgram& prog = builder.program();
  prog.sdp.objective_constant = metric.constant_offset;
  for (const auto& [key, w] : metric.weights) {
    if (w == 0.0) continue;
    const std::size_t j = layout.measurement_index(key.measurement);
    add_hermitian_functional(prog.sdp.objective, builder.block(layout.preparation_index(key.preparation)),
                             builder.probability_functional(j, key.outcome), w);
  }
  OuterBoundResult out;
  out.report = solve_sdp(prog.sdp, settings);
  if (out.report.status == SolveStatus::kInfeasible) throw InfeasibleConstraints("level-1 program is infeasible under the declared equivalences");
  if (out.report.status != SolveStatus::kOptimal) {
    throw SolverError(std::string("level-1 SDP failed: ") + to_string(out.report.status) + " (" + out.report.message + ")");
  }
  builder.extract(out.report);
  out.bound = out.report.value;
  out.program = prog;
  return out;
}

SolveStatus outer_feasibility(const TaskSpec& task, const Behavior& behavior,
                              const std::vector<PreparationEquivalence>& prep_equivalences,
                              const std::vector<EffectEquivalence>& effect_equivalences, const SolverSettings& settings) {
  ProgramBuilder builder(task, prep_equivalences, effect_equivalences);
  const TaskLayout& layout = builder.layout();
  MomentMatrixProgram& prog = builder.program();
  for (std::size_t i = 0; i < layout.preparations().size(); ++i) {
    for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
      for (int k : layout.outcomes(j)) {
        const double p = behavior.at({layout.preparations()[i], layout.measurements()[j], k});
        LinearForm form;
        add_hermitian_functional(form, builder.block(i), builder.probability_functional(j, k));
        prog.sdp.add_constraint(std::move(form), p, "pinned probability");
      }
    }
  }
  return solve_sdp(prog.sdp, settings).status;
}

std::pair<int, int> moment_size(const TaskSpec& task) {
  const TaskLayout layout(task);
  return {static_cast<int>(layout.preparations().size()), MonomialBasis::level_one(layout).size()};
}

nlohmann::json to_json(const MomentMatrixProgram& program) {
  nlohmann::json j;
  j["basis"] = program.basis.labels();
  nlohmann::json preps = nlohmann::json::array();
  for (const IndexSet& a : program.preparations) preps.push_back(a);
  j["preparations"] = preps;
  j["constraints"] = program.constraints;
  nlohmann::json red = nlohmann::json::array();
  for (Eigen::Index r = 0; r < program.reduction.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < program.reduction.cols(); ++c) row.push_back(program.reduction(r, c));
    red.push_back(row);
  }
  j["reduction"] = red;
  j["sdp"] = to_json(program.sdp);
  return j;
}

}  // namespace picomm
