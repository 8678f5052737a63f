#include "picomm/contextuality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "picomm/serialization.hpp"

namespace picomm {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Shared row layout of the noncontextual model LP over nu(i, kappa), stored
/// at index i * V + kappa.
class NCProgram {
 public:
  NCProgram(const TaskLayout& layout, const VertexSet& vertices, const std::vector<PreparationEquivalence>& prep_equivalences)
      : layout_(layout), vertices_(vertices) {
    if (!(vertices.task == layout.task())) throw ConstraintViolation("vertex set belongs to a different task");
    P_ = layout.preparations().size();
    V_ = vertices.size();
    if (V_ == 0) throw InfeasibleConstraints("measurement-assignment polytope is empty");
    for (const PreparationEquivalence& eq : prep_equivalences) {
      validate_equivalence(eq, layout);
      std::vector<std::pair<std::size_t, double>> terms;
      for (const auto& [label, w] : signed_coefficients(eq))
        if (w != 0.0) terms.emplace_back(layout.preparation_index(label), w);
      equivalences_.push_back(std::move(terms));
    }
  }

  Eigen::Index variables() const { return static_cast<Eigen::Index>(P_ * V_); }
  Eigen::Index var(std::size_t i, std::size_t kappa) const { return static_cast<Eigen::Index>(i * V_ + kappa); }
  std::size_t preparations() const { return P_; }
  std::size_t vertex_count() const { return V_; }

  /// Normalization rows (one per preparation) followed by one equivalence row
  /// per (equivalence, vertex).
  void structural_rows(MatrixXd& A, VectorXd& b) const {
    const Eigen::Index rows = static_cast<Eigen::Index>(P_ + equivalences_.size() * V_);
    A = MatrixXd::Zero(rows, variables());
    b = VectorXd::Zero(rows);
    for (std::size_t i = 0; i < P_; ++i) {
      for (std::size_t k = 0; k < V_; ++k) A(static_cast<Eigen::Index>(i), var(i, k)) = 1.0;
      b(static_cast<Eigen::Index>(i)) = 1.0;
    }
    Eigen::Index r = static_cast<Eigen::Index>(P_);
    for (const auto& terms : equivalences_) {
      for (std::size_t k = 0; k < V_; ++k, ++r)
        for (const auto& [i, w] : terms) A(r, var(i, k)) += w;
    }
  }

  /// Coefficient vector of p(key) as a function of nu.
  VectorXd probability_row(const EventKey& key) const {
    const std::size_t i = layout_.preparation_index(key.preparation);
    const std::size_t c = vertices_.column({key.measurement, key.outcome});
    VectorXd row = VectorXd::Zero(variables());
    for (std::size_t k = 0; k < V_; ++k) row(var(i, k)) = vertices_.vertices[k](static_cast<Eigen::Index>(c));
    return row;
  }

  /// Every (preparation, measurement, outcome) except the last outcome of each
  /// measurement.
  std::vector<EventKey> data_events() const {
    std::vector<EventKey> keys;
    for (const IndexSet& a : layout_.preparations())
      for (std::size_t j = 0; j < layout_.measurements().size(); ++j) {
        const auto& outs = layout_.outcomes(j);
        for (std::size_t k = 0; k + 1 < outs.size(); ++k) keys.push_back({a, layout_.measurements()[j], outs[k]});
      }
    return keys;
  }

  NCModel model_from(const VectorXd& nu) const {
    NCModel m;
    m.preparations = layout_.preparations();
    m.weights = MatrixXd::Zero(static_cast<Eigen::Index>(P_), static_cast<Eigen::Index>(V_));
    for (std::size_t i = 0; i < P_; ++i)
      for (std::size_t k = 0; k < V_; ++k) m.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = std::max(0.0, nu(var(i, k)));
    return m;
  }

 private:
  const TaskLayout& layout_;
  const VertexSet& vertices_;
  std::size_t P_ = 0;
  std::size_t V_ = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> equivalences_;
};

std::string format_term(double c, const EventKey& key, int precision, bool first) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, std::abs(c));
  const std::string sign = c < 0 ? "-" : "+";
  return (first ? sign : " " + sign + " ") + buf + " p(" + std::to_string(key.outcome) + "|" + to_string(key.preparation) + "," + to_string(key.measurement) + ")";
}

}  // namespace

Behavior nc_behavior(const VertexSet& vertices, const NCModel& model) {
  if (model.weights.rows() != static_cast<Eigen::Index>(model.preparations.size()) ||
      model.weights.cols() != static_cast<Eigen::Index>(vertices.size()))
    throw ConstraintViolation("noncontextual model weights have the wrong shape");
  Behavior out;
  for (std::size_t i = 0; i < model.preparations.size(); ++i) {
    for (std::size_t c = 0; c < vertices.columns.size(); ++c) {
      double p = 0.0;
      for (std::size_t k = 0; k < vertices.size(); ++k)
        p += model.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * vertices.vertices[k](static_cast<Eigen::Index>(c));
      out.set({model.preparations[i], vertices.columns[c].measurement, vertices.columns[c].outcome}, p);
    }
  }
  return out;
}

void validate_nc_model(const NCModel& model, const VertexSet& vertices, const std::vector<PreparationEquivalence>& prep_equivalences,
                       double tolerance) {
  if (model.weights.rows() != static_cast<Eigen::Index>(model.preparations.size()) ||
      model.weights.cols() != static_cast<Eigen::Index>(vertices.size()))
    throw ConstraintViolation("noncontextual model weights have the wrong shape");
  if (model.weights.size() > 0 && model.weights.minCoeff() < -tolerance) throw ConstraintViolation("negative epistemic weight");
  for (Eigen::Index i = 0; i < model.weights.rows(); ++i)
    if (std::abs(model.weights.row(i).sum() - 1.0) > tolerance)
      throw ConstraintViolation("epistemic weights of " + to_string(model.preparations[static_cast<std::size_t>(i)]) + " do not sum to one");
  for (const PreparationEquivalence& eq : prep_equivalences) {
    Eigen::RowVectorXd combo = Eigen::RowVectorXd::Zero(model.weights.cols());
    for (const auto& [label, w] : signed_coefficients(eq)) {
      auto it = std::find(model.preparations.begin(), model.preparations.end(), label);
      if (it == model.preparations.end()) throw LookupError("model has no preparation " + to_string(label));
      combo += w * model.weights.row(it - model.preparations.begin());
    }
    if (combo.size() > 0 && combo.cwiseAbs().maxCoeff() > tolerance)
      throw ConstraintViolation("preparation equivalence violated at the ontological level");
  }
}

double nc_max(const TaskSpec& task, const SuccessMetric& metric, const VertexSet& vertices,
              const std::vector<PreparationEquivalence>& prep_equivalences, const SolverSettings& settings) {
  const TaskLayout layout(task);
  validate_metric(metric, layout);
  const NCProgram prog(layout, vertices, prep_equivalences);
  LinearProgram lp;
  lp.sense = ObjectiveSense::kMaximize;
  prog.structural_rows(lp.eq_matrix, lp.eq_rhs);
  lp.objective = VectorXd::Zero(prog.variables());
  for (const auto& [key, w] : metric.weights) lp.objective += w * prog.probability_row(key);
  lp.ineq_matrix = MatrixXd::Zero(0, prog.variables());
  lp.ineq_rhs = VectorXd::Zero(0);
  const SolveReport r = solve_lp(lp, settings);
  if (r.status == SolveStatus::kInfeasible) throw InfeasibleConstraints("no noncontextual model satisfies the preparation equivalences");
  if (r.status != SolveStatus::kOptimal) throw SolverError(std::string("noncontextual LP failed: ") + to_string(r.status) + " " + r.message);
  return r.value + metric.constant_offset;
}

std::string FarkasCertificate::inequality(int precision, double zero_tolerance) const {
  std::string out;
  for (const auto& [key, c] : coefficients) {
    if (std::abs(c) <= zero_tolerance || std::abs(c) < 0.5 * std::pow(10.0, -precision)) continue;
    out += format_term(c, key, precision, out.empty());
  }
  if (out.empty()) out = "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, " <= %.*f", precision, bound);
  return out + buf;
}

double FarkasCertificate::evaluate(const Behavior& behavior) const {
  double s = 0.0;
  for (const auto& [key, c] : coefficients) s += c * behavior.at(key);
  return s;
}

nlohmann::json to_json(const FarkasCertificate& certificate) {
  Json terms = Json::array();
  for (const auto& [key, c] : certificate.coefficients) {
    terms.push_back({{"preparation", label_to_json(key.preparation)},
                     {"measurement", label_to_json(key.measurement)},
                     {"outcome", key.outcome},
                     {"coefficient", c}});
  }
  return {{"coefficients", terms},
          {"bound", certificate.bound},
          {"achieved", certificate.achieved},
          {"ratio", certificate.ratio()},
          {"inequality", certificate.inequality()}};
}

FarkasCertificate certificate_from_json(const nlohmann::json& j) {
  FarkasCertificate c;
  for (const Json& t : j.at("coefficients")) {
    c.coefficients[{label_from_json(t.at("preparation")), label_from_json(t.at("measurement")), t.at("outcome").get<int>()}] =
        t.at("coefficient").get<double>();
  }
  c.bound = j.at("bound").get<double>();
  c.achieved = j.at("achieved").get<double>();
  return c;
}

NCFeasibility nc_feasibility(const Behavior& behavior, const VertexSet& vertices,
                             const std::vector<PreparationEquivalence>& prep_equivalences, const SolverSettings& settings,
                             double decision_tolerance) {
  behavior.validate();
  const TaskLayout layout(vertices.task);
  const NCProgram prog(layout, vertices, prep_equivalences);
  const std::vector<EventKey> data = prog.data_events();
  const Eigen::Index nv = prog.variables();
  const Eigen::Index P = static_cast<Eigen::Index>(prog.preparations());

  // Dual form of the normalized Farkas program:
  //   max t - sum(s+ + s-)   s.t.  M nu + t u - s+ + s- = b*,  nu, s >= 0,
  // where u marks the normalization rows. Without the elastic s columns this
  // is exactly the dual of min b*^T y s.t. M^T y >= 0, u^T y = 1; with them
  // it is the box-constrained variant. The multipliers y are the row duals.
  auto solve_farkas = [&](bool box) {
    MatrixXd S;
    VectorXd b_struct;
    prog.structural_rows(S, b_struct);
    const Eigen::Index rows = S.rows() + static_cast<Eigen::Index>(data.size());
    const Eigen::Index elastic = box ? 2 * rows : 0;
    LinearProgram lp;
    lp.sense = ObjectiveSense::kMaximize;
    lp.eq_matrix = MatrixXd::Zero(rows, nv + 1 + elastic);
    lp.eq_rhs = VectorXd::Zero(rows);
    lp.eq_matrix.topLeftCorner(S.rows(), nv) = S;
    lp.eq_rhs.head(S.rows()) = b_struct;
    for (std::size_t d = 0; d < data.size(); ++d) {
      const Eigen::Index r = S.rows() + static_cast<Eigen::Index>(d);
      lp.eq_matrix.block(r, 0, 1, nv) = prog.probability_row(data[d]).transpose();
      lp.eq_rhs(r) = behavior.at(data[d]);
    }
    lp.eq_matrix.block(0, nv, P, 1).setOnes();
    lp.objective = VectorXd::Zero(nv + 1 + elastic);
    lp.objective(nv) = 1.0;
    lp.bounds.assign(static_cast<std::size_t>(nv + 1 + elastic), VariableBound{});
    lp.bounds[static_cast<std::size_t>(nv)] = VariableBound{std::nullopt, 1.0};
    for (Eigen::Index r = 0; r < elastic / 2; ++r) {
      lp.eq_matrix(r, nv + 1 + 2 * r) = -1.0;
      lp.eq_matrix(r, nv + 2 + 2 * r) = 1.0;
      lp.objective(nv + 1 + 2 * r) = -1.0;
      lp.objective(nv + 2 + 2 * r) = -1.0;
    }
    lp.ineq_matrix = MatrixXd::Zero(0, nv + 1 + elastic);
    lp.ineq_rhs = VectorXd::Zero(0);
    return solve_lp(lp, settings);
  };

  SolveReport farkas = solve_farkas(false);
  if (farkas.status == SolveStatus::kInfeasible) farkas = solve_farkas(true);
  if (farkas.status != SolveStatus::kOptimal)
    throw SolverError(std::string("Farkas program failed: ") + to_string(farkas.status) + " " + farkas.message);

  NCFeasibility out;
  out.farkas_value = farkas.value;
  if (farkas.value < -decision_tolerance) {
    const VectorXd& y = farkas.dual;
    const Eigen::Index data_offset = y.size() - static_cast<Eigen::Index>(data.size());
    FarkasCertificate cert;
    double constant = y.head(P).sum();
    double scale = constant > 0.0 ? 1.0 / constant : 1.0;
    for (std::size_t d = 0; d < data.size(); ++d) cert.coefficients[data[d]] = -scale * y(data_offset + static_cast<Eigen::Index>(d));
    cert.bound = scale * constant;
    cert.achieved = cert.evaluate(behavior);
    out.certificate = std::move(cert);
    return out;
  }

  // Feasible: recover a model from the pinned primal system.
  LinearProgram lp;
  prog.structural_rows(lp.eq_matrix, lp.eq_rhs);
  const Eigen::Index base = lp.eq_matrix.rows();
  lp.eq_matrix.conservativeResize(base + static_cast<Eigen::Index>(data.size()), Eigen::NoChange);
  lp.eq_rhs.conservativeResize(base + static_cast<Eigen::Index>(data.size()));
  for (std::size_t d = 0; d < data.size(); ++d) {
    lp.eq_matrix.row(base + static_cast<Eigen::Index>(d)) = prog.probability_row(data[d]).transpose();
    lp.eq_rhs(base + static_cast<Eigen::Index>(d)) = behavior.at(data[d]);
  }
  lp.objective = VectorXd::Zero(nv);
  lp.ineq_matrix = MatrixXd::Zero(0, nv);
  lp.ineq_rhs = VectorXd::Zero(0);
  const SolveReport primal = solve_lp(lp, settings);
  out.feasible = true;
  if (primal.status == SolveStatus::kOptimal) out.model = prog.model_from(primal.primal);
  return out;
}

double behavior_lp_bound(const TaskSpec& task, const SuccessMetric& metric,
                         const std::vector<PreparationEquivalence>& prep_equivalences, const SolverSettings& settings) {
  const TaskLayout layout(task);
  validate_metric(metric, layout);
  std::map<EventKey, Eigen::Index> index;
  std::vector<std::vector<Eigen::Index>> pairs;
  for (const IndexSet& a : layout.preparations())
    for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
      pairs.emplace_back();
      for (int k : layout.outcomes(j)) {
        const Eigen::Index v = static_cast<Eigen::Index>(index.size());
        index[{a, layout.measurements()[j], k}] = v;
        pairs.back().push_back(v);
      }
    }
  const Eigen::Index n = static_cast<Eigen::Index>(index.size());

  std::vector<VectorXd> rows;
  std::vector<double> rhs;
  for (const auto& group : pairs) {
    VectorXd r = VectorXd::Zero(n);
    for (Eigen::Index v : group) r(v) = 1.0;
    rows.push_back(r);
    rhs.push_back(1.0);
  }
  for (const PreparationEquivalence& eq : prep_equivalences) {
    validate_equivalence(eq, layout);
    const auto coeffs = signed_coefficients(eq);
    for (std::size_t j = 0; j < layout.measurements().size(); ++j)
      for (int k : layout.outcomes(j)) {
        VectorXd r = VectorXd::Zero(n);
        for (const auto& [label, w] : coeffs) r(index.at({label, layout.measurements()[j], k})) += w;
        rows.push_back(r);
        rhs.push_back(0.0);
      }
  }

  LinearProgram lp;
  lp.sense = ObjectiveSense::kMaximize;
  lp.eq_matrix = MatrixXd(static_cast<Eigen::Index>(rows.size()), n);
  lp.eq_rhs = VectorXd(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    lp.eq_matrix.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    lp.eq_rhs(static_cast<Eigen::Index>(r)) = rhs[r];
  }
  lp.objective = VectorXd::Zero(n);
  for (const auto& [key, w] : metric.weights) lp.objective(index.at(key)) += w;
  lp.ineq_matrix = MatrixXd::Zero(0, n);
  lp.ineq_rhs = VectorXd::Zero(0);
  const SolveReport r = solve_lp(lp, settings);
  if (r.status == SolveStatus::kInfeasible) throw InfeasibleConstraints("no behaviour satisfies the preparation equivalences");
  if (r.status != SolveStatus::kOptimal) throw SolverError(std::string("behaviour LP failed: ") + to_string(r.status) + " " + r.message);
  return r.value + metric.constant_offset;
}

}  // namespace picomm
