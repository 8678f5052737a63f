#include "picomm/conic.hpp"

#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "conic_ipm.hpp"

namespace picomm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

namespace {

void copy_diagnostics(const detail::ConicResult& r, const SolverSettings& settings, SolveReport& out) {
  out.status = r.status;
  out.settings = settings;
  out.iterations = r.iterations;
  out.primal_residual = r.primal_residual;
  out.dual_residual = r.dual_residual;
  out.relative_gap = r.relative_gap;
  out.message = r.message;
  if (r.status == SolveStatus::kInfeasible) out.dual_ray = r.ray;
}

}  // namespace

void LinearProgram::validate() const {
  const Eigen::Index n = objective.size();
  if (eq_matrix.size() > 0 && eq_matrix.cols() != n) throw ConstraintViolation("equality matrix has wrong column count");
  if (eq_matrix.rows() != eq_rhs.size()) throw ConstraintViolation("equality rhs length mismatch");
  if (ineq_matrix.size() > 0 && ineq_matrix.cols() != n) throw ConstraintViolation("inequality matrix has wrong column count");
  if (ineq_matrix.rows() != ineq_rhs.size()) throw ConstraintViolation("inequality rhs length mismatch");
  if (static_cast<Eigen::Index>(ineq_sense.size()) != ineq_rhs.size()) throw ConstraintViolation("inequality sense length mismatch");
  if (!bounds.empty() && static_cast<Eigen::Index>(bounds.size()) != n) throw ConstraintViolation("bounds length mismatch");
  for (const VariableBound& b : bounds) {
    if (b.lower && b.upper && *b.lower > *b.upper) throw ConstraintViolation("variable lower bound exceeds upper bound");
  }
  if (!objective.allFinite() || !eq_matrix.allFinite() || !eq_rhs.allFinite() || !ineq_matrix.allFinite() || !ineq_rhs.allFinite()) {
    throw ConstraintViolation("linear program contains non-finite data");
  }
}

SolveReport solve_lp(const LinearProgram& lp, const SolverSettings& settings) {
  lp.validate();
  const Eigen::Index n = lp.variable_count();
  const Eigen::Index n_eq = lp.eq_rhs.size();
  const Eigen::Index n_in = lp.ineq_rhs.size();

  // x = shift + T s with s >= 0.
  VectorXd shift = VectorXd::Zero(n);
  std::vector<std::tuple<Eigen::Index, int, double>> t_entries;  // (x index, s column, coefficient)
  std::vector<std::pair<int, double>> range_rows;                // (s column, width) for two-sided bounds
  int cols = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const VariableBound b = lp.bounds.empty() ? VariableBound{} : lp.bounds[static_cast<std::size_t>(j)];
    if (b.lower) {
      shift(j) = *b.lower;
      t_entries.emplace_back(j, cols, 1.0);
      if (b.upper) range_rows.emplace_back(cols, *b.upper - *b.lower);
      ++cols;
    } else if (b.upper) {
      shift(j) = *b.upper;
      t_entries.emplace_back(j, cols++, -1.0);
    } else {
      t_entries.emplace_back(j, cols++, 1.0);
      t_entries.emplace_back(j, cols++, -1.0);
    }
  }
  const int structural = cols;
  const int slack_in = static_cast<int>(n_in);
  const int slack_range = static_cast<int>(range_rows.size());
  const int total = structural + slack_in + slack_range;

  MatrixXd T = MatrixXd::Zero(n, structural);
  for (const auto& [j, c, v] : t_entries) T(j, c) = v;

  const Eigen::Index rows = n_eq + n_in + slack_range;
  detail::ConicData data;
  data.lp_dim = total;
  data.lp_matrix = MatrixXd::Zero(rows, total);
  data.b = VectorXd::Zero(rows);
  data.psd_rows.resize(static_cast<std::size_t>(rows));
  if (n_eq > 0) {
    data.lp_matrix.block(0, 0, n_eq, structural) = lp.eq_matrix * T;
    data.b.head(n_eq) = lp.eq_rhs - lp.eq_matrix * shift;
  }
  for (Eigen::Index i = 0; i < n_in; ++i) {
    data.lp_matrix.block(n_eq + i, 0, 1, structural) = lp.ineq_matrix.row(i) * T;
    data.lp_matrix(n_eq + i, structural + i) = lp.ineq_sense[static_cast<std::size_t>(i)] == RowSense::kLessEqual ? 1.0 : -1.0;
    data.b(n_eq + i) = lp.ineq_rhs(i) - lp.ineq_matrix.row(i).dot(shift);
  }
  for (int r = 0; r < slack_range; ++r) {
    const Eigen::Index row = n_eq + n_in + r;
    data.lp_matrix(row, range_rows[static_cast<std::size_t>(r)].first) = 1.0;
    data.lp_matrix(row, structural + slack_in + r) = 1.0;
    data.b(row) = range_rows[static_cast<std::size_t>(r)].second;
  }
  const double sign = lp.sense == ObjectiveSense::kMinimize ? 1.0 : -1.0;
  data.c_lp = VectorXd::Zero(total);
  data.c_lp.head(structural) = sign * (T.transpose() * lp.objective);

  const detail::ConicResult r = detail::solve_conic(data, settings);
  SolveReport out;
  copy_diagnostics(r, settings, out);
  out.primal = shift + T * r.x_lp.head(structural);
  out.dual = sign * r.y.head(n_eq + n_in);
  if (r.status == SolveStatus::kOptimal) out.value = lp.objective.dot(out.primal);
  return out;
}

void SemidefiniteProgram::validate() const {
  for (int n : block_sizes)
    if (n < 1) throw ConstraintViolation("matrix block sizes must be positive");
  if (scalar_count < 0) throw ConstraintViolation("negative scalar count");
  if (rhs.size() != constraints.size()) throw ConstraintViolation("constraint / rhs length mismatch");
  auto check = [&](const LinearForm& f, const std::string& where) {
    for (const EntryTerm& t : f.entries) {
      if (t.block < 0 || t.block >= static_cast<int>(block_sizes.size())) {
        throw ConstraintViolation(where + " references undeclared block " + std::to_string(t.block));
      }
      const int n = block_sizes[static_cast<std::size_t>(t.block)];
      if (t.row < 0 || t.col < 0 || t.row >= n || t.col >= n) {
        throw ConstraintViolation(where + " references entry outside block " + std::to_string(t.block));
      }
      if (!std::isfinite(t.coeff)) throw ConstraintViolation(where + " has a non-finite coefficient");
    }
    for (const auto& [i, c] : f.scalars) {
      if (i < 0 || i >= scalar_count) throw ConstraintViolation(where + " references undeclared scalar " + std::to_string(i));
      if (!std::isfinite(c)) throw ConstraintViolation(where + " has a non-finite coefficient");
    }
  };
  check(objective, "objective");
  for (std::size_t i = 0; i < constraints.size(); ++i) check(constraints[i], "constraint " + std::to_string(i));
}

SolveReport solve_sdp(const SemidefiniteProgram& sdp, const SolverSettings& settings) {
  sdp.validate();
  const double sign = sdp.sense == ObjectiveSense::kMinimize ? 1.0 : -1.0;
  detail::ConicData data;
  data.lp_dim = sdp.scalar_count;
  data.psd_sizes = sdp.block_sizes;
  data.c_lp = VectorXd::Zero(sdp.scalar_count);
  for (int n : sdp.block_sizes) data.c_psd.push_back(MatrixXd::Zero(n, n));
  for (const EntryTerm& t : sdp.objective.entries) {
    MatrixXd& C = data.c_psd[static_cast<std::size_t>(t.block)];
    if (t.row == t.col) {
      C(t.row, t.row) += sign * t.coeff;
    } else {
      C(t.row, t.col) += sign * t.coeff / 2.0;
      C(t.col, t.row) += sign * t.coeff / 2.0;
    }
  }
  for (const auto& [i, c] : sdp.objective.scalars) data.c_lp(i) += sign * c;

  const auto m = static_cast<Eigen::Index>(sdp.constraints.size());
  data.b = VectorXd::Map(sdp.rhs.data(), m);
  data.lp_matrix = MatrixXd::Zero(m, sdp.scalar_count);
  data.psd_rows.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const LinearForm& f = sdp.constraints[static_cast<std::size_t>(i)];
    std::map<std::tuple<int, int, int>, double> merged;
    for (const EntryTerm& t : f.entries) {
      const int r = std::min(t.row, t.col);
      const int c = std::max(t.row, t.col);
      merged[{t.block, r, c}] += r == c ? t.coeff : t.coeff / 2.0;
    }
    for (const auto& [key, v] : merged) {
      if (v != 0.0) data.psd_rows[static_cast<std::size_t>(i)].push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v});
    }
    for (const auto& [s, c] : f.scalars) data.lp_matrix(i, s) += c;
  }

  const detail::ConicResult r = detail::solve_conic(data, settings);
  SolveReport out;
  copy_diagnostics(r, settings, out);
  out.primal = r.x_lp;
  out.blocks = r.x_psd;
  out.dual = sign * r.y;
  if (r.status == SolveStatus::kOptimal) out.value = sign * r.primal_objective + sdp.objective_constant;
  return out;
}

MatrixXd hermitian_embed(const CMatrix& h, double tolerance) {
  if (h.rows() != h.cols()) throw ShapeError("hermitian_embed expects a square matrix");
  if (h.size() > 0 && (h - h.adjoint()).cwiseAbs().maxCoeff() > tolerance) {
    throw ModelValidationError("hermitian_embed received a non-Hermitian matrix");
  }
  const Eigen::Index d = h.rows();
  MatrixXd out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = h.real();
  out.topRightCorner(d, d) = -h.imag();
  out.bottomLeftCorner(d, d) = h.imag();
  out.bottomRightCorner(d, d) = h.real();
  return out;
}

CMatrix hermitian_extract(const MatrixXd& y) {
  if (y.rows() != y.cols() || y.rows() % 2 != 0) throw ShapeError("hermitian_extract expects an even square matrix");
  const Eigen::Index d = y.rows() / 2;
  CMatrix h(d, d);
  h.real() = (y.topLeftCorner(d, d) + y.bottomRightCorner(d, d)) / 2.0;
  h.imag() = (y.bottomLeftCorner(d, d) - y.topRightCorner(d, d)) / 2.0;
  return (h + h.adjoint()) / 2.0;
}

void add_hermitian_functional(LinearForm& form, int block, const CMatrix& c, double scale) {
  const Eigen::Index d = c.rows();
  MatrixXd e(2 * d, 2 * d);
  e.topLeftCorner(d, d) = c.real();
  e.topRightCorner(d, d) = -c.imag();
  e.bottomLeftCorner(d, d) = c.imag();
  e.bottomRightCorner(d, d) = c.real();
  const Eigen::Index n = 2 * d;
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index row = 0; row <= col; ++row) {
      const double v = row == col ? e(row, row) : e(row, col) + e(col, row);
      if (v != 0.0) form.add(block, static_cast<int>(row), static_cast<int>(col), scale * v / 2.0);
    }
  }
}

CMatrix entry_selector(int d, int p, int q, bool imaginary) {
  CMatrix c = CMatrix::Zero(d, d);
  if (p == q) {
    if (imaginary) throw ConstraintViolation("diagonal entries of a Hermitian matrix have no imaginary part");
    c(p, p) = 1.0;
  } else if (imaginary) {
    c(p, q) = Complex(0.0, 0.5);
    c(q, p) = Complex(0.0, -0.5);
  } else {
    c(p, q) = 0.5;
    c(q, p) = 0.5;
  }
  return c;
}

void add_hermitian_equality(SemidefiniteProgram& sdp, const std::vector<std::pair<int, double>>& terms, const CMatrix& rhs,
                            const std::string& label) {
  const int d = static_cast<int>(rhs.rows());
  for (int p = 0; p < d; ++p) {
    for (int q = p; q < d; ++q) {
      for (const bool imaginary : {false, true}) {
        if (p == q && imaginary) continue;
        const CMatrix sel = entry_selector(d, p, q, imaginary);
        LinearForm form;
        for (const auto& [block, coeff] : terms) add_hermitian_functional(form, block, sel, coeff);
        const double value = imaginary ? rhs(p, q).imag() : rhs(p, q).real();
        std::string name;
        if (!label.empty()) name = label + (imaginary ? " Im(" : " Re(") + std::to_string(p) + "," + std::to_string(q) + ")";
        sdp.add_constraint(std::move(form), value, std::move(name));
      }
    }
  }
}

namespace {

nlohmann::json matrix_json(const MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index cols) {
  MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols) throw ShapeError("ragged matrix in program dump");
    for (Eigen::Index c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(i), c) = j[i][static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

VectorXd vector_from_json(const nlohmann::json& j) {
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

nlohmann::json form_json(const LinearForm& f) {
  nlohmann::json entries = nlohmann::json::array();
  for (const EntryTerm& t : f.entries) entries.push_back({t.block, t.row, t.col, t.coeff});
  nlohmann::json scalars = nlohmann::json::array();
  for (const auto& [i, c] : f.scalars) scalars.push_back({i, c});
  return {{"entries", entries}, {"scalars", scalars}};
}

LinearForm form_from_json(const nlohmann::json& j) {
  LinearForm f;
  for (const auto& e : j.at("entries")) f.add(e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<double>());
  for (const auto& s : j.at("scalars")) f.add_scalar(s[0].get<int>(), s[1].get<double>());
  return f;
}

const char* sense_name(ObjectiveSense s) { return s == ObjectiveSense::kMinimize ? "minimize" : "maximize"; }

ObjectiveSense sense_from(const std::string& s) {
  if (s == "minimize") return ObjectiveSense::kMinimize;
  if (s == "maximize") return ObjectiveSense::kMaximize;
  throw ConstraintViolation("unknown objective sense '" + s + "'");
}

}  // namespace

nlohmann::json to_json(const LinearProgram& lp) {
  nlohmann::json j;
  j["kind"] = "lp";
  j["sense"] = sense_name(lp.sense);
  j["objective"] = std::vector<double>(lp.objective.data(), lp.objective.data() + lp.objective.size());
  j["eq_matrix"] = matrix_json(lp.eq_matrix);
  j["eq_rhs"] = std::vector<double>(lp.eq_rhs.data(), lp.eq_rhs.data() + lp.eq_rhs.size());
  j["ineq_matrix"] = matrix_json(lp.ineq_matrix);
  j["ineq_rhs"] = std::vector<double>(lp.ineq_rhs.data(), lp.ineq_rhs.data() + lp.ineq_rhs.size());
  nlohmann::json senses = nlohmann::json::array();
  for (RowSense s : lp.ineq_sense) senses.push_back(s == RowSense::kLessEqual ? "<=" : ">=");
  j["ineq_sense"] = senses;
  nlohmann::json bounds = nlohmann::json::array();
  for (const VariableBound& b : lp.bounds) {
    bounds.push_back({b.lower ? nlohmann::json(*b.lower) : nlohmann::json(nullptr), b.upper ? nlohmann::json(*b.upper) : nlohmann::json(nullptr)});
  }
  j["bounds"] = bounds;
  return j;
}

LinearProgram linear_program_from_json(const nlohmann::json& j) {
  LinearProgram lp;
  lp.sense = sense_from(j.at("sense").get<std::string>());
  lp.objective = vector_from_json(j.at("objective"));
  const Eigen::Index n = lp.objective.size();
  lp.eq_matrix = matrix_from_json(j.at("eq_matrix"), n);
  lp.eq_rhs = vector_from_json(j.at("eq_rhs"));
  lp.ineq_matrix = matrix_from_json(j.at("ineq_matrix"), n);
  lp.ineq_rhs = vector_from_json(j.at("ineq_rhs"));
  for (const auto& s : j.at("ineq_sense")) {
    const std::string v = s.get<std::string>();
    if (v != "<=" && v != ">=") throw ConstraintViolation("unknown row sense '" + v + "'");
    lp.ineq_sense.push_back(v == "<=" ? RowSense::kLessEqual : RowSense::kGreaterEqual);
  }
  for (const auto& b : j.at("bounds")) {
    VariableBound vb;
    vb.lower = b[0].is_null() ? std::nullopt : std::optional<double>(b[0].get<double>());
    vb.upper = b[1].is_null() ? std::nullopt : std::optional<double>(b[1].get<double>());
    lp.bounds.push_back(vb);
  }
  lp.validate();
  return lp;
}

nlohmann::json to_json(const SemidefiniteProgram& sdp) {
  nlohmann::json j;
  j["kind"] = "sdp";
  j["sense"] = sense_name(sdp.sense);
  j["block_sizes"] = sdp.block_sizes;
  j["scalar_count"] = sdp.scalar_count;
  j["objective"] = form_json(sdp.objective);
  j["objective_constant"] = sdp.objective_constant;
  nlohmann::json cons = nlohmann::json::array();
  for (std::size_t i = 0; i < sdp.constraints.size(); ++i) {
    nlohmann::json c = form_json(sdp.constraints[i]);
    c["rhs"] = sdp.rhs[i];
    if (i < sdp.constraint_labels.size() && !sdp.constraint_labels[i].empty()) c["label"] = sdp.constraint_labels[i];
    cons.push_back(c);
  }
  j["constraints"] = cons;
  return j;
}

SemidefiniteProgram semidefinite_program_from_json(const nlohmann::json& j) {
  SemidefiniteProgram sdp;
  sdp.sense = sense_from(j.at("sense").get<std::string>());
  sdp.block_sizes = j.at("block_sizes").get<std::vector<int>>();
  sdp.scalar_count = j.at("scalar_count").get<int>();
  sdp.objective = form_from_json(j.at("objective"));
  sdp.objective_constant = j.value("objective_constant", 0.0);
  for (const auto& c : j.at("constraints")) {
    sdp.add_constraint(form_from_json(c), c.at("rhs").get<double>(), c.value("label", std::string{}));
  }
  sdp.validate();
  return sdp;
}

}  // namespace picomm
