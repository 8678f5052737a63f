#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include <picomm/conic.hpp>
#include <picomm/quantum.hpp>

#include "test_support.hpp"

using namespace picomm;
using doctest::Approx;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

LinearProgram single_variable(ObjectiveSense sense, double rhs, RowSense row) {
  LinearProgram lp;
  lp.sense = sense;
  lp.objective = VectorXd::Ones(1);
  lp.ineq_matrix = MatrixXd::Ones(1, 1);
  lp.ineq_rhs = VectorXd::Constant(1, rhs);
  lp.ineq_sense = {row};
  return lp;
}

/// min c^T x, A x = b, x >= 0 by trying every basis.
double basis_oracle(const MatrixXd& A, const VectorXd& b, const VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(n), 0);
  std::fill(pick.end() - m, pick.end(), 1);
  do {
    MatrixXd B(m, m);
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (pick[static_cast<std::size_t>(j)]) cols.push_back(j);
    for (int k = 0; k < m; ++k) B.col(k) = A.col(cols[static_cast<std::size_t>(k)]);
    Eigen::FullPivLU<MatrixXd> lu(B);
    if (lu.rank() < m) continue;
    const VectorXd xb = lu.solve(b);
    if (xb.minCoeff() < -1e-12) continue;
    double value = 0.0;
    for (int k = 0; k < m; ++k) value += c(cols[static_cast<std::size_t>(k)]) * xb(k);
    best = std::min(best, value);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return (a + a.transpose()) / 2;
}

/// max tr(C X) (or min) subject to tr X = 1, X PSD.
SemidefiniteProgram eigenvalue_sdp(const MatrixXd& c, ObjectiveSense sense) {
  SemidefiniteProgram sdp;
  sdp.sense = sense;
  const int n = static_cast<int>(c.rows());
  const int blk = sdp.add_block(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sdp.objective.add(blk, i, j, c(i, j));
  LinearForm trace;
  for (int i = 0; i < n; ++i) trace.add(blk, i, i, 1.0);
  sdp.add_constraint(trace, 1.0, "trace");
  return sdp;
}

}  // namespace

TEST_CASE("basic LP outcomes") {
  const SolveReport opt = solve_lp(single_variable(ObjectiveSense::kMaximize, 1.0, RowSense::kLessEqual));
  CHECK(opt.status == SolveStatus::kOptimal);
  CHECK(opt.value == Approx(1.0).epsilon(1e-7));

  const SolveReport inf = solve_lp(single_variable(ObjectiveSense::kMinimize, -1.0, RowSense::kLessEqual));
  CHECK(inf.status == SolveStatus::kInfeasible);
  CHECK(inf.dual_ray.size() > 0);

  const SolveReport unb = solve_lp(single_variable(ObjectiveSense::kMaximize, 1.0, RowSense::kGreaterEqual));
  CHECK(unb.status == SolveStatus::kUnbounded);
  CHECK(std::string(to_string(unb.status)) == "unbounded");
}

TEST_CASE("LP variable bounds") {
  LinearProgram lp;
  lp.sense = ObjectiveSense::kMinimize;
  lp.objective = VectorXd::Ones(3);
  lp.bounds = {VariableBound{std::nullopt, std::nullopt}, VariableBound{-2.0, 5.0}, VariableBound{std::nullopt, 4.0}};
  lp.eq_matrix = MatrixXd::Zero(1, 3);
  lp.eq_matrix(0, 0) = 1.0;
  lp.eq_rhs = VectorXd::Constant(1, -3.0);
  lp.ineq_matrix = MatrixXd::Zero(1, 3);
  lp.ineq_matrix(0, 2) = 1.0;
  lp.ineq_rhs = VectorXd::Constant(1, 1.5);
  lp.ineq_sense = {RowSense::kGreaterEqual};
  const SolveReport r = solve_lp(lp);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.value == Approx(-3.0 - 2.0 + 1.5).epsilon(1e-7));
  CHECK(r.primal(0) == Approx(-3.0).epsilon(1e-7));
  CHECK(r.primal(1) == Approx(-2.0).epsilon(1e-7));
  CHECK(r.primal(2) == Approx(1.5).epsilon(1e-7));

  LinearProgram broken = lp;
  broken.eq_rhs = VectorXd::Zero(2);
  CHECK_THROWS_AS(solve_lp(broken), ConstraintViolation);
}

TEST_CASE("random LPs match the basis oracle and satisfy strong duality") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + trial % 3, n = m + 3;
    MatrixXd A(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = u(rng) - 0.3;
    VectorXd x0(n);
    for (int j = 0; j < n; ++j) x0(j) = u(rng);
    const VectorXd b = A * x0;
    VectorXd c(n);
    for (int j = 0; j < n; ++j) c(j) = u(rng) + 0.1;

    LinearProgram lp;
    lp.objective = c;
    lp.eq_matrix = A;
    lp.eq_rhs = b;
    const SolveReport r = solve_lp(lp);
    REQUIRE(r.status == SolveStatus::kOptimal);
    ++solved;
    const double oracle = basis_oracle(A, b, c);
    CHECK(r.value == Approx(oracle).epsilon(1e-6));
    CHECK(b.dot(r.dual) == Approx(r.value).epsilon(1e-6));
    CHECK((A.transpose() * r.dual - c).maxCoeff() <= 1e-6);
    CHECK((A * r.primal - b).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK(r.primal.minCoeff() >= -1e-8);
  }
  CHECK(solved == 40);
}

TEST_CASE("trace-one SDP") {
  SemidefiniteProgram sdp;
  const int blk = sdp.add_block(2);
  sdp.objective.add(blk, 0, 0, 1.0);
  sdp.objective.add(blk, 1, 1, 1.0);
  LinearForm f;
  f.add(blk, 0, 0, 1.0);
  f.add(blk, 1, 1, 1.0);
  sdp.add_constraint(f, 1.0);
  const SolveReport r = solve_sdp(sdp);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.value == Approx(1.0).epsilon(1e-7));
  REQUIRE(r.blocks.size() == 1);
  CHECK(r.blocks[0].selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("SDP extreme eigenvalues match the dense eigensolver") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 6;
    const MatrixXd c = random_symmetric(n, rng);
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(c);
    const SolveReport hi = solve_sdp(eigenvalue_sdp(c, ObjectiveSense::kMaximize));
    const SolveReport lo = solve_sdp(eigenvalue_sdp(c, ObjectiveSense::kMinimize));
    REQUIRE(hi.status == SolveStatus::kOptimal);
    REQUIRE(lo.status == SolveStatus::kOptimal);
    CHECK(hi.value == Approx(eig.eigenvalues().maxCoeff()).epsilon(1e-6));
    CHECK(lo.value == Approx(eig.eigenvalues().minCoeff()).epsilon(1e-6));
    CHECK(hi.primal_residual < 1e-7);
  }
}

TEST_CASE("infeasible SDP and validation") {
  SemidefiniteProgram sdp;
  const int blk = sdp.add_block(2);
  sdp.objective.add(blk, 0, 0, 1.0);
  LinearForm f;
  f.add(blk, 1, 1, 1.0);
  sdp.add_constraint(f, -1.0);
  CHECK(solve_sdp(sdp).status == SolveStatus::kInfeasible);

  SemidefiniteProgram bad;
  bad.add_block(2);
  LinearForm g;
  g.add(0, 2, 0, 1.0);
  bad.add_constraint(g, 1.0);
  CHECK_THROWS_AS(bad.validate(), ConstraintViolation);
}

TEST_CASE("SDP with scalar variables") {
  // max s0 s.t. s0 + X_00 = 2, X_11 = 1: optimum s0 = 2 with X_00 = 0.
  SemidefiniteProgram sdp;
  const int blk = sdp.add_block(2);
  sdp.scalar_count = 1;
  sdp.objective.add_scalar(0, 1.0);
  LinearForm f;
  f.add_scalar(0, 1.0);
  f.add(blk, 0, 0, 1.0);
  sdp.add_constraint(f, 2.0);
  LinearForm g;
  g.add(blk, 1, 1, 1.0);
  sdp.add_constraint(g, 1.0);
  const SolveReport r = solve_sdp(sdp);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.value == Approx(2.0).epsilon(1e-6));
  CHECK(r.primal(0) == Approx(2.0).epsilon(1e-6));
}

TEST_CASE("hermitian embedding") {
  CHECK(hermitian_embed(CMatrix::Identity(2, 2)).isApprox(MatrixXd::Identity(4, 4)));

  CMatrix y(2, 2);
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  const MatrixXd ey = hermitian_embed(y);
  CHECK((ey - ey.transpose()).norm() == Approx(0.0));
  const MatrixXd off = ey.topRightCorner(2, 2);
  CHECK((off + off.transpose()).norm() == Approx(0.0));
  CHECK(off.norm() > 1.0);
  CHECK(ey.topLeftCorner(2, 2).norm() == Approx(0.0));
  const VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(ey).eigenvalues();
  CHECK(ev(0) == Approx(-1.0));
  CHECK(ev(1) == Approx(-1.0));
  CHECK(ev(2) == Approx(1.0));
  CHECK(ev(3) == Approx(1.0));

  CMatrix nonherm(2, 2);
  nonherm << 1, 1, 0, 1;
  CHECK_THROWS_AS(hermitian_embed(nonherm), ModelValidationError);
}

TEST_CASE("embedding preserves spectra, traces and PSD-ness on random matrices") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 5;
    const CMatrix h = testing::random_hermitian(d, rng);
    const CMatrix e = testing::random_hermitian(d, rng);
    const MatrixXd eh = hermitian_embed(h);
    CHECK((eh - eh.transpose()).norm() == Approx(0.0));
    const VectorXd spec_h = Eigen::SelfAdjointEigenSolver<CMatrix>(h).eigenvalues();
    const VectorXd spec_e = Eigen::SelfAdjointEigenSolver<MatrixXd>(eh).eigenvalues();
    for (int i = 0; i < d; ++i) {
      CHECK(spec_e(2 * i) == Approx(spec_h(i)).epsilon(1e-9));
      CHECK(spec_e(2 * i + 1) == Approx(spec_h(i)).epsilon(1e-9));
    }
    CHECK((hermitian_embed(e) * eh).trace() / 2 == Approx((h * e).trace().real()).epsilon(1e-10));
    CHECK((hermitian_embed(2.0 * h + e) - (2.0 * eh + hermitian_embed(e))).norm() == Approx(0.0).scale(1.0));
    CHECK((hermitian_extract(eh) - h).norm() == Approx(0.0).scale(1.0));
    const CMatrix psd = h * h;
    CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(hermitian_embed(psd)).eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("measurement SDP over embedded blocks reproduces the trine value") {
  const auto states = testing::t31_trine_states();
  const TaskLayout layout(TaskSpec(3, 1));
  SemidefiniteProgram sdp;
  double expected = 0.0;
  for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
    const IndexSet& b = layout.measurements()[j];
    std::vector<int> blocks;
    for (std::size_t k = 0; k < layout.outcome_count(j); ++k) blocks.push_back(sdp.add_block(4));
    std::vector<std::pair<int, double>> terms;
    for (int blk : blocks) terms.emplace_back(blk, 1.0);
    add_hermitian_equality(sdp, terms, CMatrix::Identity(2, 2), "completeness");
    for (const ScenarioRow& row : layout.rows()) {
      if (row.b != b) continue;
      add_hermitian_functional(sdp.objective, blocks[layout.outcome_index(j, row.s)], states.at(row.a));
    }
    expected += 1.0 + std::sqrt(3.0) / 2;
  }
  const SolveReport r = solve_sdp(sdp);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.value == Approx(5.598076).epsilon(1e-6));
  CHECK(r.value == Approx(expected).epsilon(1e-7));
}

TEST_CASE("entry selectors pick the documented parts") {
  std::mt19937_64 rng(31);
  const CMatrix h = testing::random_hermitian(3, rng);
  CHECK((entry_selector(3, 1, 1, false) * h).trace().real() == Approx(h(1, 1).real()));
  CHECK((entry_selector(3, 0, 2, false) * h).trace().real() == Approx(h(0, 2).real()));
  CHECK((entry_selector(3, 0, 2, true) * h).trace().real() == Approx(h(0, 2).imag()));
}

TEST_CASE("program dumps replay to the same optimum") {
  LinearProgram lp = single_variable(ObjectiveSense::kMaximize, 3.0, RowSense::kLessEqual);
  lp.bounds = {VariableBound{std::nullopt, 2.5}};
  const LinearProgram lp_back = linear_program_from_json(nlohmann::json::parse(to_json(lp).dump()));
  CHECK(solve_lp(lp_back).value == Approx(solve_lp(lp).value));
  CHECK(solve_lp(lp).value == Approx(2.5).epsilon(1e-7));

  std::mt19937_64 rng(37);
  const SemidefiniteProgram sdp = eigenvalue_sdp(random_symmetric(4, rng), ObjectiveSense::kMaximize);
  const SemidefiniteProgram sdp_back = semidefinite_program_from_json(nlohmann::json::parse(to_json(sdp).dump()));
  CHECK(sdp_back.block_sizes == sdp.block_sizes);
  CHECK(sdp_back.rhs == sdp.rhs);
  CHECK(solve_sdp(sdp_back).value == Approx(solve_sdp(sdp).value).epsilon(1e-9));
}
