#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <picomm/hierarchy.hpp>

#include "test_support.hpp"

using namespace picomm;
using doctest::Approx;

namespace {

void check_moments(const MomentMatrixProgram& program) {
  REQUIRE(program.moments.size() == program.preparations.size());
  for (const CMatrix& g : program.moments) {
    CHECK(g.rows() == program.basis.size());
    for (int i = 0; i < g.rows(); ++i) CHECK(std::abs(g(i, i) - 1.0) < 1e-7);
    CHECK((g - g.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(Eigen::SelfAdjointEigenSolver<CMatrix>(g).eigenvalues().minCoeff() > -1e-7);
  }
}

}  // namespace

TEST_CASE("moment matrix sizes") {
  CHECK(moment_size(TaskSpec(4, 1)) == std::pair{4, 13});
  CHECK(moment_size(TaskSpec(3, 1)) == std::pair{3, 7});
  CHECK(moment_size(TaskSpec(4, 2)) == std::pair{6, 25});
  const MonomialBasis basis = MonomialBasis::level_one(TaskLayout(TaskSpec(4, 2)));
  CHECK(basis.size() == 25);
  CHECK(basis.labels().size() == 25);
  CHECK(basis.position(0, false) == 1);
  CHECK(basis.position(0, true) == 2);
}

TEST_CASE("contextual T41 bound") {
  const OuterBoundResult r = outer_bound_u1(TaskSpec(4, 1), signed_metric_t41(), {t41_preparation_equivalence()}, {});
  CHECK(r.bound == Approx(4.828427123).epsilon(1e-6 / 4.83));
  CHECK(r.bound == Approx(2.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-8));
  CHECK(r.report.status == SolveStatus::kOptimal);
  CHECK(r.report.primal_residual < 1e-7);
  check_moments(r.program);
  CHECK(!r.program.constraints.empty());
}

TEST_CASE("zero metric") {
  CHECK(outer_bound_u1(TaskSpec(3, 1), SuccessMetric{}, {}, {}).bound == Approx(0.0).scale(1.0));
  SuccessMetric offset;
  offset.constant_offset = 1.25;
  CHECK(outer_bound_u1(TaskSpec(4, 2), offset, {}, {}).bound == Approx(1.25));
}

TEST_CASE("canonical bounds dominate the qubit inner values") {
  const OuterBoundResult t31 = outer_bound_u1(TaskSpec(3, 1), canonical_metric(TaskSpec(3, 1)), {}, {});
  CHECK(t31.bound >= 5.598076 - 1e-6);
  CHECK(t31.bound == Approx(6.0).epsilon(1e-6));
  check_moments(t31.program);

  const OuterBoundResult t41 = outer_bound_u1(TaskSpec(4, 1), canonical_metric(TaskSpec(4, 1)), {}, {});
  CHECK(t41.bound == Approx(12.0).epsilon(1e-6));
  const OuterBoundResult t42 = outer_bound_u1(TaskSpec(4, 2), canonical_metric(TaskSpec(4, 2)), {}, {});
  CHECK(t42.bound == Approx(12.0).epsilon(1e-6));
  check_moments(t42.program);
}

TEST_CASE("contextual T42 bound is sound") {
  const OuterBoundResult r = outer_bound_u1(TaskSpec(4, 2), canonical_metric(TaskSpec(4, 2)), t42_preparation_equivalences(), {});
  CHECK(r.bound >= 8.0 - 1e-5);
  CHECK(r.bound <= 12.0 + 1e-6);
}

TEST_CASE("metric terms on last outcomes are rewritten") {
  const TaskSpec task(4, 1);
  const TaskLayout layout(task);
  const SuccessMetric metric = canonical_metric(task);
  const SuccessMetric reduced = eliminate_last_outcomes(metric, layout);
  CHECK(outer_bound_u1(task, metric, {t41_preparation_equivalence()}, {}).bound ==
        Approx(outer_bound_u1(task, reduced, {t41_preparation_equivalence()}, {}).bound).epsilon(1e-7));
}

TEST_CASE("behaviours of valid models are feasible") {
  std::mt19937_64 rng(59);
  for (auto [n, m, d] : {std::tuple{3, 1, 2}, std::tuple{4, 1, 3}, std::tuple{4, 2, 2}}) {
    const TaskSpec task(n, m);
    const QuantumModel model = random_model(task, d, rng);
    CHECK(outer_feasibility(task, behavior_of(model), {}, {}) == SolveStatus::kOptimal);
  }

  // Two antipodal qubit pairs satisfy the T41 equivalence.
  const TaskSpec t41(4, 1);
  QuantumModel model = random_model(t41, 2, rng);
  const CVector v = haar_vector(2, rng), x = haar_vector(2, rng);
  CVector w(2), y(2);
  w << -std::conj(v(1)), std::conj(v(0));
  y << -std::conj(x(1)), std::conj(x(0));
  model.states = {{{0}, projector(v)}, {{1}, projector(w)}, {{2}, projector(x)}, {{3}, projector(y)}};
  CHECK(outer_feasibility(t41, behavior_of(model), {t41_preparation_equivalence()}, {}) == SolveStatus::kOptimal);

  const QuantumModel generic = random_model(t41, 2, rng);
  CHECK(outer_feasibility(t41, behavior_of(generic), {t41_preparation_equivalence()}, {}) == SolveStatus::kInfeasible);
}

TEST_CASE("program dump") {
  const OuterBoundResult r = outer_bound_u1(TaskSpec(3, 1), canonical_metric(TaskSpec(3, 1)), {}, {});
  const nlohmann::json j = to_json(r.program);
  CHECK(j.contains("constraints"));
  CHECK(j.dump().find("nan") == std::string::npos);
}

TEST_CASE("bad labels are rejected") {
  SuccessMetric foreign;
  foreign.weights[{{0, 1}, {2}, 3}] = 1.0;
  CHECK_THROWS_AS(outer_bound_u1(TaskSpec(3, 1), foreign, {}, {}), LookupError);
  CHECK_THROWS_AS(outer_bound_u1(TaskSpec(3, 1), canonical_metric(TaskSpec(3, 1)), {t41_preparation_equivalence()}, {}), LookupError);
}
