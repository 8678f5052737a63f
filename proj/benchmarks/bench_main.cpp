#include <benchmark/benchmark.h>

#include <random>

#include <picomm/classical.hpp>
#include <picomm/contextuality.hpp>
#include <picomm/hierarchy.hpp>
#include <picomm/seesaw.hpp>

using namespace picomm;

namespace {

void BM_ClassicalT42(benchmark::State& state) {
  const TaskSpec task(4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_classical(task, 1).correct_count);
}
BENCHMARK(BM_ClassicalT42);

void BM_RandomLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::NullaryExpr(n, [&] { return u(rng); });
  lp.eq_matrix = Eigen::MatrixXd::NullaryExpr(n / 2, n, [&] { return u(rng); });
  lp.eq_rhs = lp.eq_matrix * Eigen::VectorXd::Ones(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp).value);
}
BENCHMARK(BM_RandomLp)->Arg(32)->Arg(128)->Arg(512);

void BM_SeesawT41(benchmark::State& state) {
  const TaskSpec task(4, 1);
  SeesawConfig cfg;
  cfg.dimension = static_cast<int>(state.range(0));
  cfg.restarts = 1;
  cfg.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(seesaw(task, canonical_metric(task), cfg).best_value);
}
BENCHMARK(BM_SeesawT41)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_OuterBoundT41(benchmark::State& state) {
  const TaskSpec task(4, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(outer_bound_u1(task, signed_metric_t41(), {t41_preparation_equivalence()}, {}).bound);
}
BENCHMARK(BM_OuterBoundT41)->Unit(benchmark::kMillisecond);

void BM_VertexEnumeration(benchmark::State& state) {
  const TaskSpec task(4, 2);
  VertexEnumerationOptions opts;
  opts.force_double_description = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_vertices(task, {}, opts).size());
}
BENCHMARK(BM_VertexEnumeration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_NcFeasibilityT41(benchmark::State& state) {
  const TaskSpec task(4, 1);
  const VertexSet vs = enumerate_vertices(task, {});
  const Behavior b = uniform_behavior(TaskLayout(task));
  for (auto _ : state) benchmark::DoNotOptimize(nc_feasibility(b, vs, {t41_preparation_equivalence()}).feasible);
}
BENCHMARK(BM_NcFeasibilityT41)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
