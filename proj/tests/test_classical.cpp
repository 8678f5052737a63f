#include <doctest.h>

#include <picomm/classical.hpp>

#include "test_support.hpp"

using namespace picomm;

TEST_CASE("one-bit optima") {
  CHECK(optimal_classical(TaskSpec(3, 1), 1).correct_count == 5);
  CHECK(optimal_classical(TaskSpec(4, 1), 1).correct_count == 10);
  CHECK(optimal_classical(TaskSpec(4, 2), 1).correct_count == 8);
  const ClassicalOptimum two = optimal_classical(TaskSpec(4, 1), 2);
  CHECK(two.correct_count == 12);
  CHECK(two.row_count == 12);
  CHECK(worst_case_success(TaskSpec(4, 1), two.strategy) == 1.0);
}

TEST_CASE("returned strategies achieve the reported count") {
  for (auto [n, m, c] : {std::tuple{3, 1, 1}, std::tuple{4, 1, 1}, std::tuple{4, 2, 1}, std::tuple{4, 2, 2}, std::tuple{5, 2, 1}}) {
    const TaskSpec task(n, m);
    const ClassicalOptimum opt = optimal_classical(task, c);
    opt.strategy.validate(TaskLayout(task));
    CHECK(correct_count(task, opt.strategy) == opt.correct_count);
    const Behavior b = strategy_behavior(task, opt.strategy);
    b.validate();
    for (const auto& [key, p] : b.probabilities()) CHECK((p == 0.0 || p == 1.0));
    CHECK(evaluate_metric(canonical_metric(task), b) == opt.correct_count);
  }
}

TEST_CASE("published strategy tables") {
  const TaskSpec t31(3, 1), t41(4, 1), t42(4, 2);
  CHECK(evaluate_metric(canonical_metric(t31), strategy_behavior(t31, testing::t31_table_strategy())) == 5.0);
  CHECK(evaluate_metric(canonical_metric(t41), strategy_behavior(t41, testing::t41_table_strategy())) == 10.0);
  CHECK(evaluate_metric(canonical_metric(t42), strategy_behavior(t42, testing::t42_table_strategy())) == 8.0);
  CHECK(worst_case_success(t31, testing::t31_table_strategy()) == 0.0);
  CHECK(worst_case_success(t42, testing::t42_table_strategy()) == 0.0);
}

TEST_CASE("brute force over every T31 strategy agrees") {
  const TaskSpec task(3, 1);
  const TaskLayout layout(task);
  int best = 0;
  for (int enc = 0; enc < 8; ++enc) {
    for (int dec = 0; dec < 64; ++dec) {
      ClassicalStrategy s;
      for (int i = 0; i < 3; ++i) s.encoding[layout.preparations()[static_cast<std::size_t>(i)]] = (enc >> (2 - i)) & 1;
      for (std::size_t j = 0; j < 3; ++j)
        for (int r = 0; r < 2; ++r) s.decoding[{layout.measurements()[j], r}] = layout.outcomes(j)[static_cast<std::size_t>((dec >> (2 * j + r)) & 1)];
      best = std::max(best, correct_count(task, s));
    }
  }
  CHECK(best == optimal_classical(task, 1).correct_count);
}

TEST_CASE("optimum is monotone in the message size and reaches the row count") {
  for (auto [n, m] : {std::pair{3, 1}, std::pair{4, 1}, std::pair{4, 2}}) {
    const TaskSpec task(n, m);
    const int full = static_cast<int>(std::ceil(std::log2(static_cast<double>(binomial(n, m)))));
    int previous = 0;
    for (int c = 1; c <= full; ++c) {
      const int value = optimal_classical(task, c).correct_count;
      CHECK(value >= previous);
      previous = value;
    }
    CHECK(previous == static_cast<int>(enumerate_scenarios(task).size()));
  }
}

TEST_CASE("perturbing an optimal decoding never helps") {
  std::mt19937_64 rng(13);
  for (auto [n, m] : {std::pair{4, 1}, std::pair{4, 2}, std::pair{5, 2}}) {
    const TaskSpec task(n, m);
    const TaskLayout layout(task);
    const ClassicalOptimum opt = optimal_classical(task, 1);
    for (int trial = 0; trial < 200; ++trial) {
      ClassicalStrategy s = opt.strategy;
      std::uniform_int_distribution<std::size_t> meas(0, layout.measurements().size() - 1);
      const int cells = 1 + trial % 3;
      for (int c = 0; c < cells; ++c) {
        const std::size_t j = meas(rng);
        std::uniform_int_distribution<std::size_t> out(0, layout.outcome_count(j) - 1);
        s.decoding[{layout.measurements()[j], static_cast<int>(rng() % 2)}] = layout.outcomes(j)[out(rng)];
      }
      CHECK(correct_count(task, s) <= opt.correct_count);
    }
  }
}

TEST_CASE("search is deterministic and independent of the thread count") {
  const ClassicalOptimum a = optimal_classical(TaskSpec(4, 2), 1);
  const ClassicalOptimum b = optimal_classical(TaskSpec(4, 2), 1, {16777216.0, 4});
  CHECK(a.correct_count == b.correct_count);
  CHECK(a.strategy == b.strategy);
  CHECK(a.strategy == optimal_classical(TaskSpec(4, 2), 1).strategy);
}

TEST_CASE("budget guard") {
  try {
    optimal_classical(TaskSpec(4, 2), 5);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.attempted() == doctest::Approx(std::pow(2.0, 30)));
  }
  CHECK_THROWS_AS(optimal_classical(TaskSpec(3, 1), 0), ConstraintViolation);
}

TEST_CASE("strategy validation") {
  const TaskLayout layout(TaskSpec(3, 1));
  ClassicalStrategy s = testing::t31_table_strategy();
  s.validate(layout);
  s.encoding[{0}] = 2;
  CHECK_THROWS_AS(s.validate(layout), ConstraintViolation);
  s = testing::t31_table_strategy();
  s.decoding[{{0}, 0}] = 0;
  CHECK_THROWS_AS(s.validate(layout), ConstraintViolation);
  s = testing::t31_table_strategy();
  s.decoding.erase({{1}, 1});
  CHECK_THROWS_AS(s.validate(layout), ConstraintViolation);
}

TEST_CASE("strategy rendering marks wrong guesses") {
  const std::string text = render_strategy(TaskSpec(3, 1), testing::t31_table_strategy());
  CHECK(std::count(text.begin(), text.end(), '*') == 1);
}
