#pragma once

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <picomm/behavior.hpp>
#include <picomm/classical.hpp>
#include <picomm/contextuality.hpp>
#include <picomm/quantum.hpp>

namespace picomm::testing {

/// Every (preparation, measurement) pair of the task with a random outcome
/// distribution drawn from a flat Dirichlet.
inline Behavior random_behavior(const TaskSpec& task, std::mt19937_64& rng) {
  const TaskLayout layout(task);
  std::exponential_distribution<double> expo(1.0);
  Behavior out;
  for (const IndexSet& a : layout.preparations()) {
    for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
      std::vector<double> w;
      double total = 0.0;
      for (std::size_t k = 0; k < layout.outcome_count(j); ++k) {
        w.push_back(expo(rng));
        total += w.back();
      }
      for (std::size_t k = 0; k < w.size(); ++k) out.set({a, layout.measurements()[j], layout.outcomes(j)[k]}, w[k] / total);
    }
  }
  return out;
}

/// Fills a decoding table so every (measurement, message) cell exists.
inline void fill_decoding(const TaskLayout& layout, ClassicalStrategy& s) {
  for (std::size_t j = 0; j < layout.measurements().size(); ++j)
    for (int r = 0; r < (1 << s.message_bits); ++r) s.decoding.try_emplace({layout.measurements()[j], r}, layout.outcomes(j).front());
}

/// Optimal one-bit T_{3,1} table with one wrong guess (g({2}, 1) = 0).
inline ClassicalStrategy t31_table_strategy() {
  ClassicalStrategy s;
  s.encoding = {{{0}, 1}, {{1}, 1}, {{2}, 0}};
  s.decoding = {{{{0}, 0}, 1}, {{{0}, 1}, 2}, {{{1}, 0}, 0}, {{{1}, 1}, 2}, {{{2}, 1}, 0}};
  fill_decoding(TaskLayout(TaskSpec(3, 1)), s);
  return s;
}

/// Optimal one-bit T_{4,1} table with two wrong guesses.
inline ClassicalStrategy t41_table_strategy() {
  ClassicalStrategy s;
  s.encoding = {{{0}, 0}, {{1}, 0}, {{2}, 1}, {{3}, 1}};
  s.decoding = {{{{0, 1}, 1}, 2}, {{{0, 2}, 0}, 3}, {{{0, 2}, 1}, 1}, {{{0, 3}, 0}, 2}, {{{0, 3}, 1}, 1},
                {{{1, 2}, 0}, 3}, {{{1, 2}, 1}, 0}, {{{1, 3}, 0}, 2}, {{{1, 3}, 1}, 0}, {{{2, 3}, 0}, 0}};
  fill_decoding(TaskLayout(TaskSpec(4, 1)), s);
  return s;
}

/// Optimal one-bit T_{4,2} table with four wrong guesses.
inline ClassicalStrategy t42_table_strategy() {
  ClassicalStrategy s;
  s.encoding = {{{0, 1}, 0}, {{0, 2}, 1}, {{0, 3}, 1}, {{1, 2}, 1}, {{1, 3}, 1}, {{2, 3}, 0}};
  s.decoding = {{{{0}, 0}, 1}, {{{0}, 1}, 2}, {{{1}, 0}, 0}, {{{1}, 1}, 2},
                {{{2}, 0}, 3}, {{{2}, 1}, 0}, {{{3}, 0}, 2}, {{{3}, 1}, 0}};
  return s;
}

/// The qubit trine: Bloch vectors at 0, 120 and 240 degrees in the xz-plane.
inline std::map<IndexSet, CMatrix> t31_trine_states() {
  const double r3 = std::sqrt(3.0);
  CMatrix r1(2, 2), r2(2, 2), r3m(2, 2);
  r1 << 1, 0, 0, 0;
  r2 << 0.25, 0.25 * r3, 0.25 * r3, 0.75;
  r3m << 0.25, -0.25 * r3, -0.25 * r3, 0.75;
  return {{{0}, r1}, {{1}, r2}, {{2}, r3m}};
}

/// POVMs matching the trine: each measurement separates the two states it
/// may face. Outcomes ascending, first effect listed first.
inline std::map<IndexSet, std::vector<CMatrix>> t31_trine_povms() {
  const double r3 = std::sqrt(3.0);
  auto proj = [](double x, double z) {
    CMatrix m(2, 2);
    m << 0.5 * (1 + z), 0.5 * x, 0.5 * x, 0.5 * (1 - z);
    return m;
  };
  const CMatrix id = CMatrix::Identity(2, 2);
  // Each first effect points from the state it must reject to the state it
  // must accept.
  CMatrix m0 = proj(-1, 0);
  CMatrix m1 = proj(-0.5, -r3 / 2);
  CMatrix m2 = proj(0.5, -r3 / 2);
  return {{{0}, {m0, id - m0}}, {{1}, {m1, id - m1}}, {{2}, {m2, id - m2}}};
}

/// Pairs of preparations whose halves average to a common state, one pair
/// per side of every equivalence (all weights 1/2 in the reference tasks).
inline std::vector<std::pair<IndexSet, IndexSet>> equivalence_pairs(const std::vector<PreparationEquivalence>& eqs) {
  std::set<std::pair<IndexSet, IndexSet>> out;
  for (const auto& eq : eqs) {
    for (const auto* side : {&eq.side_a, &eq.side_b}) {
      if (side->size() != 2) throw std::invalid_argument("expected two preparations per side");
      out.insert({side->begin()->first, std::next(side->begin())->first});
    }
  }
  return {out.begin(), out.end()};
}

/// Random model: each equivalence pair is mu +- delta around one shared
/// sparse distribution mu; unpaired preparations are independent.
inline NCModel random_nc_model(const TaskLayout& layout, const VertexSet& vertices, const std::vector<PreparationEquivalence>& eqs,
                        std::mt19937_64& rng) {
  const Eigen::Index V = static_cast<Eigen::Index>(vertices.size());
  std::gamma_distribution<double> gamma(0.15);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sparse = [&] {
    Eigen::VectorXd mu(V);
    for (Eigen::Index k = 0; k < V; ++k) mu(k) = gamma(rng) + 1e-300;
    return Eigen::VectorXd(mu / mu.sum());
  };
  NCModel model;
  model.preparations = layout.preparations();
  model.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(model.preparations.size()), V);
  const Eigen::VectorXd mu = sparse();
  std::set<IndexSet> paired;
  for (const auto& [p, q] : equivalence_pairs(eqs)) {
    Eigen::VectorXd delta(V);
    for (Eigen::Index k = 0; k < V; ++k) delta(k) = normal(rng) * mu(k);
    delta.array() -= delta.sum() * mu.array();
    double scale = 1.0;
    for (Eigen::Index k = 0; k < V; ++k)
      if (std::abs(delta(k)) > 0) scale = std::min(scale, mu(k) / std::abs(delta(k)));
    delta *= scale * unit(rng);
    model.weights.row(static_cast<Eigen::Index>(layout.preparation_index(p))) = (mu + delta).transpose();
    model.weights.row(static_cast<Eigen::Index>(layout.preparation_index(q))) = (mu - delta).transpose();
    paired.insert(p);
    paired.insert(q);
  }
  for (const IndexSet& a : model.preparations)
    if (!paired.count(a)) model.weights.row(static_cast<Eigen::Index>(layout.preparation_index(a))) = sparse().transpose();
  model.weights = model.weights.cwiseMax(0.0);
  for (Eigen::Index i = 0; i < model.weights.rows(); ++i) model.weights.row(i) /= model.weights.row(i).sum();
  return model;
}

inline CMatrix random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

}  // namespace picomm::testing
