// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include <picomm/classical.hpp>
#include <picomm/contextuality.hpp>
#include <picomm/frames.hpp>
#include <picomm/hierarchy.hpp>
#include <picomm/seesaw.hpp>
#include <picomm/witness.hpp>

#include "test_support.hpp"

using namespace picomm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

/// Collects individual sub-checks of one criterion.
class Criterion {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
    notes_.push_back(what);
  }
  void near(double observed, double expected, double tolerance, const std::string& what) {
    std::ostringstream s;
    s.precision(10);
    s << what << "=" << observed << " (want " << expected << " +- " << tolerance << ")";
    expect(std::abs(observed - expected) <= tolerance, s.str());
  }
  void note(const std::string& text) { notes_.push_back(text); }

  bool passed() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

struct Outcome {
  int number;
  std::string title;
  bool passed;
  std::string detail;
};

std::vector<Outcome> outcomes;

void run_criterion(int number, const std::string& title, const std::function<void(Criterion&)>& body) {
  Criterion c;
  const auto start = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  std::ostringstream detail;
  const auto& shown = c.passed() ? c.notes() : c.failures();
  for (std::size_t i = 0; i < shown.size(); ++i) detail << (i ? "; " : "") << shown[i];
  detail << " [" << seconds_since(start) << " s]";
  outcomes.push_back({number, title, c.passed(), detail.str()});
  std::printf("%s criterion %d: %s -- %s\n", c.passed() ? "PASS" : "FAIL", number, title.c_str(), detail.str().c_str());
  std::fflush(stdout);
}

SeesawResult run_seesaw(const TaskSpec& task, const SuccessMetric& metric, int d, int restarts,
                        std::vector<PreparationEquivalence> eqs = {}) {
  SeesawConfig cfg;
  cfg.dimension = d;
  cfg.restarts = restarts;
  cfg.seed = 1;
  cfg.prep_equivalences = std::move(eqs);
  return seesaw(task, metric, cfg);
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

/// Every deterministic model that assigns one vertex per preparation and
/// satisfies the T41 equivalence: the vertex pair of {0},{1} equals that of
/// {2},{3} as a multiset.
int check_t41_certificate(const FarkasCertificate& cert, const VertexSet& vs, const std::vector<PreparationEquivalence>& eqs,
                          double& worst) {
  const TaskLayout layout(vs.task);
  const Eigen::Index V = static_cast<Eigen::Index>(vs.size());
  int checked = 0;
  for (Eigen::Index k0 = 0; k0 < V; ++k0) {
    for (Eigen::Index k1 = 0; k1 < V; ++k1) {
      for (const auto& [k2, k3] : {std::pair{k0, k1}, std::pair{k1, k0}}) {
        NCModel model;
        model.preparations = layout.preparations();
        model.weights = Eigen::MatrixXd::Zero(4, V);
        model.weights(0, k0) = 1;
        model.weights(1, k1) = 1;
        model.weights(2, k2) = 1;
        model.weights(3, k3) = 1;
        validate_nc_model(model, vs, eqs);
        worst = std::max(worst, cert.evaluate(nc_behavior(vs, model)));
        ++checked;
      }
    }
  }
  return checked;
}

/// Same for the three T42 equivalences: {01,02} = {03,12} = {13,23}.
int check_t42_certificate(const FarkasCertificate& cert, const VertexSet& vs, const std::vector<PreparationEquivalence>& eqs,
                          double& worst) {
  const TaskLayout layout(vs.task);
  const auto idx = [&](IndexSet a) { return static_cast<Eigen::Index>(layout.preparation_index(a)); };
  const Eigen::Index V = static_cast<Eigen::Index>(vs.size());
  int checked = 0;
  for (Eigen::Index x = 0; x < V; ++x) {
    for (Eigen::Index y = 0; y < V; ++y) {
      for (int flip = 0; flip < 4; ++flip) {
        NCModel model;
        model.preparations = layout.preparations();
        model.weights = Eigen::MatrixXd::Zero(6, V);
        model.weights(idx({0, 1}), x) = 1;
        model.weights(idx({0, 2}), y) = 1;
        model.weights(idx({0, 3}), flip & 1 ? y : x) = 1;
        model.weights(idx({1, 2}), flip & 1 ? x : y) = 1;
        model.weights(idx({1, 3}), flip & 2 ? y : x) = 1;
        model.weights(idx({2, 3}), flip & 2 ? x : y) = 1;
        validate_nc_model(model, vs, eqs);
        worst = std::max(worst, cert.evaluate(nc_behavior(vs, model)));
        ++checked;
      }
    }
  }
  return checked;
}

}  // namespace

int main() {
  const TaskSpec t31(3, 1), t41(4, 1), t42(4, 2);
  const auto overall = Clock::now();

  run_criterion(1, "classical optima", [&](Criterion& c) {
    for (auto [task, want] : {std::pair{t31, 5}, std::pair{t41, 10}, std::pair{t42, 8}}) {
      const auto start = Clock::now();
      const ClassicalOptimum opt = optimal_classical(task, 1);
      const double elapsed = seconds_since(start);
      const std::string name = "T" + std::to_string(task.n()) + std::to_string(task.m());
      c.expect(opt.correct_count == want && correct_count(task, opt.strategy) == want,
               name + " count " + std::to_string(opt.correct_count) + "/" + std::to_string(opt.row_count));
      c.expect(elapsed < 1.0, name + " time " + fmt(elapsed) + " s");
    }
    c.expect(optimal_classical(t31, 1).row_count == 6, "T31 rows 6");
  });

  // Shared see-saw runs (criteria 2, 7 and 9).
  struct InnerRun {
    TaskSpec task;
    int d;
    double expected;
    SeesawResult result;
  };
  std::vector<InnerRun> inner = {{t41, 2, 10.89897946, {}}, {t41, 3, 11.65685425, {}}, {t41, 4, 12.0, {}},
                                 {t42, 2, 8.0, {}},         {t42, 3, 12.0, {}}};
  run_criterion(2, "see-saw inner bounds", [&](Criterion& c) {
    const auto start = Clock::now();
    for (InnerRun& r : inner) {
      r.result = run_seesaw(r.task, canonical_metric(r.task), r.d, 20);
      c.near(r.result.best_value, r.expected, 1e-5, "T" + std::to_string(r.task.n()) + std::to_string(r.task.m()) + " d=" + std::to_string(r.d));
    }
    const double elapsed = seconds_since(start);
    c.expect(elapsed < 60.0, "total " + fmt(elapsed) + " s");
  });

  run_criterion(3, "T31 qubit value", [&](Criterion& c) {
    const SeesawResult r = run_seesaw(t31, canonical_metric(t31), 2, 20);
    c.near(r.best_value, 5.598076, 1e-5, "seesaw");
  });

  SeesawResult contextual41;
  run_criterion(4, "contextual T41 quantum bounds", [&](Criterion& c) {
    contextual41 = run_seesaw(t41, signed_metric_t41(), 2, 20, {t41_preparation_equivalence()});
    const double outer = outer_bound_u1(t41, signed_metric_t41(), {t41_preparation_equivalence()}, {}).bound;
    c.near(contextual41.best_value, 4.828427, 1e-5, "seesaw");
    c.near(outer, 4.828427123, 1e-6, "outer");
    c.expect(contextual41.best_value <= outer + 1e-6, "inner <= outer");
  });

  const std::vector<PreparationEquivalence> eqs41{t41_preparation_equivalence()};
  const VertexSet vs41 = enumerate_vertices(t41, {});
  std::optional<FarkasCertificate> cert41;
  run_criterion(5, "noncontextual T41", [&](Criterion& c) {
    c.expect(vs41.size() == 64, "vertices " + std::to_string(vs41.size()));
    c.near(nc_max(t41, signed_metric_t41(), vs41, eqs41), 4.0, 1e-6, "nc_max");
    const NCFeasibility r = nc_feasibility(behavior_of(contextual41.model), vs41, eqs41);
    c.expect(!r.feasible && r.certificate.has_value(), r.feasible ? "feasible" : "infeasible");
    if (r.certificate) {
      cert41 = r.certificate;
      c.near(r.certificate->ratio(), 1.414214, 1e-3, "ratio");
    }
  });

  const auto eqs42 = t42_preparation_equivalences();
  const VertexSet vs42 = enumerate_vertices(t42, {});
  run_criterion(6, "contextual T42", [&](Criterion& c) {
    c.near(nc_max(t42, canonical_metric(t42), vs42, eqs42), 8.0, 1e-6, "nc_max");
    c.near(behavior_lp_bound(t42, canonical_metric(t42), eqs42), 8.0, 1e-6, "behavior_lp_bound");
    for (int d : {2, 3}) {
      const SeesawResult r = run_seesaw(t42, canonical_metric(t42), d, 20, eqs42);
      c.near(r.best_value, 8.0, 1e-5, "seesaw d=" + std::to_string(d));
      if (d == 2) {
        const NCFeasibility f = nc_feasibility(behavior_of(r.model), vs42, eqs42);
        c.expect(f.feasible, std::string("d=2 behavior ") + (f.feasible ? "feasible" : "infeasible"));
      }
    }
  });

  run_criterion(7, "frame analytics", [&](Criterion& c) {
    const double analytic[] = {10.89897949, 11.65685425, 12.0};
    for (int d = 2; d <= 4; ++d) {
      const double value = t41_analytic_bound(d);
      c.near(value, analytic[d - 2], 1e-6, "analytic d=" + std::to_string(d));
      c.near(inner[static_cast<std::size_t>(d - 2)].result.best_value, value, 1e-4, "seesaw vs analytic d=" + std::to_string(d));
    }
    for (int d : {2, 3}) {
      const UnitFrame frame = frame_from_states(inner[static_cast<std::size_t>(d - 2)].result.model.states);
      c.expect(verify_equiangular(frame, 1e-3), "equiangular d=" + std::to_string(d));
      c.near(max_frame_correlation(frame), welch_bound(4, d), 1e-4, "correlation d=" + std::to_string(d));
    }
  });

  run_criterion(8, "dimension witness", [&](Criterion& c) {
    const double bound = metric_bound_via_lambda(t42, canonical_metric(t42), 2);
    c.expect(bound == 8.0, "metric_bound_via_lambda(T42, 2)=" + fmt(bound));
    std::mt19937_64 rng(2024);
    for (int d : {2, 3}) {
      double highest = 0.0;
      for (int trial = 0; trial < 500; ++trial) {
        const TaskSpec task = trial % 2 ? t42 : TaskSpec(5, 1);
        const QuantumModel model = random_model(task, d, rng);
        const Behavior b = behavior_of(model);
        for (const auto& [label, povm] : model.povms) highest = std::max(highest, lambda_max(comm_matrix(b, label)));
      }
      c.expect(highest <= d + 1e-6, "d=" + std::to_string(d) + " max lambda " + fmt(highest));
    }
  });

  run_criterion(9, "property suites", [&](Criterion& c) {
    int traces = 0;
    bool monotone = true;
    for (const InnerRun& r : inner) {
      for (const RestartTrace& t : r.result.traces) {
        ++traces;
        for (std::size_t i = 1; i < t.values.size(); ++i) monotone = monotone && t.values[i] >= t.values[i - 1] - 1e-7;
      }
    }
    c.expect(monotone, "see-saw monotone over " + std::to_string(traces) + " restarts");

    std::mt19937_64 rng(9);
    struct NcCase {
      const VertexSet* vs;
      const std::vector<PreparationEquivalence>* eqs;
      SuccessMetric metric;
    };
    for (const NcCase& k : {NcCase{&vs41, &eqs41, signed_metric_t41()}, NcCase{&vs42, &eqs42, canonical_metric(t42)}}) {
      const TaskLayout layout(k.vs->task);
      const double bound = nc_max(k.vs->task, k.metric, *k.vs, *k.eqs);
      double highest = -1e300;
      for (int trial = 0; trial < 1000; ++trial) {
        const NCModel model = testing::random_nc_model(layout, *k.vs, *k.eqs, rng);
        validate_nc_model(model, *k.vs, *k.eqs, 1e-9);
        highest = std::max(highest, evaluate_metric(k.metric, nc_behavior(*k.vs, model)));
      }
      c.expect(highest <= bound + 1e-7, "nc_max sound on 1000 models (best " + fmt(highest) + " <= " + fmt(bound) + ")");
    }

    if (cert41) {
      double worst = -1e300;
      const int n = check_t41_certificate(*cert41, vs41, eqs41, worst);
      c.expect(worst <= cert41->bound + 1e-7, "T41 certificate on " + std::to_string(n) + " deterministic models (max " + fmt(worst) + ")");
    } else {
      c.expect(false, "no T41 certificate");
    }
    const NCFeasibility f42 = nc_feasibility(behavior_of(inner[4].result.model), vs42, eqs42);
    if (f42.certificate) {
      double worst = -1e300;
      const int n = check_t42_certificate(*f42.certificate, vs42, eqs42, worst);
      c.expect(worst <= f42.certificate->bound + 1e-7, "T42 certificate on " + std::to_string(n) + " deterministic models (max " + fmt(worst) + ")");
    } else {
      c.expect(false, "no T42 certificate");
    }

    double offset_error = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Behavior b = testing::random_behavior(t41, rng);
      offset_error = std::max(offset_error, std::abs(evaluate_metric(canonical_metric(t41), b) - evaluate_metric(signed_metric_t41(), b) - 6.0));
    }
    c.expect(offset_error <= 1e-12, "offset identity on 1000 behaviors (err " + fmt(offset_error) + ")");

    double spectrum_error = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const int d = 1 + trial % 6;
      const CMatrix h = testing::random_hermitian(d, rng);
      const Eigen::VectorXd spec = Eigen::SelfAdjointEigenSolver<CMatrix>(h).eigenvalues();
      const Eigen::VectorXd doubled = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hermitian_embed(h)).eigenvalues();
      for (int i = 0; i < d; ++i)
        spectrum_error = std::max({spectrum_error, std::abs(doubled(2 * i) - spec(i)), std::abs(doubled(2 * i + 1) - spec(i))});
    }
    c.expect(spectrum_error <= 1e-9, "embedding doubles spectra (err " + fmt(spectrum_error) + ")");
  });

  int failed = 0;
  for (const Outcome& o : outcomes) failed += o.passed ? 0 : 1;
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(outcomes.size()) - failed, outcomes.size(), seconds_since(overall));
  return failed ? 1 : 0;
}
