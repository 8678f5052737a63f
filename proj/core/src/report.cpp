#include "picomm/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "picomm/classical.hpp"
#include "picomm/contextuality.hpp"
#include "picomm/frames.hpp"
#include "picomm/hierarchy.hpp"
#include "picomm/seesaw.hpp"
#include "picomm/witness.hpp"

#ifndef PICOMM_VERSION
#define PICOMM_VERSION "unknown"
#endif

namespace picomm {

namespace {

const std::vector<std::string> kMethodOrder{"classical", "seesaw", "outer", "contextual", "frames", "witness"};

Json settings_json(const SolverSettings& s) {
  return {{"feasibility", s.feasibility_tolerance}, {"gap", s.gap_tolerance}, {"certificate", s.certificate_tolerance},
          {"max_iterations", s.max_iterations}};
}

SolverSettings settings_from_json(const Json& j, SolverSettings s) {
  if (j.contains("feasibility")) s.feasibility_tolerance = j.at("feasibility").get<double>();
  if (j.contains("gap")) s.gap_tolerance = j.at("gap").get<double>();
  if (j.contains("certificate")) s.certificate_tolerance = j.at("certificate").get<double>();
  if (j.contains("max_iterations")) s.max_iterations = j.at("max_iterations").get<int>();
  return s;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fixed(double v, int precision = 8) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Shared state of one run: see-saw models feed the later methods.
struct RunContext {
  const ExperimentConfig& config;
  SuccessMetric metric;
  std::map<int, QuantumModel> models;
};

Json run_classical(RunContext& ctx) {
  const ClassicalOptimum opt = optimal_classical(ctx.config.task, ctx.config.message_bits, {16777216.0, ctx.config.threads});
  return {{"message_bits", ctx.config.message_bits},
          {"correct_count", opt.correct_count},
          {"row_count", opt.row_count},
          {"success_fraction", static_cast<double>(opt.correct_count) / opt.row_count},
          {"worst_case_success", worst_case_success(ctx.config.task, opt.strategy)},
          {"strategy", to_json(opt.strategy)},
          {"tables", render_strategy(ctx.config.task, opt.strategy)}};
}

Json run_seesaw(RunContext& ctx) {
  Json runs = Json::array();
  for (int d : ctx.config.dimensions) {
    SeesawConfig cfg;
    cfg.dimension = d;
    cfg.restarts = ctx.config.restarts;
    cfg.seed = ctx.config.seed;
    cfg.epsilon = ctx.config.seesaw_epsilon;
    cfg.prep_equivalences = ctx.config.prep_equivalences;
    cfg.effect_equivalences = ctx.config.effect_equivalences;
    cfg.threads = ctx.config.threads;
    cfg.solver = ctx.config.solver;
    const SeesawResult r = seesaw(ctx.config.task, ctx.metric, cfg);
    ctx.models[d] = r.model;
    int converged = 0;
    for (const RestartTrace& t : r.traces) converged += t.converged ? 1 : 0;
    runs.push_back({{"dimension", d},
                    {"value", r.best_value},
                    {"converged", r.converged},
                    {"converged_restarts", converged},
                    {"restarts", cfg.restarts},
                    {"best_restart", r.best_restart},
                    {"best_seed", r.traces[static_cast<std::size_t>(r.best_restart)].seed},
                    {"worst_case_success", worst_case_success(ctx.config.task, behavior_of(r.model))},
                    {"model", to_json(r.model)}});
  }
  return {{"runs", runs}, {"epsilon", ctx.config.seesaw_epsilon}};
}

Json run_outer(RunContext& ctx) {
  const OuterBoundResult r =
      outer_bound_u1(ctx.config.task, ctx.metric, ctx.config.prep_equivalences, ctx.config.effect_equivalences, ctx.config.outer_solver);
  const auto [blocks, side] = moment_size(ctx.config.task);
  return {{"bound", r.bound},
          {"status", to_string(r.report.status)},
          {"iterations", r.report.iterations},
          {"relative_gap", r.report.relative_gap},
          {"moment_blocks", blocks},
          {"moment_side", side},
          {"solver", settings_json(ctx.config.outer_solver)}};
}

Json run_contextual(RunContext& ctx) {
  const VertexSet vertices = enumerate_vertices(ctx.config.task, ctx.config.effect_equivalences);
  Json out = {{"vertex_count", vertices.size()},
              {"nc_max", nc_max(ctx.config.task, ctx.metric, vertices, ctx.config.prep_equivalences, ctx.config.solver)},
              {"behavior_lp_bound", behavior_lp_bound(ctx.config.task, ctx.metric, ctx.config.prep_equivalences, ctx.config.solver)}};
  Json tests = Json::array();
  for (const auto& [d, model] : ctx.models) {
    const NCFeasibility f = nc_feasibility(behavior_of(model), vertices, ctx.config.prep_equivalences, ctx.config.solver);
    Json t = {{"dimension", d}, {"feasible", f.feasible}, {"farkas_value", f.farkas_value}};
    if (f.certificate) t["certificate"] = to_json(*f.certificate);
    tests.push_back(t);
  }
  out["feasibility"] = tests;
  return out;
}

Json run_frames(RunContext& ctx) {
  Json out = Json::object();
  const TaskSpec& task = ctx.config.task;
  if (task.n() == 4 && task.m() == 1) {
    Json analytic = Json::object();
    for (int d = 2; d <= 4; ++d) analytic[std::to_string(d)] = t41_analytic_bound(d);
    out["t41_analytic_bound"] = analytic;
  }
  Json families = Json::array();
  for (const auto& [d, model] : ctx.models) {
    std::vector<std::string> warnings;
    const UnitFrame frame = frame_from_states(model.states, &warnings);
    const int n = static_cast<int>(frame.vectors.size());
    Json f = {{"dimension", d}, {"vectors", n}, {"max_frame_correlation", max_frame_correlation(frame)},
              {"equiangular_1e-3", verify_equiangular(frame, 1e-3)}, {"warnings", warnings}};
    if (n >= d) f["welch_bound"] = welch_bound(n, d);
    families.push_back(f);
  }
  out["state_frames"] = families;
  return out;
}

Json run_witness(RunContext& ctx) {
  Json bounds = Json::object();
  for (int d : ctx.config.dimensions) {
    try {
      bounds[std::to_string(d)] = metric_bound_via_lambda(ctx.config.task, ctx.metric, d);
    } catch (const ShapeError& e) {
      bounds[std::to_string(d)] = std::string("not applicable: ") + e.what();
    }
  }
  Json models = Json::array();
  for (const auto& [d, model] : ctx.models) {
    const Behavior b = behavior_of(model);
    Json mats = Json::array();
    for (const auto& [label, effects] : model.povms) {
      const CommunicationMatrix a = comm_matrix(b, label);
      mats.push_back({{"measurement", label_to_json(label)},
                      {"lambda_max", lambda_max(a)},
                      {"verdict", to_string(dimension_witness(a, d))},
                      {"table", render(a, &ctx.metric)}});
    }
    models.push_back({{"dimension", d}, {"matrices", mats}});
  }
  return {{"metric_bound_via_lambda", bounds}, {"models", models}};
}

}  // namespace

void ExperimentConfig::validate() const {
  for (const std::string& m : methods)
    if (m != "all" && std::find(kMethodOrder.begin(), kMethodOrder.end(), m) == kMethodOrder.end())
      throw ConstraintViolation("unknown method '" + m + "'");
  for (int d : dimensions)
    if (d < 1) throw ConstraintViolation("dimensions must be positive");
  if (restarts < 1) throw ConstraintViolation("restarts must be at least 1");
  if (message_bits < 1) throw ConstraintViolation("message_bits must be at least 1");
  if (threads < 1) throw ConstraintViolation("threads must be at least 1");
  if (!(seesaw_epsilon > 0.0)) throw ConstraintViolation("seesaw_epsilon must be positive");
  const TaskLayout layout(task);
  for (const auto& eq : prep_equivalences) validate_equivalence(eq, layout);
  for (const auto& eq : effect_equivalences) validate_equivalence(eq, layout);
  validate_metric(resolved_metric(), layout);
}

std::vector<std::string> ExperimentConfig::resolved_methods() const {
  std::set<std::string> wanted(methods.begin(), methods.end());
  std::vector<std::string> out;
  for (const std::string& m : kMethodOrder)
    if (wanted.count("all") || wanted.count(m)) out.push_back(m);
  return out;
}

SuccessMetric ExperimentConfig::resolved_metric() const {
  if (metric.is_string()) {
    const std::string name = metric.get<std::string>();
    if (name == "canonical") return canonical_metric(task);
    if (name == "signed_t41") {
      if (!(task == TaskSpec(4, 1))) throw ConstraintViolation("signed_t41 metric needs task (4, 1)");
      return signed_metric_t41();
    }
    throw ConstraintViolation("unknown metric '" + name + "'");
  }
  return metric_from_json(metric);
}

Json to_json(const ExperimentConfig& c) {
  Json preps = Json::array();
  for (const auto& eq : c.prep_equivalences) preps.push_back(to_json(eq));
  Json effects = Json::array();
  for (const auto& eq : c.effect_equivalences) effects.push_back(to_json(eq));
  return {{"task", to_json(c.task)},
          {"methods", c.methods},
          {"dimensions", c.dimensions},
          {"metric", c.metric},
          {"prep_equivalences", preps},
          {"effect_equivalences", effects},
          {"seed", c.seed},
          {"restarts", c.restarts},
          {"message_bits", c.message_bits},
          {"threads", c.threads},
          {"tolerances",
           {{"seesaw_epsilon", c.seesaw_epsilon}, {"solver", settings_json(c.solver)}, {"outer_solver", settings_json(c.outer_solver)}}},
          {"out", c.out}};
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  if (j.contains("task")) c.task = task_from_json(j.at("task"));
  if (j.contains("methods")) {
    const Json& m = j.at("methods");
    c.methods = m.is_string() ? std::vector<std::string>{m.get<std::string>()} : m.get<std::vector<std::string>>();
  }
  if (j.contains("dimensions")) c.dimensions = j.at("dimensions").get<std::vector<int>>();
  if (j.contains("metric")) c.metric = j.at("metric");
  if (j.contains("prep_equivalences")) {
    const Json& p = j.at("prep_equivalences");
    if (p.is_string()) {
      const std::string name = p.get<std::string>();
      if (name == "t41") c.prep_equivalences = {t41_preparation_equivalence()};
      else if (name == "t42") c.prep_equivalences = t42_preparation_equivalences();
      else throw ConstraintViolation("unknown equivalence preset '" + name + "'");
    } else {
      for (const Json& e : p) c.prep_equivalences.push_back(preparation_equivalence_from_json(e));
    }
  }
  if (j.contains("effect_equivalences"))
    for (const Json& e : j.at("effect_equivalences")) c.effect_equivalences.push_back(effect_equivalence_from_json(e));
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("restarts")) c.restarts = j.at("restarts").get<int>();
  if (j.contains("message_bits")) c.message_bits = j.at("message_bits").get<int>();
  if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (t.contains("seesaw_epsilon")) c.seesaw_epsilon = t.at("seesaw_epsilon").get<double>();
    if (t.contains("solver")) c.solver = settings_from_json(t.at("solver"), c.solver);
    if (t.contains("outer_solver")) c.outer_solver = settings_from_json(t.at("outer_solver"), c.outer_solver);
  }
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  return c;
}

bool Report::all_ok() const {
  return std::all_of(results.begin(), results.end(), [](const MethodResult& r) { return r.ok; });
}

bool Report::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Json to_json(const Report& report) {
  Json results = Json::array();
  for (const MethodResult& r : report.results) {
    Json e = {{"method", r.method}, {"ok", r.ok}, {"wall_seconds", r.wall_seconds}, {"data", r.data}};
    if (!r.ok) e["error"] = r.error;
    results.push_back(e);
  }
  Json checks = Json::array();
  for (const Check& c : report.checks) {
    checks.push_back({{"name", c.name}, {"expected", c.expected}, {"observed", c.observed}, {"tolerance", c.tolerance},
                      {"passed", c.passed}, {"note", c.note}});
  }
  return {{"toolkit", "picomm"}, {"version", report.version}, {"generated_at", report.generated_at},
          {"config", report.config}, {"results", results}, {"checks", checks}};
}

Report report_from_json(const Json& j) {
  Report r;
  r.version = j.value("version", "");
  r.generated_at = j.value("generated_at", "");
  r.config = j.value("config", Json::object());
  for (const Json& e : j.value("results", Json::array())) {
    MethodResult m;
    m.method = e.at("method").get<std::string>();
    m.ok = e.at("ok").get<bool>();
    m.error = e.value("error", "");
    m.wall_seconds = e.value("wall_seconds", 0.0);
    m.data = e.value("data", Json::object());
    r.results.push_back(std::move(m));
  }
  for (const Json& e : j.value("checks", Json::array())) {
    r.checks.push_back({e.at("name").get<std::string>(), e.at("expected").get<double>(), e.at("observed").get<double>(),
                        e.at("tolerance").get<double>(), e.at("passed").get<bool>(), e.value("note", "")});
  }
  return r;
}

Json without_volatile_fields(Json j) {
  if (j.is_object()) {
    j.erase("generated_at");
    j.erase("wall_seconds");
    for (auto& [key, value] : j.items()) value = without_volatile_fields(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = without_volatile_fields(value);
  }
  return j;
}

Report run(const ExperimentConfig& config) {
  config.validate();
  Report report;
  report.version = PICOMM_VERSION;
  report.generated_at = utc_now();
  report.config = to_json(config);
  RunContext ctx{config, config.resolved_metric(), {}};
  for (const std::string& method : config.resolved_methods()) {
    MethodResult r;
    r.method = method;
    Stopwatch clock;
    try {
      if (method == "classical") r.data = run_classical(ctx);
      else if (method == "seesaw") r.data = run_seesaw(ctx);
      else if (method == "outer") r.data = run_outer(ctx);
      else if (method == "contextual") r.data = run_contextual(ctx);
      else if (method == "frames") r.data = run_frames(ctx);
      else if (method == "witness") r.data = run_witness(ctx);
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = method + ": " + e.what();
    }
    r.wall_seconds = clock.seconds();
    report.results.push_back(std::move(r));
  }
  return report;
}

namespace {

const MethodResult* find_method(const Report& r, const std::string& method) {
  for (const MethodResult& m : r.results)
    if (m.method == method) return m.ok ? &m : nullptr;
  return nullptr;
}

const Json* seesaw_run(const Report& r, int d) {
  const MethodResult* m = find_method(r, "seesaw");
  if (!m) return nullptr;
  for (const Json& run : m->data.at("runs"))
    if (run.at("dimension").get<int>() == d) return &run;
  return nullptr;
}

class CheckList {
 public:
  explicit CheckList(std::vector<Check>& out) : out_(out) {}

  void near(const std::string& name, double expected, std::optional<double> observed, double tolerance, std::string note = {}) {
    Check c{name, expected, observed.value_or(std::nan("")), tolerance, false, std::move(note)};
    c.passed = observed && std::abs(*observed - expected) <= tolerance;
    if (!observed && c.note.empty()) c.note = "not computed";
    out_.push_back(std::move(c));
  }

  void truth(const std::string& name, std::optional<bool> observed, std::string note = {}) {
    Check c{name, 1.0, observed ? (*observed ? 1.0 : 0.0) : std::nan(""), 0.0, observed.value_or(false), std::move(note)};
    if (!observed && c.note.empty()) c.note = "not computed";
    out_.push_back(std::move(c));
  }

 private:
  std::vector<Check>& out_;
};

template <class T>
std::optional<T> field(const Json* j, const char* key) {
  if (!j || !j->contains(key)) return std::nullopt;
  return j->at(key).get<T>();
}

std::string restart_note(const Json* run) {
  if (!run) return {};
  if (!run->at("converged").get<bool>()) return "best restart did not meet the convergence criterion";
  return {};
}

}  // namespace

Report reference_reproduction(const ReproductionOptions& options) {
  Report out;
  out.version = PICOMM_VERSION;
  out.generated_at = utc_now();
  out.config = {{"seed", options.seed}, {"restarts", options.restarts}, {"threads", options.threads}};
  CheckList checks(out.checks);

  auto config = [&](TaskSpec task, std::vector<std::string> methods, std::vector<int> dims) {
    ExperimentConfig c;
    c.task = task;
    c.methods = std::move(methods);
    c.dimensions = std::move(dims);
    c.seed = options.seed;
    c.restarts = options.restarts;
    c.threads = options.threads;
    return c;
  };
  auto absorb = [&](const std::string& tag, Report r) {
    for (MethodResult m : r.results) {
      m.method = tag + "/" + m.method;
      out.results.push_back(std::move(m));
    }
    return r;
  };
  auto seesaw_value = [](const Report& r, int d) { return field<double>(seesaw_run(r, d), "value"); };

  const double t31_qubit = 6.0 * 0.5 * (1.0 + std::sqrt(3.0) / 2.0);
  const double contextual_t41 = 2.0 + 2.0 * std::sqrt(2.0);

  // Classical optima and the qubit T_{3,1} value.
  auto classical_count = [](const Report& r) {
    const MethodResult* m = find_method(r, "classical");
    return m ? std::optional<double>(m->data.at("correct_count").get<double>()) : std::nullopt;
  };
  const Report t31 = absorb("T31", run(config(TaskSpec(3, 1), {"classical", "seesaw"}, {2})));
  checks.near("classical T31 correct rows", 5, classical_count(t31), 0.0);
  checks.near("seesaw T31 d=2", t31_qubit, seesaw_value(t31, 2), 1e-5, restart_note(seesaw_run(t31, 2)));

  const Report t41 = absorb("T41", run(config(TaskSpec(4, 1), {"classical", "seesaw", "frames"}, {2, 3, 4})));
  const Report t42 = absorb("T42", run(config(TaskSpec(4, 2), {"classical", "seesaw", "witness"}, {2, 3})));
  checks.near("classical T41 correct rows", 10, classical_count(t41), 0.0);
  checks.near("classical T42 correct rows", 8, classical_count(t42), 0.0);

  const double t41_expected[] = {0.0, 0.0, 6.0 * (1.0 + std::sqrt(2.0 / 3.0)), 6.0 * (1.0 + 2.0 * std::sqrt(2.0) / 3.0), 12.0};
  for (int d = 2; d <= 4; ++d)
    checks.near("seesaw T41 d=" + std::to_string(d), t41_expected[d], seesaw_value(t41, d), 1e-5, restart_note(seesaw_run(t41, d)));
  checks.near("seesaw T42 d=2", 8.0, seesaw_value(t42, 2), 1e-5, restart_note(seesaw_run(t42, 2)));
  checks.near("seesaw T42 d=3", 12.0, seesaw_value(t42, 3), 1e-5, restart_note(seesaw_run(t42, 3)));

  // Contextual T_{4,1}.
  ExperimentConfig c41 = config(TaskSpec(4, 1), {"seesaw", "outer", "contextual"}, {2});
  c41.metric = "signed_t41";
  c41.prep_equivalences = {t41_preparation_equivalence()};
  const Report ctx41 = absorb("T41-contextual", run(c41));
  const auto inner41 = seesaw_value(ctx41, 2);
  const MethodResult* outer41 = find_method(ctx41, "outer");
  const auto outer_bound = outer41 ? std::optional<double>(outer41->data.at("bound").get<double>()) : std::nullopt;
  checks.near("contextual T41 seesaw d=2", contextual_t41, inner41, 1e-5);
  checks.near("contextual T41 level-1 outer bound", contextual_t41, outer_bound, 1e-6);
  checks.truth("contextual T41 inner <= outer",
               inner41 && outer_bound ? std::optional<bool>(*inner41 <= *outer_bound + 1e-9) : std::nullopt);
  const MethodResult* nc41 = find_method(ctx41, "contextual");
  checks.near("T41 response-function vertices", 64, nc41 ? std::optional<double>(nc41->data.at("vertex_count").get<double>()) : std::nullopt, 0.0);
  checks.near("T41 noncontextual maximum", 4.0, nc41 ? std::optional<double>(nc41->data.at("nc_max").get<double>()) : std::nullopt, 1e-6);
  std::optional<double> ratio;
  std::optional<bool> infeasible41;
  if (nc41 && !nc41->data.at("feasibility").empty()) {
    const Json& f = nc41->data.at("feasibility").front();
    infeasible41 = !f.at("feasible").get<bool>();
    if (f.contains("certificate")) ratio = f.at("certificate").at("ratio").get<double>();
  }
  checks.truth("contextual T41 optimum has no noncontextual model", infeasible41);
  checks.near("T41 certificate ratio", std::sqrt(2.0), ratio, 1e-3);

  // Contextual T_{4,2}.
  ExperimentConfig c42 = config(TaskSpec(4, 2), {"seesaw", "contextual"}, {2, 3});
  c42.prep_equivalences = t42_preparation_equivalences();
  const Report ctx42 = absorb("T42-contextual", run(c42));
  const MethodResult* nc42 = find_method(ctx42, "contextual");
  checks.near("T42 noncontextual maximum", 8.0, nc42 ? std::optional<double>(nc42->data.at("nc_max").get<double>()) : std::nullopt, 1e-6);
  checks.near("T42 behaviour LP bound", 8.0, nc42 ? std::optional<double>(nc42->data.at("behavior_lp_bound").get<double>()) : std::nullopt,
              1e-6);
  checks.near("contextual T42 seesaw d=2", 8.0, seesaw_value(ctx42, 2), 1e-5);
  checks.near("contextual T42 seesaw d=3", 8.0, seesaw_value(ctx42, 3), 1e-5);
  std::optional<bool> feasible42;
  if (nc42)
    for (const Json& f : nc42->data.at("feasibility"))
      if (f.at("dimension").get<int>() == 2) feasible42 = f.at("feasible").get<bool>();
  checks.truth("contextual T42 d=2 optimum has a noncontextual model", feasible42);

  // Frames.
  for (int d = 2; d <= 4; ++d) {
    checks.near("T41 analytic bound d=" + std::to_string(d), t41_expected[d], t41_analytic_bound(d), 1e-6);
    const auto v = seesaw_value(t41, d);
    checks.near("T41 analytic bound vs seesaw d=" + std::to_string(d), t41_analytic_bound(d), v, 1e-4);
  }
  const MethodResult* frames = find_method(t41, "frames");
  for (int d = 2; d <= 3; ++d) {
    const Json* fam = nullptr;
    if (frames)
      for (const Json& f : frames->data.at("state_frames"))
        if (f.at("dimension").get<int>() == d) fam = &f;
    checks.truth("T41 d=" + std::to_string(d) + " states equiangular at 1e-3", field<bool>(fam, "equiangular_1e-3"));
    checks.near("T41 d=" + std::to_string(d) + " frame correlation vs Welch bound", welch_bound(4, d),
                field<double>(fam, "max_frame_correlation"), 1e-4);
  }

  // Dimension witness.
  checks.near("T42 lambda_max bound d=2", 8.0, metric_bound_via_lambda(TaskSpec(4, 2), canonical_metric(TaskSpec(4, 2)), 2), 0.0);
  std::mt19937_64 rng(options.seed);
  for (int d = 2; d <= 3; ++d) {
    double worst = -1e300;
    for (int trial = 0; trial < 500; ++trial) {
      const QuantumModel m = random_model(TaskSpec(4, 2), d, rng);
      const Behavior b = behavior_of(m);
      for (const auto& [label, effects] : m.povms) worst = std::max(worst, lambda_max(comm_matrix(b, label)) - d);
    }
    Check c{"random d=" + std::to_string(d) + " models: max lambda_max - d", 0.0, worst, 1e-6, worst <= 1e-6, {}};
    out.checks.push_back(c);
  }
  return out;
}

std::string render_text(const Report& report) {
  std::ostringstream os;
  os << "picomm " << report.version << "\n";
  for (const MethodResult& r : report.results) {
    os << "\n== " << r.method << " (" << fixed(r.wall_seconds, 2) << " s)\n";
    if (!r.ok) {
      os << "  FAILED: " << r.error << "\n";
      continue;
    }
    const Json& d = r.data;
    const std::string base = r.method.substr(r.method.rfind('/') == std::string::npos ? 0 : r.method.rfind('/') + 1);
    if (base == "classical") {
      os << "  correct rows " << d.at("correct_count") << " / " << d.at("row_count") << " with " << d.at("message_bits")
         << " bit(s)\n"
         << d.at("tables").get<std::string>();
    } else if (base == "seesaw") {
      os << "  d    value            converged\n";
      for (const Json& run : d.at("runs"))
        os << "  " << run.at("dimension") << "    " << fixed(run.at("value").get<double>()) << "    "
           << (run.at("converged").get<bool>() ? "yes" : "no") << "\n";
    } else if (base == "outer") {
      os << "  level-1 bound " << fixed(d.at("bound").get<double>(), 10) << " (" << d.at("status").get<std::string>() << ")\n";
    } else if (base == "contextual") {
      os << "  vertices " << d.at("vertex_count") << ", noncontextual max " << fixed(d.at("nc_max").get<double>())
         << ", behaviour LP bound " << fixed(d.at("behavior_lp_bound").get<double>()) << "\n";
      for (const Json& f : d.at("feasibility")) {
        os << "  d=" << f.at("dimension") << ": " << (f.at("feasible").get<bool>() ? "noncontextual model found" : "contextual") << "\n";
        if (f.contains("certificate"))
          os << "    " << f.at("certificate").at("inequality").get<std::string>() << "\n    achieved "
             << fixed(f.at("certificate").at("achieved").get<double>()) << "\n";
      }
    } else if (base == "frames") {
      if (d.contains("t41_analytic_bound"))
        for (const auto& [dim, v] : d.at("t41_analytic_bound").items()) os << "  analytic bound d=" << dim << ": " << fixed(v.get<double>()) << "\n";
      for (const Json& f : d.at("state_frames")) {
        os << "  d=" << f.at("dimension") << ": correlation " << fixed(f.at("max_frame_correlation").get<double>());
        if (f.contains("welch_bound")) os << ", Welch " << fixed(f.at("welch_bound").get<double>());
        os << ", equiangular " << (f.at("equiangular_1e-3").get<bool>() ? "yes" : "no") << "\n";
      }
    } else if (base == "witness") {
      for (const auto& [dim, v] : d.at("metric_bound_via_lambda").items())
        os << "  lambda_max bound d=" << dim << ": " << (v.is_number() ? fixed(v.get<double>()) : v.get<std::string>()) << "\n";
      for (const Json& m : d.at("models"))
        for (const Json& a : m.at("matrices"))
          os << "  d=" << m.at("dimension") << " " << a.at("verdict").get<std::string>() << " lambda_max " << fixed(a.at("lambda_max").get<double>(), 6)
             << "\n" << a.at("table").get<std::string>();
    }
  }
  if (!report.checks.empty()) {
    os << "\n== checks\n";
    for (const Check& c : report.checks) {
      os << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name << ": expected " << fixed(c.expected) << ", observed "
         << fixed(c.observed) << " (tol " << c.tolerance << ")";
      if (!c.note.empty()) os << " - " << c.note;
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace picomm
