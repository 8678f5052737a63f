// Command-line front end: solve a JSON experiment config, run the reference
// reproduction matrix, or pretty-print stored artifacts.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "picomm/classical.hpp"
#include "picomm/contextuality.hpp"
#include "picomm/quantum.hpp"
#include "picomm/report.hpp"
#include "picomm/serialization.hpp"

namespace {

using picomm::Json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCheckFailed = 2;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw picomm::Error("cannot open " + path);
  return Json::parse(in);
}

void write_output(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw picomm::Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string describe_model(const picomm::QuantumModel& m) {
  std::ostringstream os;
  os << "T_{" << m.task.n() << "," << m.task.m() << "} model in dimension " << m.dimension << "\n";
  const Eigen::IOFormat fmt(6, 0, ", ", "\n", "    [", "]");
  for (const auto& [label, rho] : m.states) os << "state " << picomm::to_string(label) << "\n" << rho.format(fmt) << "\n";
  for (const auto& [label, effects] : m.povms) {
    const picomm::TaskLayout layout(m.task);
    const auto& outs = layout.outcomes(layout.measurement_index(label));
    for (std::size_t k = 0; k < effects.size(); ++k)
      os << "effect " << picomm::to_string(label) << " outcome " << outs[k] << "\n" << effects[k].format(fmt) << "\n";
  }
  const picomm::Behavior b = picomm::behavior_of(m);
  os << "canonical metric " << picomm::evaluate_metric(picomm::canonical_metric(m.task), b) << ", worst row "
     << picomm::worst_case_success(m.task, b) << "\n";
  return os.str();
}

std::string describe(const Json& j) {
  if (j.contains("toolkit") && j.contains("results")) return picomm::render_text(picomm::report_from_json(j));
  if (j.contains("states") && j.contains("povms")) return describe_model(picomm::model_from_json(j));
  if (j.contains("coefficients") && j.contains("bound")) {
    const picomm::FarkasCertificate c = picomm::certificate_from_json(j);
    std::ostringstream os;
    os << c.inequality() << "\nachieved " << c.achieved << " (ratio " << c.ratio() << ")\n";
    return os.str();
  }
  if (j.contains("encoding") && j.contains("decoding")) {
    const picomm::ClassicalStrategy s = picomm::strategy_from_json(j);
    int n = 0;
    for (const auto& [a, msg] : s.encoding)
      for (int i : a) n = std::max(n, i + 1);
    for (const auto& [cell, guess] : s.decoding) {
      for (int i : cell.first) n = std::max(n, i + 1);
      n = std::max(n, guess + 1);
    }
    const int m = s.encoding.empty() ? 1 : static_cast<int>(s.encoding.begin()->first.size());
    return picomm::render_strategy(picomm::TaskSpec(n, m), s);
  }
  if (j.contains("entries")) {
    std::ostringstream os;
    for (const auto& [key, p] : picomm::behavior_from_json(j).probabilities())
      os << "p(" << key.outcome << "|" << picomm::to_string(key.preparation) << "," << picomm::to_string(key.measurement) << ") = " << p
         << "\n";
    return os.str();
  }
  return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds for partial-ignorance communication tasks"};
  app.require_subcommand(1);

  std::string config_path, out_path, task_flag, methods_flag, dims_flag;
  std::uint64_t seed = 0;
  int restarts = 0, threads = 0;
  bool text = false;
  auto* solve = app.add_subcommand("solve", "Run the methods of a JSON experiment config");
  solve->add_option("config", config_path, "Config file (omit to use flags only)");
  solve->add_option("--task", task_flag, "Task as N,M");
  solve->add_option("--methods", methods_flag, "Comma-separated methods");
  solve->add_option("--dims", dims_flag, "Comma-separated dimensions");
  auto* seed_opt = solve->add_option("--seed", seed, "Random seed");
  solve->add_option("--restarts", restarts, "See-saw restarts");
  solve->add_option("--threads", threads, "Worker threads");
  solve->add_option("--out", out_path, "Report path (default stdout)");
  solve->add_flag("--text", text, "Print a human-readable summary to stderr (implied by --out)");

  picomm::ReproductionOptions repro;
  std::string repro_out;
  bool repro_quiet = false;
  auto* reproduce = app.add_subcommand("reproduce", "Run the reference experiment matrix and check every expected number");
  reproduce->add_option("--seed", repro.seed, "Random seed");
  reproduce->add_option("--restarts", repro.restarts, "See-saw restarts");
  reproduce->add_option("--threads", repro.threads, "Worker threads");
  reproduce->add_option("--out", repro_out, "Report path");
  reproduce->add_flag("--quiet", repro_quiet, "Only print the checks");

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "Pretty-print a stored report, model, certificate, strategy or behaviour");
  inspect->add_option("file", inspect_path, "JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*solve) {
      Json j = config_path.empty() ? Json::object() : read_json(config_path);
      if (!task_flag.empty()) {
        const auto parts = split(task_flag, ',');
        if (parts.size() != 2) throw picomm::ConstraintViolation("--task expects N,M");
        j["task"] = {{"n", std::stoi(parts[0])}, {"m", std::stoi(parts[1])}};
      }
      if (!methods_flag.empty()) j["methods"] = split(methods_flag, ',');
      if (!dims_flag.empty()) {
        std::vector<int> dims;
        for (const auto& d : split(dims_flag, ',')) dims.push_back(std::stoi(d));
        j["dimensions"] = dims;
      }
      if (seed_opt->count() > 0) j["seed"] = seed;
      if (restarts > 0) j["restarts"] = restarts;
      if (threads > 0) j["threads"] = threads;
      if (!out_path.empty()) j["out"] = out_path;
      const picomm::ExperimentConfig config = picomm::config_from_json(j);
      const picomm::Report report = picomm::run(config);
      write_output(picomm::to_json(report), config.out);
      if (text || !config.out.empty()) std::cerr << picomm::render_text(report);
      return report.all_ok() ? kExitOk : kExitError;
    }
    if (*reproduce) {
      const picomm::Report report = picomm::reference_reproduction(repro);
      if (!repro_out.empty()) write_output(picomm::to_json(report), repro_out);
      if (repro_quiet) {
        picomm::Report only_checks = report;
        only_checks.results.clear();
        std::cout << picomm::render_text(only_checks);
      } else {
        std::cout << picomm::render_text(report);
      }
      if (!report.all_ok()) return kExitError;
      return report.all_checks_passed() ? kExitOk : kExitCheckFailed;
    }
    if (*inspect) {
      std::cout << describe(read_json(inspect_path));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
