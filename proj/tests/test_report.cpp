#include <doctest.h>

#include <picomm/report.hpp>

using namespace picomm;
using doctest::Approx;

namespace {

ExperimentConfig config(TaskSpec task, std::vector<std::string> methods, std::vector<int> dims = {2}) {
  ExperimentConfig c;
  c.task = task;
  c.methods = std::move(methods);
  c.dimensions = std::move(dims);
  c.seed = 7;
  c.restarts = 4;
  return c;
}

const MethodResult& result(const Report& r, const std::string& method) {
  for (const MethodResult& m : r.results)
    if (m.method == method) return m;
  FAIL("missing method " << method);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("config round trip and defaults") {
  ExperimentConfig c = config(TaskSpec(4, 1), {"seesaw", "contextual"}, {2, 3});
  c.metric = "signed_t41";
  c.prep_equivalences = {t41_preparation_equivalence()};
  c.solver.gap_tolerance = 1e-9;
  c.out = "report.json";
  const ExperimentConfig back = config_from_json(Json::parse(to_json(c).dump()));
  CHECK(to_json(back) == to_json(c));
  CHECK(back.prep_equivalences == c.prep_equivalences);
  CHECK(back.solver.gap_tolerance == 1e-9);

  const ExperimentConfig defaults = config_from_json(Json::object());
  CHECK(defaults.restarts == 20);
  CHECK(defaults.dimensions == std::vector<int>{2});
  CHECK(defaults.threads == 1);

  const ExperimentConfig preset = config_from_json(Json{{"task", {{"n", 4}, {"m", 2}}}, {"prep_equivalences", "t42"}});
  CHECK(preset.prep_equivalences == t42_preparation_equivalences());
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config(TaskSpec(3, 1), {"bogus"}).validate(), ConstraintViolation);
  ExperimentConfig c = config(TaskSpec(3, 1), {"classical"});
  c.restarts = 0;
  CHECK_THROWS_AS(c.validate(), ConstraintViolation);
  c = config(TaskSpec(3, 1), {"classical"});
  c.prep_equivalences = {t41_preparation_equivalence()};
  CHECK_THROWS_AS(c.validate(), LookupError);
  c = config(TaskSpec(3, 1), {"classical"});
  c.metric = "signed_t41";
  CHECK_THROWS_AS(c.validate(), ConstraintViolation);
  CHECK(config(TaskSpec(3, 1), {"all"}).resolved_methods() ==
        std::vector<std::string>{"classical", "seesaw", "outer", "contextual", "frames", "witness"});
  CHECK(config(TaskSpec(3, 1), {"witness", "seesaw", "seesaw"}).resolved_methods() == std::vector<std::string>{"seesaw", "witness"});
}

TEST_CASE("classical T31 run") {
  const Report r = run(config(TaskSpec(3, 1), {"classical"}));
  REQUIRE(r.results.size() == 1);
  CHECK(r.all_ok());
  const Json& data = result(r, "classical").data;
  CHECK(data.at("correct_count") == 5);
  CHECK(data.at("row_count") == 6);
  CHECK(data.at("success_fraction").get<double>() == Approx(5.0 / 6.0));
}

TEST_CASE("empty method list gives an empty valid report") {
  const Report r = run(config(TaskSpec(4, 2), {}));
  CHECK(r.results.empty());
  CHECK(r.all_ok());
  CHECK(r.all_checks_passed());
  CHECK(!r.version.empty());
  CHECK(report_from_json(to_json(r)).results.empty());
}

TEST_CASE("full T41 run reports the inner bounds") {
  ExperimentConfig c = config(TaskSpec(4, 1), {"all"}, {2, 3, 4});
  c.restarts = 20;
  const Report r = run(c);
  CHECK(r.all_ok());
  const Json& runs = result(r, "seesaw").data.at("runs");
  REQUIRE(runs.size() == 3);
  CHECK(runs[0].at("value").get<double>() == Approx(10.89897949).epsilon(1e-5 / 12));
  CHECK(runs[1].at("value").get<double>() == Approx(11.65685425).epsilon(1e-5 / 12));
  CHECK(runs[2].at("value").get<double>() == Approx(12.0).epsilon(1e-5 / 12));
  CHECK(result(r, "outer").data.at("bound").get<double>() >= 12.0 - 1e-6);
  CHECK(result(r, "contextual").data.at("vertex_count") == 64);
  CHECK(result(r, "frames").data.at("state_frames").size() == 3);
  CHECK(result(r, "witness").data.at("models").size() == 3);
  const std::string text = render_text(r);
  CHECK(text.find("seesaw") != std::string::npos);
}

TEST_CASE("errors are recorded per method") {
  ExperimentConfig c = config(TaskSpec(4, 2), {"classical", "seesaw"});
  c.message_bits = 5;
  const Report r = run(c);
  CHECK_FALSE(r.all_ok());
  CHECK_FALSE(result(r, "classical").ok);
  CHECK(result(r, "classical").error.find("classical") != std::string::npos);
  CHECK(result(r, "seesaw").ok);
}

TEST_CASE("reports round trip and reruns are identical") {
  const ExperimentConfig c = config(TaskSpec(3, 1), {"classical", "seesaw", "witness"});
  const Report a = run(c);
  const Report b = run(c);
  CHECK(without_volatile_fields(to_json(a)).dump() == without_volatile_fields(to_json(b)).dump());
  const Json j = to_json(a);
  CHECK(to_json(report_from_json(Json::parse(j.dump()))) == j);
  CHECK(without_volatile_fields(j).dump().find("wall_seconds") == std::string::npos);
}

TEST_CASE("dimension one run") {
  const Report r = run(config(TaskSpec(4, 2), {"seesaw"}, {1}));
  const Json& run = result(r, "seesaw").data.at("runs").at(0);
  CHECK(run.at("value").get<double>() == Approx(4.0));
}

TEST_CASE("reproduction with a single restart stays well formed") {
  const Report r = reference_reproduction({1, 1, 1});
  CHECK(r.checks.size() >= 30);
  for (const Check& c : r.checks) {
    CAPTURE(c.name);
    CHECK(!c.name.empty());
  }
  const Json j = to_json(r);
  CHECK(to_json(report_from_json(Json::parse(j.dump()))) == j);
}
