#include "dwde/config.hpp"
#include "dwde/error.hpp"
#include "dwde/experiments.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace dwde;
using testing::fn;

namespace {

json small_scenario() {
  return json::parse(R"({
    "name": "tiny",
    "kind": "classify",
    "map": {"name": "triple"},
    "environment": {"kind": "iid", "support": [[1, 1, -1], [1, -1, -1]], "weights": ["1/2", "1/2"], "seed": 9},
    "budgets": {"n_envs": 2, "n_walks": 50, "horizon": 200},
    "thresholds": {"divergence_margin": "1/6", "return_goal": 0.9},
    "seeds": {"walk": 3},
    "outputs": {"dir": "", "formats": ["csv"]}
  })");
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::config_error;
}

}  // namespace

TEST_CASE("rational values parse from numbers and strings") {
  CHECK(rational_from_json(json("2/6"), "x") == ratio(1, 3));
  CHECK(rational_from_json(json(3), "x") == 3);
  CHECK(rational_from_json(json("0.25"), "x") == ratio(1, 4));
  CHECK(rational_from_json(json(0.5), "x") == ratio(1, 2));
  CHECK(code_of([] { rational_from_json(json("a/b"), "x"); }) == Errc::config_error);
}

TEST_CASE("scenario survives a JSON round trip") {
  const auto config = scenario_from_json(small_scenario());
  CHECK(config.name == "tiny");
  CHECK(config.kind == ExperimentKind::classify);
  CHECK(config.environment.seed == 9);  // no seeds.env, the environment keeps its own
  CHECK(config.budgets.n_walks == 50);
  const auto again = scenario_from_json(scenario_to_json(config));
  CHECK(scenario_to_json(again) == scenario_to_json(config));
  CHECK(again.thresholds.divergence_margin == ratio(1, 6));
  CHECK(again.environment.weights == config.environment.weights);
}

TEST_CASE("seeds.env overrides the environment seed") {
  auto doc = small_scenario();
  doc["seeds"]["env"] = 77;
  CHECK(scenario_from_json(doc).environment.seed == 77);
}

TEST_CASE("unknown keys and bad values are config errors") {
  auto doc = small_scenario();
  doc["budgetz"] = 1;
  CHECK(code_of([&] { scenario_from_json(doc); }) == Errc::config_error);

  doc = small_scenario();
  doc["environment"]["colour"] = "red";
  CHECK(code_of([&] { scenario_from_json(doc); }) == Errc::config_error);

  doc = small_scenario();
  doc["kind"] = "nonsense";
  CHECK(code_of([&] { scenario_from_json(doc); }) == Errc::config_error);

  doc = small_scenario();
  doc["map"] = {{"name", "no-such-map"}};
  CHECK_THROWS_AS(scenario_from_json(doc), Error);
}

TEST_CASE("explicit maps round trip and are validated") {
  const auto spec = *named_map_spec("slopes244");
  const auto back = map_from_json(map_to_json(spec));
  CHECK(back.breakpoints == spec.breakpoints);
  CHECK(build_map(back).size() == 3);

  auto bad = map_to_json(spec);
  bad["breakpoints"] = json::array({"0", "3/4", "1/2", "1"});
  CHECK_THROWS_AS(build_map(map_from_json(bad)), Error);
}

TEST_CASE("environment models round trip") {
  auto m = testing::iid_model({fn({1, -1}), fn({-1, 1})}, {ratio(1, 3), ratio(2, 3)}, 5);
  const auto back = environment_from_json(environment_to_json(m), 2);
  CHECK(back.kind == EnvKind::iid);
  CHECK(back.weights == m.weights);
  CHECK(back.seed == 5);
  CHECK(back.support[1].jumps == std::vector<int>{-1, 1});
}

TEST_CASE("missing files are io failures") {
  CHECK(code_of([] { read_json_file("/nonexistent/x.json"); }) == Errc::io_failure);
  const auto path = std::filesystem::temp_directory_path() / "dwde_bad.json";
  std::ofstream(path) << "{ not json";
  CHECK(code_of([&] { read_json_file(path); }) == Errc::config_error);
  std::filesystem::remove(path);
}

TEST_CASE("decision rule takes the first matching label") {
  const Thresholds t;
  CHECK(apply_rule({0.0, 0.99, 0.0, 0.0}, t) == Label::transient_plus);
  CHECK(apply_rule({0.0, 0.0, 0.97, 0.005}, t) == Label::transient_minus);
  // Right share is high but late returns are too frequent.
  CHECK(apply_rule({0.95, 0.99, 0.0, 0.5}, t) == Label::recurrent_like);
  CHECK(apply_rule({0.1, 0.45, 0.45, 0.0}, t) == Label::split);
  CHECK(apply_rule({0.1, 0.7, 0.1, 0.0}, t) == Label::inconclusive);
  for (auto l : {Label::recurrent_like, Label::transient_plus, Label::transient_minus, Label::split,
                 Label::inconclusive}) {
    CHECK(parse_label(to_string(l)) == l);
  }
}

TEST_CASE("aggregation ignores inconclusive environments") {
  std::vector<EnvVerdict> envs(4);
  envs[0].label = Label::transient_plus;
  envs[1].label = Label::transient_plus;
  envs[2].label = Label::inconclusive;
  envs[3].label = Label::transient_plus;
  for (std::size_t i = 0; i < 4; ++i) envs[i].env_index = i;
  auto a = aggregate_labels(envs);
  CHECK(a.consensus == Label::transient_plus);
  CHECK(a.homogeneous);
  envs[2].label = Label::transient_minus;
  a = aggregate_labels(envs);
  CHECK_FALSE(a.homogeneous);
  CHECK(a.dissenters == std::vector<std::size_t>{2});
}

TEST_CASE("certificate and Solomon summaries") {
  const auto triple = named_map("triple");
  const auto m = testing::iid_model({fn({1, 1, -1}), fn({1, -1, 1})}, {ratio(1, 2), ratio(1, 2)});
  const auto c = certificate_summary(triple, m);
  CHECK(c.applicable);
  CHECK(c.r == 2);
  CHECK(c.holds);
  CHECK(c.direction == 1);

  const auto s = solomon_summary(triple, m);
  CHECK(s.applicable);
  CHECK(s.verdict == SolomonVerdict::right);

  // Mixed r is outside the certificate's hypothesis.
  const auto mixed = testing::iid_model({fn({1, 1, -1}), fn({1, -1, -1})}, {ratio(1, 2), ratio(1, 2)});
  CHECK_FALSE(certificate_summary(triple, mixed).applicable);
}

TEST_CASE("classify runs, reports are deterministic and round trip") {
  const auto config = scenario_from_json(small_scenario());
  const auto a = run_scenario(config);
  const auto b = run_scenario(config);
  CHECK(a.envs.size() == 2);
  CHECK(report_csv(a) == report_csv(b));
  CHECK(report_json(a) == report_json(b));
  CHECK(report_markdown(a) == report_markdown(b));
  for (const auto& v : a.envs) CHECK(v.dp.has_value());

  const auto back = result_from_json(result_to_json(a));
  CHECK(report_json(back) == report_json(a));
  CHECK(report_csv(back) == report_csv(a));
}

TEST_CASE("empty result gives a header-only csv") {
  ScenarioResult r;
  r.name = "empty";
  const auto csv = report_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
  CHECK(csv.rfind("env_index,env_seed,walks,label", 0) == 0);
}

TEST_CASE("budget and model checks before any walk") {
  auto config = scenario_from_json(small_scenario());
  config.budgets = {1000, 100000, 1000000};
  CHECK(code_of([&] { classify(config); }) == Errc::budget_exceeded);

  config = scenario_from_json(small_scenario());
  config.kind = ExperimentKind::zero_one_scan;
  config.environment = testing::fixed_model(fn({1, 1, -1}));
  CHECK_THROWS_AS(run_scenario(config), Error);
}

TEST_CASE("reports are written where asked") {
  auto config = scenario_from_json(small_scenario());
  config.budgets = {1, 20, 50};
  const auto r = run_scenario(config);
  const auto dir = std::filesystem::temp_directory_path() / "dwde_reports";
  std::filesystem::remove_all(dir);
  const auto files = write_reports(r, dir.string(), {});
  CHECK(files.size() == 3);
  for (const auto& f : files) CHECK(std::filesystem::exists(f));
  std::filesystem::remove_all(dir);
}
