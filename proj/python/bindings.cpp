// Thin Python layer over the C++ core. Documents cross the boundary as JSON
// text; exact rationals come back as "p/q" strings.

#include "dwde/config.hpp"
#include "dwde/error.hpp"
#include "dwde/exact.hpp"
#include "dwde/experiments.hpp"
#include "dwde/walk.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdlib>

namespace py = pybind11;
using namespace dwde;

namespace {

MarkovIntervalMap load_map(const std::string& map) {
  if (named_map_spec(map)) return named_map(map);
  return build_map(map_from_json(json::parse(map)));
}

EnvironmentRealization load_env(const MarkovIntervalMap& map, const std::string& env, std::optional<std::uint64_t> seed) {
  auto model = environment_from_json(json::parse(env), map.size());
  const auto s = seed.value_or(model.seed);
  return realize(model, s);
}

long long jump_bound(const EnvironmentRealization& env) {
  return std::max(1, symmetry_and_bounds(env.model()).jump_bound_M);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "deterministic walks in deterministic environments";

  static py::exception<Error> error_type(m, "DwdeError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error_type((std::string(errc_name(e.code())) + ": " + e.what()).c_str());
    } catch (const nlohmann::json::exception& e) {
      error_type((std::string("ConfigError: ") + e.what()).c_str());
    }
  });

  m.def("map_names", [] { return std::vector<std::string>{"doubling", "triple", "quad", "quint", "slopes244", "markov3"}; });

  m.def(
      "cylinder_measure",
      [](const std::string& map, const std::vector<std::size_t>& word) {
        return to_string(cylinder_measure(load_map(map), word));
      },
      py::arg("map"), py::arg("word"));

  m.def(
      "simulate",
      [](const std::string& map, const std::string& env, std::size_t steps, std::uint64_t seed, long long start,
         const std::string& mode, std::optional<std::uint64_t> env_seed) {
        const auto mp = load_map(map);
        const auto e = load_env(mp, env, env_seed);
        SimulateOptions opt;
        opt.steps = steps;
        opt.walk_seed = seed;
        opt.mode = parse_sim_mode(mode);
        std::optional<Rational> x;
        if (opt.mode == SimMode::exact) x = random_rational_point(seed);
        return simulate(mp, e, start, x, opt).sites;
      },
      py::arg("map"), py::arg("env"), py::arg("steps"), py::arg("seed") = 0, py::arg("start") = 0,
      py::arg("mode") = "symbolic", py::arg("env_seed") = py::none());

  m.def(
      "return_probability",
      [](const std::string& map, const std::string& env, std::size_t horizon, long long start,
         std::optional<std::uint64_t> env_seed) {
        const auto mp = load_map(map);
        const auto e = load_env(mp, env, env_seed);
        const auto chain =
            build_site_chain(mp, e, std::abs(start) + static_cast<long long>(horizon) * jump_bound(e) + 1, true);
        return to_string(return_prob_by_time(chain, start, horizon));
      },
      py::arg("map"), py::arg("env"), py::arg("horizon"), py::arg("start") = 0, py::arg("env_seed") = py::none());

  m.def(
      "hit_before",
      [](const std::string& map, const std::string& env, long long a, long long b, long long start,
         std::optional<std::uint64_t> env_seed) {
        const auto mp = load_map(map);
        const auto e = load_env(mp, env, env_seed);
        const long long W = std::max(std::abs(a), std::abs(b)) + 1;
        return to_string(hit_before(build_site_chain(mp, e, W), start, a, b));
      },
      py::arg("map"), py::arg("env"), py::arg("a"), py::arg("b"), py::arg("start") = 0,
      py::arg("env_seed") = py::none());

  m.def(
      "path_counts",
      [](std::size_t n_max, std::size_t k_max) {
        const auto t = path_counts(n_max, k_max);
        std::vector<std::vector<std::string>> out(n_max + 1, std::vector<std::string>(k_max + 1));
        for (std::size_t n = 0; n <= n_max; ++n)
          for (std::size_t k = 0; k <= k_max; ++k) out[n][k] = to_string(t.at(n, k));
        return out;
      },
      py::arg("n_max"), py::arg("k_max"));

  m.def(
      "transience_certificate",
      [](const std::string& map, std::size_t r) {
        const auto c = transience_certificate(load_map(map), r);
        py::dict d;
        d["holds"] = c.holds;
        d["direction"] = c.direction;
        d["inf_h"] = c.inf_h;
        d["threshold"] = c.threshold;
        return d;
      },
      py::arg("map"), py::arg("r"));

  m.def(
      "run_scenario",
      [](const std::string& config) {
        const auto result = run_scenario(scenario_from_json(json::parse(config)));
        return report_json(result);
      },
      py::arg("config"));

  m.def(
      "report",
      [](const std::string& result_json, const std::string& format) {
        const auto r = result_from_json(json::parse(result_json));
        if (format == "csv") return report_csv(r);
        if (format == "markdown") return report_markdown(r);
        return report_json(r);
      },
      py::arg("result"), py::arg("format") = "json");
}
