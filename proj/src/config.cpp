#include "dwde/config.hpp"

#include "dwde/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dwde {

namespace {

void check_keys(const json& doc, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!doc.is_object()) throw Error(Errc::config_error, std::string(where) + " must be an object");
  for (const auto& item : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw Error(Errc::config_error, "unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

const json& require(const json& doc, const char* key, std::string_view where) {
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(Errc::config_error, std::string(where) + " needs '" + key + "'");
  return *it;
}

template <class T>
T get_as(const json& value, std::string_view where) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::config_error, std::string(where) + " has the wrong type");
  }
}

std::uint64_t get_seed(const json& value, std::string_view where) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<long long>() >= 0) return value.get<std::uint64_t>();
  throw Error(Errc::config_error, std::string(where) + " must be a non-negative integer");
}

std::size_t get_count(const json& value, std::string_view where) {
  if (!value.is_number_integer() || value.get<long long>() <= 0) {
    throw Error(Errc::config_error, std::string(where) + " must be a positive integer");
  }
  return value.get<std::size_t>();
}

double get_double(const json& value, std::string_view where) {
  if (value.is_number()) return value.get<double>();
  return to_double(rational_from_json(value, where));
}

std::vector<Rational> rationals_from_json(const json& arr, std::string_view where) {
  if (!arr.is_array()) throw Error(Errc::config_error, std::string(where) + " must be an array");
  std::vector<Rational> out;
  for (const auto& v : arr) out.push_back(rational_from_json(v, where));
  return out;
}

json rationals_to_json(const std::vector<Rational>& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(to_string(v));
  return arr;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::classify: return "classify";
    case ExperimentKind::zero_one_scan: return "zero_one_scan";
    case ExperimentKind::transience_check: return "transience_check";
    case ExperimentKind::symmetric_check: return "symmetric_check";
    case ExperimentKind::split_demo: return "split_demo";
  }
  return "classify";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  for (auto k : {ExperimentKind::classify, ExperimentKind::zero_one_scan, ExperimentKind::transience_check,
                 ExperimentKind::symmetric_check, ExperimentKind::split_demo}) {
    if (to_string(k) == text) return k;
  }
  throw Error(Errc::config_error, "unknown experiment kind '" + std::string(text) + "'");
}

Rational rational_from_json(const json& value, std::string_view where) {
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_float()) {
    // Doubles go through their shortest decimal form so 0.25 stays 1/4.
    return parse_rational(json(value).dump());
  }
  throw Error(Errc::config_error, std::string(where) + " must be a number or a \"p/q\" string");
}

MapSpec map_from_json(const json& doc) {
  check_keys(doc, {"name", "breakpoints", "branches", "cells"}, "map");
  MapSpec spec;
  if (doc.contains("cells")) {
    spec = uniform_map_spec(get_count(doc["cells"], "map.cells"));
    if (doc.contains("name")) spec.name = get_as<std::string>(doc["name"], "map.name");
  } else if (!doc.contains("breakpoints") && !doc.contains("branches")) {
    const auto name = get_as<std::string>(require(doc, "name", "map"), "map.name");
    auto named = named_map_spec(name);
    if (!named) throw Error(Errc::config_error, "unknown map '" + name + "'");
    spec = *named;
  } else {
    spec.name = doc.contains("name") ? get_as<std::string>(doc["name"], "map.name") : "custom";
    spec.breakpoints = rationals_from_json(require(doc, "breakpoints", "map"), "map.breakpoints");
    const auto& branches = require(doc, "branches", "map");
    if (!branches.is_array()) throw Error(Errc::config_error, "map.branches must be an array");
    for (const auto& b : branches) {
      check_keys(b, {"slope", "offset"}, "map.branches[]");
      spec.branches.push_back({rational_from_json(require(b, "slope", "branch"), "branch.slope"),
                               rational_from_json(require(b, "offset", "branch"), "branch.offset")});
    }
  }
  build_map(spec);
  return spec;
}

json map_to_json(const MapSpec& spec) {
  json branches = json::array();
  for (const auto& b : spec.branches) branches.push_back({{"slope", to_string(b.slope)}, {"offset", to_string(b.offset)}});
  return {{"name", spec.name}, {"breakpoints", rationals_to_json(spec.breakpoints)}, {"branches", branches}};
}

EnvironmentModel environment_from_json(const json& doc, std::size_t cells) {
  check_keys(doc, {"kind", "support", "weights", "matrix", "stationary", "cuts", "seed"}, "environment");
  EnvironmentModel m;
  m.kind = parse_env_kind(get_as<std::string>(require(doc, "kind", "environment"), "environment.kind"));
  const auto& support = require(doc, "support", "environment");
  if (!support.is_array()) throw Error(Errc::config_error, "environment.support must be an array");
  for (const auto& g : support) m.support.push_back({get_as<std::vector<int>>(g, "environment.support[]")});
  if (doc.contains("weights")) m.weights = rationals_from_json(doc["weights"], "environment.weights");
  if (doc.contains("stationary")) m.stationary = rationals_from_json(doc["stationary"], "environment.stationary");
  if (doc.contains("matrix")) {
    if (!doc["matrix"].is_array()) throw Error(Errc::config_error, "environment.matrix must be an array");
    for (const auto& row : doc["matrix"]) m.matrix.push_back(rationals_from_json(row, "environment.matrix[]"));
  }
  if (doc.contains("cuts")) m.cuts = get_as<std::vector<long long>>(doc["cuts"], "environment.cuts");
  if (doc.contains("seed")) m.seed = get_seed(doc["seed"], "environment.seed");
  validate(m, cells);
  return m;
}

json environment_to_json(const EnvironmentModel& model) {
  json doc;
  doc["kind"] = std::string(to_string(model.kind));
  json support = json::array();
  for (const auto& g : model.support) support.push_back(g.jumps);
  doc["support"] = support;
  if (!model.weights.empty()) doc["weights"] = rationals_to_json(model.weights);
  if (!model.matrix.empty()) {
    json rows = json::array();
    for (const auto& r : model.matrix) rows.push_back(rationals_to_json(r));
    doc["matrix"] = rows;
  }
  if (!model.stationary.empty()) doc["stationary"] = rationals_to_json(model.stationary);
  if (!model.cuts.empty()) doc["cuts"] = model.cuts;
  doc["seed"] = model.seed;
  return doc;
}

ScenarioConfig scenario_from_json(const json& doc) {
  check_keys(doc, {"name", "kind", "map", "environment", "budgets", "thresholds", "seeds", "outputs", "split_barrier"},
             "scenario");
  ScenarioConfig c;
  c.name = doc.contains("name") ? get_as<std::string>(doc["name"], "name") : "scenario";
  c.kind = parse_experiment_kind(get_as<std::string>(require(doc, "kind", "scenario"), "kind"));
  c.map = map_from_json(require(doc, "map", "scenario"));
  c.environment = environment_from_json(require(doc, "environment", "scenario"), c.map.branches.size());

  if (doc.contains("budgets")) {
    const auto& b = doc["budgets"];
    check_keys(b, {"n_envs", "n_walks", "horizon"}, "budgets");
    if (b.contains("n_envs")) c.budgets.n_envs = get_count(b["n_envs"], "budgets.n_envs");
    if (b.contains("n_walks")) c.budgets.n_walks = get_count(b["n_walks"], "budgets.n_walks");
    if (b.contains("horizon")) c.budgets.horizon = get_count(b["horizon"], "budgets.horizon");
  }
  if (doc.contains("thresholds")) {
    const auto& t = doc["thresholds"];
    check_keys(t, {"divergence_margin", "return_goal", "direction_share", "late_return_cap", "split_share"},
               "thresholds");
    auto& th = c.thresholds;
    if (t.contains("divergence_margin")) {
      th.divergence_margin = rational_from_json(t["divergence_margin"], "thresholds.divergence_margin");
    }
    if (t.contains("return_goal")) th.return_goal = get_double(t["return_goal"], "thresholds.return_goal");
    if (t.contains("direction_share")) th.direction_share = get_double(t["direction_share"], "thresholds.direction_share");
    if (t.contains("late_return_cap")) th.late_return_cap = get_double(t["late_return_cap"], "thresholds.late_return_cap");
    if (t.contains("split_share")) th.split_share = get_double(t["split_share"], "thresholds.split_share");
  }
  const auto& th = c.thresholds;
  if (!(th.divergence_margin > 0 && th.divergence_margin < 1)) {
    throw Error(Errc::config_error, "thresholds.divergence_margin must lie in (0,1)");
  }
  for (double v : {th.return_goal, th.direction_share, th.late_return_cap, th.split_share}) {
    if (!(v > 0 && v <= 1)) throw Error(Errc::config_error, "thresholds must lie in (0,1]");
  }
  if (doc.contains("seeds")) {
    const auto& s = doc["seeds"];
    check_keys(s, {"env", "walk"}, "seeds");
    if (s.contains("env")) {
      c.seeds.env = get_seed(s["env"], "seeds.env");
    } else {
      c.seeds.env = c.environment.seed;
    }
    if (s.contains("walk")) c.seeds.walk = get_seed(s["walk"], "seeds.walk");
  } else {
    c.seeds.env = c.environment.seed;
  }
  c.environment.seed = c.seeds.env;
  if (doc.contains("outputs")) {
    const auto& o = doc["outputs"];
    check_keys(o, {"dir", "formats"}, "outputs");
    if (o.contains("dir")) c.outputs.dir = get_as<std::string>(o["dir"], "outputs.dir");
    if (o.contains("formats")) c.outputs.formats = get_as<std::vector<std::string>>(o["formats"], "outputs.formats");
    for (const auto& f : c.outputs.formats) {
      if (f != "csv" && f != "json" && f != "markdown") throw Error(Errc::config_error, "unknown output format '" + f + "'");
    }
  }
  if (doc.contains("split_barrier")) c.split_barrier = static_cast<long long>(get_count(doc["split_barrier"], "split_barrier"));
  return c;
}

json scenario_to_json(const ScenarioConfig& c) {
  const auto& th = c.thresholds;
  return {
      {"name", c.name},
      {"kind", std::string(to_string(c.kind))},
      {"map", map_to_json(c.map)},
      {"environment", environment_to_json(c.environment)},
      {"budgets", {{"n_envs", c.budgets.n_envs}, {"n_walks", c.budgets.n_walks}, {"horizon", c.budgets.horizon}}},
      {"thresholds",
       {{"divergence_margin", to_string(th.divergence_margin)},
        {"return_goal", th.return_goal},
        {"direction_share", th.direction_share},
        {"late_return_cap", th.late_return_cap},
        {"split_share", th.split_share}}},
      {"seeds", {{"env", c.seeds.env}, {"walk", c.seeds.walk}}},
      {"outputs", {{"dir", c.outputs.dir}, {"formats", c.outputs.formats}}},
      {"split_barrier", c.split_barrier},
  };
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_failure, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::config_error, path.string() + ": " + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json_file(path)); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw Error(Errc::io_failure, "cannot write " + path.string());
}

}  // namespace dwde
