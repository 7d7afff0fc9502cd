#pragma once

#include "dwde/environment.hpp"
#include "dwde/markov_map.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dwde {

using json = nlohmann::json;

enum class ExperimentKind { classify, zero_one_scan, transience_check, symmetric_check, split_demo };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view text);

struct Budgets {
  std::size_t n_envs = 1;
  std::size_t n_walks = 1000;
  std::size_t horizon = 1000;
};

/// Finite-horizon surrogates for divergence and recurrence.
struct Thresholds {
  Rational divergence_margin = ratio(1, 6);  // fraction of the horizon
  double return_goal = 0.9;
  double direction_share = 0.95;  // walks ending beyond +-margin * N
  double late_return_cap = 0.01;  // walks returning after N / 2
  double split_share = 0.2;       // per direction for a split label
};

struct Seeds {
  std::uint64_t env = 0;   // overrides the environment's own seed
  std::uint64_t walk = 0;
};

struct Outputs {
  std::string dir;                   // empty: no files
  std::vector<std::string> formats;  // subset of csv, json, markdown
};

struct ScenarioConfig {
  std::string name;
  ExperimentKind kind = ExperimentKind::classify;
  MapSpec map;
  EnvironmentModel environment;
  Budgets budgets;
  Thresholds thresholds;
  Seeds seeds;
  Outputs outputs;
  long long split_barrier = 50;  // hit_before(-B, +B) for split_demo
};

/// Accepts a JSON number, an integer, or a "p/q" / decimal string.
Rational rational_from_json(const json& value, std::string_view where);

/// {"name": "triple"} selects a built-in map; otherwise "breakpoints" and
/// "branches" ({"slope", "offset"}) are required. The result is validated.
MapSpec map_from_json(const json& doc);
json map_to_json(const MapSpec& spec);

EnvironmentModel environment_from_json(const json& doc, std::size_t cells = 0);
json environment_to_json(const EnvironmentModel& model);

/// Throws ConfigError (unknown key, bad type, out-of-range value) or the
/// map/environment validation errors.
ScenarioConfig scenario_from_json(const json& doc);
json scenario_to_json(const ScenarioConfig& config);

/// Throws IoFailure when the file cannot be read, ConfigError on bad JSON.
json read_json_file(const std::filesystem::path& path);
ScenarioConfig load_scenario(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dwde
