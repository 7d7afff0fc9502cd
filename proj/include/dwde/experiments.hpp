#pragma once

#include "dwde/config.hpp"
#include "dwde/exact.hpp"
#include "dwde/structure.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dwde {

/// Finite-horizon labels; "recurrent-like" because a finite run cannot prove
/// recurrence.
enum class Label { recurrent_like, transient_plus, transient_minus, split, inconclusive };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);

/// Walk-level event fractions (Monte Carlo) or probabilities (DP).
struct Evidence {
  double return_fraction = 0.0;  // back at the start by N
  double right_fraction = 0.0;   // final site > start + margin N
  double left_fraction = 0.0;    // final site < start - margin N
  double late_return = 0.0;      // a return in (N/2, N]
};

/// transient+ if right >= direction_share and late <= late_return_cap,
/// transient- mirrored, recurrent-like if return >= return_goal, split if
/// both directions exceed split_share, inconclusive otherwise (first match).
Label apply_rule(const Evidence& e, const Thresholds& t);

struct DpCheck {
  Label label = Label::inconclusive;
  Evidence probabilities;
  double dropped_mass = 0.0;
};

struct EnvVerdict {
  std::size_t env_index = 0;
  std::uint64_t env_seed = 0;
  std::size_t walks = 0;
  Label label = Label::inconclusive;
  Evidence mc;
  std::optional<DpCheck> dp;
  bool borderline = false;   // DP sits within sampling noise of a threshold
  bool consistent = true;    // MC agrees with DP (always true without DP)
};

struct Aggregate {
  std::map<Label, std::size_t> counts;
  std::optional<Label> consensus;      // majority among decisive labels
  bool homogeneous = true;             // every decisive label equals the consensus
  std::vector<std::size_t> dissenters; // env indices
};

struct CertificateSummary {
  bool applicable = false;
  std::string reason;  // why not applicable
  std::size_t r = 0;
  bool holds = false;
  int direction = 0;
  double inf_h = 0.0;
  double threshold = 0.0;
};

struct SolomonSummary {
  bool applicable = false;
  std::string reason;
  double expectation = 0.0;
  bool exact_zero = false;
  SolomonVerdict verdict = SolomonVerdict::recurrent;
};

struct SplitSummary {
  long long barrier = 0;
  Rational hit_right;           // exact P(+B before -B) from 0
  double mc_right_fraction = 0; // walks ending right, over all environments
};

struct ScenarioResult {
  std::string name;
  ExperimentKind kind = ExperimentKind::classify;
  std::string map_name;
  std::string environment_kind;
  Budgets budgets;
  Thresholds thresholds;
  Seeds seeds;
  std::vector<EnvVerdict> envs;
  Aggregate aggregate;
  CertificateSummary certificate;
  SolomonSummary solomon;
  LinkageCheck linkage;
  bool symmetric = false;
  int jump_bound = 0;
  std::optional<SplitSummary> split;
  bool consistent = true;
};

/// Monte Carlo labels per environment with DP cross-checks whenever the map
/// has full branches. Throws BudgetExceeded.
ScenarioResult classify(const ScenarioConfig& config);
/// classify plus the homogeneity verdict; needs an iid or markov model.
ScenarioResult zero_one_scan(const ScenarioConfig& config);
/// Dispatches on config.kind.
ScenarioResult run_scenario(const ScenarioConfig& config);

CertificateSummary certificate_summary(const MarkovIntervalMap& map, const EnvironmentModel& model);
SolomonSummary solomon_summary(const MarkovIntervalMap& map, const EnvironmentModel& model);
Aggregate aggregate_labels(const std::vector<EnvVerdict>& envs);

json result_to_json(const ScenarioResult& result);
ScenarioResult result_from_json(const json& doc);

std::string report_csv(const ScenarioResult& result);
std::string report_json(const ScenarioResult& result);
std::string report_markdown(const ScenarioResult& result);

/// Writes <dir>/<name>.{csv,json,md} for the requested formats (all three
/// when `formats` is empty). Throws IoFailure.
std::vector<std::string> write_reports(const ScenarioResult& result, const std::string& dir,
                                       const std::vector<std::string>& formats);

}  // namespace dwde
