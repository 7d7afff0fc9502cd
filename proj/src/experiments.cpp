#include "dwde/experiments.hpp"

#include "dwde/error.hpp"
#include "dwde/walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>

namespace dwde {

namespace {

constexpr Label kLabels[] = {Label::recurrent_like, Label::transient_plus, Label::transient_minus, Label::split,
                             Label::inconclusive};

// Tolerance on a frequency estimated from n walks when the truth is p.
double noise(double p, std::size_t n) {
  const double nn = static_cast<double>(n);
  return 5.0 * std::sqrt(std::max(p * (1.0 - p), 0.0) / nn) + 2.0 / nn;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Evidence evidence_of(const EnvSummary& s, long long start, std::size_t horizon, double cut) {
  Evidence e;
  if (s.walks.empty()) return e;
  std::size_t ret = 0, right = 0, left = 0, late = 0;
  for (const auto& w : s.walks) {
    const double d = static_cast<double>(w.final_site - start);
    ret += w.first_return_time.has_value();
    right += d > cut;
    left += d < -cut;
    late += w.last_return_time && *w.last_return_time > horizon / 2;
  }
  const double n = static_cast<double>(s.walks.size());
  e.return_fraction = static_cast<double>(ret) / n;
  e.right_fraction = static_cast<double>(right) / n;
  e.left_fraction = static_cast<double>(left) / n;
  e.late_return = static_cast<double>(late) / n;
  return e;
}

// Reduced collapsed chains depend only on the per-site jump laws, so
// environments with the same sequence of laws share one DP run.
class ChainCache {
 public:
  ChainCache(const MarkovIntervalMap& map, const EnvironmentModel& model) : map_(map) {
    std::vector<std::map<int, Rational>> laws;
    for (const auto& g : model.support) {
      std::map<int, Rational> law;
      for (std::size_t j = 0; j < map.size(); ++j) law[g[j]] += map.measures()[j];
      auto it = std::find(laws.begin(), laws.end(), law);
      class_of_.push_back(static_cast<std::uint32_t>(it - laws.begin()));
      if (it == laws.end()) laws.push_back(std::move(law));
    }
  }

  DpCheck get(const EnvironmentRealization& env, std::size_t horizon, double margin, const Thresholds& th) {
    const long long M = std::max(1, symmetry_and_bounds(env.model()).jump_bound_M);
    const long long W = static_cast<long long>(horizon) * M + 1;
    std::vector<std::uint32_t> key;
    key.reserve(static_cast<std::size_t>(2 * W + 1));
    for (long long i = -W; i <= W; ++i) key.push_back(class_of_[env.index_at(i)]);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const auto chain = build_site_chain(map_, env, W);
    const auto prof = horizon_profile(chain, 0, horizon, margin);
    DpCheck dp;
    dp.probabilities = {prof.return_by_horizon, prof.final_above, prof.final_below, prof.late_return};
    dp.label = apply_rule(dp.probabilities, th);
    dp.dropped_mass = prof.dropped_mass;
    cache_.emplace(std::move(key), dp);
    return dp;
  }

 private:
  const MarkovIntervalMap& map_;
  std::vector<std::uint32_t> class_of_;
  std::map<std::vector<std::uint32_t>, DpCheck> cache_;
};

void cross_check(EnvVerdict& v, const Thresholds& th) {
  const auto& dp = v.dp->probabilities;
  const auto& mc = v.mc;
  const std::size_t n = v.walks;
  const double slack = v.dp->dropped_mass;
  const bool values_agree = std::abs(mc.return_fraction - dp.return_fraction) <= noise(dp.return_fraction, n) + slack &&
                            std::abs(mc.right_fraction - dp.right_fraction) <= noise(dp.right_fraction, n) + slack &&
                            std::abs(mc.left_fraction - dp.left_fraction) <= noise(dp.left_fraction, n) + slack &&
                            std::abs(mc.late_return - dp.late_return) <= noise(dp.late_return, n) + slack;
  auto near = [&](double p, double tau) { return std::abs(p - tau) <= noise(tau, n) + slack; };
  v.borderline = near(dp.right_fraction, th.direction_share) || near(dp.left_fraction, th.direction_share) ||
                 near(dp.late_return, th.late_return_cap) || near(dp.return_fraction, th.return_goal) ||
                 near(dp.right_fraction, th.split_share) || near(dp.left_fraction, th.split_share);
  v.consistent = values_agree && (v.label == v.dp->label || v.borderline);
}

}  // namespace

std::string_view to_string(Label label) {
  switch (label) {
    case Label::recurrent_like: return "recurrent-like";
    case Label::transient_plus: return "transient+";
    case Label::transient_minus: return "transient-";
    case Label::split: return "split";
    case Label::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Label parse_label(std::string_view text) {
  for (auto l : kLabels) {
    if (to_string(l) == text) return l;
  }
  throw Error(Errc::config_error, "unknown label '" + std::string(text) + "'");
}

Label apply_rule(const Evidence& e, const Thresholds& t) {
  if (e.right_fraction >= t.direction_share && e.late_return <= t.late_return_cap) return Label::transient_plus;
  if (e.left_fraction >= t.direction_share && e.late_return <= t.late_return_cap) return Label::transient_minus;
  if (e.return_fraction >= t.return_goal) return Label::recurrent_like;
  if (e.right_fraction > t.split_share && e.left_fraction > t.split_share) return Label::split;
  return Label::inconclusive;
}

CertificateSummary certificate_summary(const MarkovIntervalMap& map, const EnvironmentModel& model) {
  CertificateSummary out;
  if (!map.full_branch()) {
    out.reason = "map does not have full branches";
    return out;
  }
  std::optional<std::size_t> r;
  for (const auto& g : model.support) {
    if (!std::all_of(g.jumps.begin(), g.jumps.end(), [](int v) { return v == 1 || v == -1; })) {
      out.reason = "support function " + to_string(g) + " is not +-1 valued";
      return out;
    }
    const auto plus = static_cast<std::size_t>(std::count(g.jumps.begin(), g.jumps.end(), 1));
    if (r && *r != plus) {
      out.reason = "support functions have different numbers of +1 cells";
      return out;
    }
    r = plus;
  }
  if (!r || *r == 0 || *r >= map.size()) {
    out.reason = "r must lie in [1, #beta - 1]";
    return out;
  }
  const auto cert = transience_certificate(map, *r, model.support);
  out.applicable = true;
  out.r = *r;
  out.holds = cert.holds;
  out.direction = cert.direction;
  out.inf_h = cert.inf_h;
  out.threshold = cert.threshold;
  return out;
}

SolomonSummary solomon_summary(const MarkovIntervalMap& map, const EnvironmentModel& model) {
  SolomonSummary out;
  try {
    const auto support = alpha_support(map, model);
    const auto res = solomon_classifier(support);
    out.applicable = true;
    out.expectation = res.expectation;
    out.exact_zero = res.exact_zero;
    out.verdict = res.verdict;
  } catch (const Error& e) {
    out.reason = e.what();
  }
  return out;
}

Aggregate aggregate_labels(const std::vector<EnvVerdict>& envs) {
  Aggregate a;
  for (auto l : kLabels) a.counts[l] = 0;
  for (const auto& v : envs) ++a.counts[v.label];
  std::size_t best = 0;
  for (auto l : kLabels) {
    if (l == Label::inconclusive) continue;
    if (a.counts[l] > best) {
      best = a.counts[l];
      a.consensus = l;
    }
  }
  for (const auto& v : envs) {
    if (v.label != Label::inconclusive && a.consensus && v.label != *a.consensus) a.dissenters.push_back(v.env_index);
  }
  a.homogeneous = a.dissenters.empty();
  return a;
}

ScenarioResult classify(const ScenarioConfig& config) {
  const auto map = build_map(config.map);
  EnvironmentModel model = config.environment;
  model.seed = config.seeds.env;
  validate(model, map.size());

  ScenarioResult res;
  res.name = config.name;
  res.kind = config.kind;
  res.map_name = map.name();
  res.environment_kind = std::string(to_string(model.kind));
  res.budgets = config.budgets;
  res.thresholds = config.thresholds;
  res.seeds = config.seeds;
  res.certificate = certificate_summary(map, model);
  res.solomon = solomon_summary(map, model);
  res.linkage = check_linkage(map, model.support);
  const auto sb = symmetry_and_bounds(model);
  res.symmetric = sb.is_symmetric;
  res.jump_bound = sb.jump_bound_M;

  EnsembleOptions opt;
  opt.n_envs = config.budgets.n_envs;
  opt.n_walks = config.budgets.n_walks;
  opt.steps = config.budgets.horizon;
  opt.master_seed = config.seeds.walk;
  const double margin = to_double(config.thresholds.divergence_margin);
  const double cut = margin * static_cast<double>(opt.steps);

  const double work = static_cast<double>(opt.n_envs) * static_cast<double>(opt.n_walks) *
                      static_cast<double>(opt.steps);
  if (work > opt.budget) {
    throw Error(Errc::budget_exceeded, "scenario needs " + std::to_string(work) + " walk-steps");
  }
  auto shared = std::make_shared<const EnvironmentModel>(model);
  std::optional<ChainCache> cache;
  if (map.full_branch()) cache.emplace(map, model);

  for (std::size_t e = 0; e < opt.n_envs; ++e) {
    EnvironmentRealization env(shared, env_seed_for(model.seed, e));
    const auto summary = run_walks(map, env, e, opt);
    EnvVerdict v;
    v.env_index = e;
    v.env_seed = env.env_seed();
    v.walks = summary.walks.size();
    v.mc = evidence_of(summary, opt.start_site, opt.steps, cut);
    v.label = apply_rule(v.mc, config.thresholds);
    if (cache) {
      v.dp = cache->get(env, opt.steps, margin, config.thresholds);
      cross_check(v, config.thresholds);
    }
    res.consistent = res.consistent && v.consistent;
    res.envs.push_back(v);
  }
  res.aggregate = aggregate_labels(res.envs);
  return res;
}

ScenarioResult zero_one_scan(const ScenarioConfig& config) {
  if (config.environment.kind != EnvKind::iid && config.environment.kind != EnvKind::markov) {
    throw Error(Errc::config_error, "zero-one scan needs an iid or markov environment");
  }
  return classify(config);
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  switch (config.kind) {
    case ExperimentKind::zero_one_scan: return zero_one_scan(config);
    case ExperimentKind::split_demo: {
      auto res = classify(config);
      const auto map = build_map(config.map);
      EnvironmentModel model = config.environment;
      model.seed = config.seeds.env;
      auto env = realize(model, env_seed_for(model.seed, 0));
      const long long M = std::max(1, res.jump_bound);
      const auto chain = build_site_chain(map, env, config.split_barrier + M + 1);
      SplitSummary s;
      s.barrier = config.split_barrier;
      s.hit_right = hit_before(chain, 0, -config.split_barrier, config.split_barrier);
      double right = 0, walks = 0;
      for (const auto& v : res.envs) {
        right += v.mc.right_fraction * static_cast<double>(v.walks);
        walks += static_cast<double>(v.walks);
      }
      s.mc_right_fraction = walks > 0 ? right / walks : 0.0;
      res.split = s;
      return res;
    }
    default: return classify(config);
  }
}

// ---------------------------------------------------------------------------
// serialisation

namespace {

json evidence_to_json(const Evidence& e) {
  return {{"return", e.return_fraction}, {"right", e.right_fraction}, {"left", e.left_fraction}, {"late_return", e.late_return}};
}

Evidence evidence_from_json(const json& j) {
  return {j.at("return").get<double>(), j.at("right").get<double>(), j.at("left").get<double>(),
          j.at("late_return").get<double>()};
}

}  // namespace

json result_to_json(const ScenarioResult& r) {
  json envs = json::array();
  for (const auto& v : r.envs) {
    json e = {{"env_index", v.env_index}, {"env_seed", v.env_seed}, {"walks", v.walks},
              {"label", std::string(to_string(v.label))}, {"mc", evidence_to_json(v.mc)},
              {"borderline", v.borderline}, {"consistent", v.consistent}};
    if (v.dp) {
      e["dp"] = {{"label", std::string(to_string(v.dp->label))},
                 {"probabilities", evidence_to_json(v.dp->probabilities)},
                 {"dropped_mass", v.dp->dropped_mass}};
    }
    envs.push_back(e);
  }
  json counts = json::object();
  for (const auto& [l, n] : r.aggregate.counts) counts[std::string(to_string(l))] = n;
  json agg = {{"counts", counts}, {"homogeneous", r.aggregate.homogeneous}, {"dissenters", r.aggregate.dissenters}};
  agg["consensus"] = r.aggregate.consensus ? json(std::string(to_string(*r.aggregate.consensus))) : json(nullptr);
  const auto& c = r.certificate;
  const auto& s = r.solomon;
  json doc = {
      {"name", r.name},
      {"kind", std::string(to_string(r.kind))},
      {"map", r.map_name},
      {"environment", r.environment_kind},
      {"budgets", {{"n_envs", r.budgets.n_envs}, {"n_walks", r.budgets.n_walks}, {"horizon", r.budgets.horizon}}},
      {"thresholds",
       {{"divergence_margin", to_string(r.thresholds.divergence_margin)},
        {"return_goal", r.thresholds.return_goal},
        {"direction_share", r.thresholds.direction_share},
        {"late_return_cap", r.thresholds.late_return_cap},
        {"split_share", r.thresholds.split_share}}},
      {"seeds", {{"env", r.seeds.env}, {"walk", r.seeds.walk}}},
      {"certificate",
       {{"applicable", c.applicable}, {"reason", c.reason}, {"r", c.r}, {"holds", c.holds},
        {"direction", c.direction}, {"inf_h", c.inf_h}, {"threshold", c.threshold}}},
      {"solomon",
       {{"applicable", s.applicable}, {"reason", s.reason}, {"expectation", s.expectation},
        {"exact_zero", s.exact_zero}, {"verdict", std::string(to_string(s.verdict))}}},
      {"linkage", {{"holds", r.linkage.holds}, {"witness", r.linkage.witness}}},
      {"symmetric", r.symmetric},
      {"jump_bound", r.jump_bound},
      {"aggregate", agg},
      {"consistent", r.consistent},
      {"environments", envs},
  };
  if (r.split) {
    doc["split"] = {{"barrier", r.split->barrier},
                    {"hit_right", to_string(r.split->hit_right)},
                    {"mc_right_fraction", r.split->mc_right_fraction}};
  }
  return doc;
}

ScenarioResult result_from_json(const json& doc) {
  try {
    ScenarioResult r;
    r.name = doc.at("name").get<std::string>();
    r.kind = parse_experiment_kind(doc.at("kind").get<std::string>());
    r.map_name = doc.at("map").get<std::string>();
    r.environment_kind = doc.at("environment").get<std::string>();
    const auto& b = doc.at("budgets");
    r.budgets = {b.at("n_envs").get<std::size_t>(), b.at("n_walks").get<std::size_t>(), b.at("horizon").get<std::size_t>()};
    const auto& t = doc.at("thresholds");
    r.thresholds.divergence_margin = parse_rational(t.at("divergence_margin").get<std::string>());
    r.thresholds.return_goal = t.at("return_goal").get<double>();
    r.thresholds.direction_share = t.at("direction_share").get<double>();
    r.thresholds.late_return_cap = t.at("late_return_cap").get<double>();
    r.thresholds.split_share = t.at("split_share").get<double>();
    r.seeds = {doc.at("seeds").at("env").get<std::uint64_t>(), doc.at("seeds").at("walk").get<std::uint64_t>()};
    const auto& c = doc.at("certificate");
    r.certificate = {c.at("applicable").get<bool>(), c.at("reason").get<std::string>(), c.at("r").get<std::size_t>(),
                     c.at("holds").get<bool>(), c.at("direction").get<int>(), c.at("inf_h").get<double>(),
                     c.at("threshold").get<double>()};
    const auto& s = doc.at("solomon");
    r.solomon.applicable = s.at("applicable").get<bool>();
    r.solomon.reason = s.at("reason").get<std::string>();
    r.solomon.expectation = s.at("expectation").get<double>();
    r.solomon.exact_zero = s.at("exact_zero").get<bool>();
    const auto verdict = s.at("verdict").get<std::string>();
    r.solomon.verdict = verdict == "left" ? SolomonVerdict::left
                        : verdict == "right" ? SolomonVerdict::right
                                             : SolomonVerdict::recurrent;
    r.linkage = {doc.at("linkage").at("holds").get<bool>(), doc.at("linkage").at("witness").get<std::string>()};
    r.symmetric = doc.at("symmetric").get<bool>();
    r.jump_bound = doc.at("jump_bound").get<int>();
    const auto& a = doc.at("aggregate");
    for (const auto& item : a.at("counts").items()) r.aggregate.counts[parse_label(item.key())] = item.value().get<std::size_t>();
    r.aggregate.homogeneous = a.at("homogeneous").get<bool>();
    r.aggregate.dissenters = a.at("dissenters").get<std::vector<std::size_t>>();
    if (!a.at("consensus").is_null()) r.aggregate.consensus = parse_label(a.at("consensus").get<std::string>());
    r.consistent = doc.at("consistent").get<bool>();
    for (const auto& e : doc.at("environments")) {
      EnvVerdict v;
      v.env_index = e.at("env_index").get<std::size_t>();
      v.env_seed = e.at("env_seed").get<std::uint64_t>();
      v.walks = e.at("walks").get<std::size_t>();
      v.label = parse_label(e.at("label").get<std::string>());
      v.mc = evidence_from_json(e.at("mc"));
      v.borderline = e.at("borderline").get<bool>();
      v.consistent = e.at("consistent").get<bool>();
      if (e.contains("dp")) {
        const auto& d = e.at("dp");
        v.dp = DpCheck{parse_label(d.at("label").get<std::string>()), evidence_from_json(d.at("probabilities")),
                       d.at("dropped_mass").get<double>()};
      }
      r.envs.push_back(v);
    }
    if (doc.contains("split")) {
      const auto& sp = doc.at("split");
      r.split = SplitSummary{sp.at("barrier").get<long long>(), parse_rational(sp.at("hit_right").get<std::string>()),
                             sp.at("mc_right_fraction").get<double>()};
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::config_error, std::string("malformed result document: ") + e.what());
  }
}

std::string report_csv(const ScenarioResult& r) {
  std::ostringstream out;
  out << "env_index,env_seed,walks,label,mc_return,mc_right,mc_left,mc_late_return,"
         "dp_label,dp_return,dp_right,dp_left,dp_late_return,dp_dropped_mass,borderline,consistent\n";
  for (const auto& v : r.envs) {
    out << v.env_index << ',' << v.env_seed << ',' << v.walks << ',' << to_string(v.label) << ','
        << fixed(v.mc.return_fraction, 6) << ',' << fixed(v.mc.right_fraction, 6) << ','
        << fixed(v.mc.left_fraction, 6) << ',' << fixed(v.mc.late_return, 6) << ',';
    if (v.dp) {
      const auto& p = v.dp->probabilities;
      out << to_string(v.dp->label) << ',' << fixed(p.return_fraction, 9) << ',' << fixed(p.right_fraction, 9) << ','
          << fixed(p.left_fraction, 9) << ',' << fixed(p.late_return, 9) << ',' << sci(v.dp->dropped_mass);
    } else {
      out << ",,,,,";
    }
    out << ',' << (v.borderline ? 1 : 0) << ',' << (v.consistent ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string report_json(const ScenarioResult& r) { return result_to_json(r).dump(2) + "\n"; }

std::string report_markdown(const ScenarioResult& r) {
  std::ostringstream out;
  out << "# " << r.name << "\n\n";
  out << "- kind: " << to_string(r.kind) << "\n";
  out << "- map: " << r.map_name << ", environment: " << r.environment_kind << "\n";
  out << "- budgets: " << r.budgets.n_envs << " environments x " << r.budgets.n_walks << " walks, horizon "
      << r.budgets.horizon << "\n";
  out << "- thresholds: margin " << to_string(r.thresholds.divergence_margin) << ", return goal "
      << fixed(r.thresholds.return_goal, 3) << ", direction share " << fixed(r.thresholds.direction_share, 3)
      << ", late return cap " << fixed(r.thresholds.late_return_cap, 3) << ", split share "
      << fixed(r.thresholds.split_share, 3) << "\n";
  out << "- seeds: env " << r.seeds.env << ", walk " << r.seeds.walk << "\n\n";

  const auto& c = r.certificate;
  if (!c.applicable) {
    out << "certificate: not applicable (" << c.reason << ")\n";
  } else if (c.holds) {
    out << "certificate: holds, direction " << (c.direction > 0 ? "+1" : c.direction < 0 ? "-1" : "0");
    out << " (r = " << c.r << ", inf_h = " << fixed(c.inf_h, 6) << " > threshold = " << fixed(c.threshold, 6) << ")\n";
  } else {
    out << "certificate: fails (r = " << c.r << ", inf_h = " << fixed(c.inf_h, 6)
        << " <= threshold = " << fixed(c.threshold, 6) << ")\n";
  }
  const auto& s = r.solomon;
  if (!s.applicable) {
    out << "solomon: not applicable (" << s.reason << ")\n";
  } else {
    const char* sign = s.exact_zero || s.expectation == 0 ? "0" : s.expectation < 0 ? "-" : "+";
    out << "solomon: E ln((1-a)/a) = " << fixed(s.expectation, 6) << ", sign " << sign << ", predicts "
        << to_string(s.verdict) << (s.exact_zero ? " (exact zero)" : "") << "\n";
  }
  out << "linkage: " << (r.linkage.holds ? "holds" : "not established") << " (" << r.linkage.witness << ")\n";
  out << "symmetric in law: " << (r.symmetric ? "yes" : "no") << ", jump bound M = " << r.jump_bound << "\n";
  if (r.split) {
    out << "split: P(+" << r.split->barrier << " before -" << r.split->barrier << " from 0) = "
        << to_string(r.split->hit_right) << " (exact), Monte Carlo right fraction = "
        << fixed(r.split->mc_right_fraction, 4) << "\n";
  }
  out << "\n## Labels\n\n| label | environments | fraction |\n|---|---|---|\n";
  const double n = std::max<double>(1.0, static_cast<double>(r.envs.size()));
  for (const auto& [l, k] : r.aggregate.counts) {
    out << "| " << to_string(l) << " | " << k << " | " << fixed(static_cast<double>(k) / n, 3) << " |\n";
  }
  out << "\nzero-one: ";
  if (!r.aggregate.consensus) {
    out << "no decisive labels\n";
  } else if (r.aggregate.homogeneous) {
    out << "homogeneous, every decisive label is " << to_string(*r.aggregate.consensus) << "\n";
  } else {
    out << "DISSENT from " << to_string(*r.aggregate.consensus) << " in environments";
    for (auto e : r.aggregate.dissenters) out << ' ' << e << " (seed " << r.envs[e].env_seed << ")";
    out << "\n";
  }
  const bool any_dp = std::any_of(r.envs.begin(), r.envs.end(), [](const EnvVerdict& v) { return v.dp.has_value(); });
  out << "consistency: "
      << (!any_dp ? "no DP oracle for this map" : r.consistent ? "Monte Carlo agrees with the DP oracle" : "FAILED")
      << "\n\n## Environments\n\n";
  out << "| env | seed | label | DP label | return MC | return DP | right MC | right DP | left MC | left DP | late MC "
         "| late DP |\n|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& v : r.envs) {
    auto dp = [&](double Evidence::*field) { return v.dp ? fixed(v.dp->probabilities.*field, 4) : std::string("-"); };
    out << "| " << v.env_index << " | " << v.env_seed << " | " << to_string(v.label) << (v.consistent ? "" : " (!)")
        << " | " << (v.dp ? std::string(to_string(v.dp->label)) : "-") << " | " << fixed(v.mc.return_fraction, 4)
        << " | " << dp(&Evidence::return_fraction) << " | " << fixed(v.mc.right_fraction, 4) << " | "
        << dp(&Evidence::right_fraction) << " | " << fixed(v.mc.left_fraction, 4) << " | "
        << dp(&Evidence::left_fraction) << " | " << fixed(v.mc.late_return, 4) << " | " << dp(&Evidence::late_return)
        << " |\n";
  }
  return out.str();
}

std::vector<std::string> write_reports(const ScenarioResult& result, const std::string& dir,
                                       const std::vector<std::string>& formats) {
  const std::vector<std::string> all{"csv", "json", "markdown"};
  const auto& wanted = formats.empty() ? all : formats;
  std::vector<std::string> written;
  const std::filesystem::path base(dir);
  for (const auto& f : wanted) {
    std::filesystem::path p;
    std::string text;
    if (f == "csv") {
      p = base / (result.name + ".csv");
      text = report_csv(result);
    } else if (f == "json") {
      p = base / (result.name + ".json");
      text = report_json(result);
    } else if (f == "markdown") {
      p = base / (result.name + ".md");
      text = report_markdown(result);
    } else {
      throw Error(Errc::config_error, "unknown report format '" + f + "'");
    }
    write_text_file(p, text);
    written.push_back(p.string());
  }
  return written;
}

}  // namespace dwde
