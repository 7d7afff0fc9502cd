// One pass/fail line per acceptance criterion. Exit status is the number of
// failed criteria (capped at 1 for ctest).

#include "dwde/config.hpp"
#include "dwde/error.hpp"
#include "dwde/exact.hpp"
#include "dwde/experiments.hpp"
#include "dwde/walk.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace dwde;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0 || secs < limit_s;
  const bool pass = out.pass && in_time;
  if (!pass) ++failures;
  char timing[96];
  if (limit_s > 0) {
    std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, limit_s);
  } else {
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
  }
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << title << " | " << out.detail
            << (in_time ? "" : " | over the time limit") << " | " << timing << std::endl;
}

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

ScenarioConfig preset(const std::string& name) {
  return load_scenario(std::string(DWDE_PRESET_DIR) + "/" + name + ".json");
}

TransitionFunction fn(std::initializer_list<int> v) { return {std::vector<int>(v)}; }

EnvironmentModel fixed_model(TransitionFunction g) {
  EnvironmentModel m;
  m.kind = EnvKind::fixed;
  m.support = {std::move(g)};
  return m;
}

std::string all_reports(const ScenarioResult& r) { return report_csv(r) + report_json(r) + report_markdown(r); }

// First run of every preset, reused by the determinism criterion.
std::map<std::string, std::string> first_reports;

ScenarioResult run_preset(const std::string& name) {
  const auto r = run_scenario(preset(name));
  first_reports[name] = all_reports(r);
  return r;
}

}  // namespace

int main() {
  std::cout << "acceptance suite" << std::endl;

  criterion(1, "cylinder measures sum to 1 for n <= 10, K <= 4", 5, [] {
    std::size_t words = 0;
    for (const char* name : {"doubling", "triple", "quad", "slopes244", "markov3"}) {
      const auto map = named_map(name);
      for (std::size_t n = 1; n <= 10; ++n) {
        Rational sum = 0;
        const auto cyl = enumerate_cylinders(map, n);
        for (const auto& w : cyl) sum += cylinder_measure(map, w);
        words += cyl.size();
        if (sum != 1) return Outcome{false, std::string(name) + " n=" + std::to_string(n) + " sums to " + to_string(sum)};
      }
    }
    return Outcome{true, "5 maps, " + std::to_string(words) + " cylinders, every sum exactly 1"};
  });

  criterion(2, "site-path probabilities equal cylinder sums (length <= 6)", 10, [] {
    struct Case {
      const char* map;
      TransitionFunction g;
    };
    const std::vector<Case> cases = {{"doubling", fn({1, -1})}, {"doubling", fn({2, -1})},
                                     {"triple", fn({1, 1, -1})}, {"triple", fn({2, 0, -1})}};
    std::size_t paths = 0;
    for (const auto& c : cases) {
      const auto map = named_map(c.map);
      const auto env = realize(fixed_model(c.g), 0);
      const auto chain = build_site_chain(map, env, 20);
      for (std::size_t n = 1; n <= 6; ++n) {
        std::map<std::vector<long long>, Rational> by_path;
        for (const auto& w : enumerate_cylinders(map, n)) {
          std::vector<long long> sites{0};
          for (std::size_t t = 0; t < w.size(); ++t) sites.push_back(sites.back() + env.at(sites.back())[w[t]]);
          by_path[sites] += cylinder_measure(map, w);
        }
        for (const auto& [path, m] : by_path) {
          ++paths;
          if (path_probability(chain, path) != m) {
            return Outcome{false, std::string(c.map) + " " + to_string(c.g) + ": path mismatch"};
          }
        }
      }
    }
    return Outcome{true, std::to_string(paths) + " site paths over 4 fixed environments, exact equality"};
  });

  criterion(3, "path counts match brute force for 2n + k <= 20", 5, [] {
    const std::size_t L = 20;
    const auto table = path_counts(L / 2, L);
    std::vector<std::vector<BigInt>> brute(L / 2 + 1, std::vector<BigInt>(L + 1, BigInt(0)));
    for (std::size_t len = 1; len <= L; ++len) {
      for (unsigned long mask = 0; mask < (1ul << len); ++mask) {
        long long pos = 0, low = 0;
        bool touched_zero = false;
        for (std::size_t t = 0; t < len; ++t) {
          pos += (mask >> t) & 1 ? 1 : -1;
          if (t + 1 < len) {
            low = std::min(low, pos);
            touched_zero = touched_zero || pos >= 0;
          }
        }
        // Ends at -k, earlier positions all in (-k, 0).
        const long long k = -pos;
        if (k < 1 || touched_zero || low <= -k) continue;
        const std::size_t n = (len - static_cast<std::size_t>(k)) / 2;
        ++brute[n][static_cast<std::size_t>(k)];
      }
    }
    std::size_t checked = 0;
    for (std::size_t k = 1; k <= L; ++k) {
      for (std::size_t n = 0; 2 * n + k <= L; ++n) {
        ++checked;
        if (table.at(n, k) != brute[n][k]) {
          return Outcome{false, "c[" + std::to_string(n) + "][" + std::to_string(k) + "] = " +
                                    to_string(table.at(n, k)) + ", brute force " + to_string(brute[n][k])};
        }
      }
    }
    for (std::size_t n = 1; n <= L / 2; ++n) {
      if (table.at(n, 1) != 0) return Outcome{false, "c[n][1] != 0"};
    }
    for (std::size_t n = 0; n <= 8; ++n) {
      if (table.at(n, 3) != 1) return Outcome{false, "c[" + std::to_string(n) + "][3] != 1"};
    }
    return Outcome{true, std::to_string(checked) + " entries equal; c[n][1] = 0 (n >= 1); c[n][3] = 1 (n <= 8)"};
  });

  criterion(4, "return-cylinder count <= r^n (K-r)^n C(2n,n), triple r = 2", 10, [] {
    const auto map = named_map("triple");
    std::ostringstream detail;
    for (std::size_t n = 0; n <= 6; ++n) {
      const auto c = return_cylinder_count(map, 2, n);
      detail << (n ? ", " : "") << "n=" << n << ": " << c.enumerated << " <= " << to_string(c.counting_bound);
      if (BigInt(static_cast<unsigned long>(c.enumerated)) > c.counting_bound) return Outcome{false, detail.str()};
    }
    return Outcome{true, detail.str()};
  });

  criterion(5, "transience certificate: triple r = 2 holds (+1), doubling r = 1 fails", 1, [] {
    const auto t = transience_certificate(named_map("triple"), 2);
    const auto d = transience_certificate(named_map("doubling"), 1);
    const bool ok = t.holds && t.direction == 1 && !d.holds;
    return Outcome{ok, "triple: inf_h " + num(t.inf_h, 6) + " vs " + num(t.threshold, 6) + ", holds=" +
                           (t.holds ? "yes" : "no") + ", direction " + std::to_string(t.direction) +
                           "; doubling: inf_h " + num(d.inf_h, 6) + " vs " + num(d.threshold, 6) +
                           ", holds=" + (d.holds ? "yes" : "no")};
  });

  criterion(6, "triple r = 2 preset: >= 99% of 1e4 walks end above N/6, DP chain homogeneous p = 2/3", 60, [] {
    const auto config = preset("triple_r2");
    const auto map = build_map(config.map);
    // Every site of every environment has the jump law {+1: 2/3, -1: 1/3}.
    auto model = config.environment;
    const std::map<int, Rational> expected{{-1, ratio(1, 3)}, {1, ratio(2, 3)}};
    bool homogeneous = true;
    for (std::size_t e = 0; e < config.budgets.n_envs && homogeneous; ++e) {
      const auto env = realize(model, env_seed_for(model.seed, e));
      const auto chain = build_site_chain(map, env, 200);
      for (long long i = -200; i <= 200; ++i) homogeneous = homogeneous && chain.jump_distribution(i) == expected;
    }
    const auto res = run_preset("triple_r2");
    double above = 0, walks = 0, dp_min = 1;
    for (const auto& v : res.envs) {
      above += v.mc.right_fraction * static_cast<double>(v.walks);
      walks += static_cast<double>(v.walks);
      if (v.dp) dp_min = std::min(dp_min, v.dp->probabilities.right_fraction);
    }
    const double frac = above / walks;
    const bool ok = homogeneous && walks >= 1e4 && frac >= 0.99 && res.consistent;
    return Outcome{ok, num(walks, 0) + " walks x horizon " + std::to_string(config.budgets.horizon) +
                           ", fraction above N/6 = " + num(frac) + ", DP P(above) min over envs = " + num(dp_min, 6) +
                           ", reduced chain homogeneous: " + (homogeneous ? "yes" : "no")};
  });

  criterion(7, "symmetric doubling: DP return by 1e4 > 0.9 in >= 95 of 100 envs, MC within 3 SE", 120, [] {
    const auto res = run_preset("symmetric_doubling");
    std::size_t above = 0, within = 0;
    double worst_mc = 0, worst_dp = 0, dp_min = 1;
    for (const auto& v : res.envs) {
      if (!v.dp) return Outcome{false, "no DP oracle"};
      const double p = v.dp->probabilities.return_fraction;
      const double q = v.mc.return_fraction;
      const double n = static_cast<double>(v.walks);
      dp_min = std::min(dp_min, p);
      above += p > 0.9;
      // Monte Carlo standard error from the sample, with the usual +1/+2
      // adjustment so that an all-success sample keeps a positive error.
      const double adj = (q * n + 1) / (n + 2);
      const double se_mc = std::sqrt(adj * (1 - adj) / n);
      const double z_mc = std::abs(q - p) / se_mc;
      const double z_dp = std::abs(q - p) / std::sqrt(p * (1 - p) / n);
      worst_mc = std::max(worst_mc, z_mc);
      worst_dp = std::max(worst_dp, z_dp);
      within += z_mc <= 3;
    }
    const bool ok = res.envs.size() == 100 && above >= 95 && within == res.envs.size();
    return Outcome{ok, std::to_string(above) + "/100 envs with DP > 0.9 (min " + num(dp_min, 6) + "), " +
                           std::to_string(within) + "/100 within 3 MC standard errors (max z " + num(worst_mc, 2) +
                           "; max z with the DP-based error " + num(worst_dp, 2) + ")"};
  });

  criterion(8, "split chain: hit_before(+-50) = 1/2 exactly, MC right fraction 0.5 +- 0.05", 30, [] {
    const auto res = run_preset("split_demo");
    if (!res.split) return Outcome{false, "no split summary"};
    const auto& s = *res.split;
    std::size_t walks = 0;
    for (const auto& v : res.envs) walks += v.walks;
    const bool ok = s.hit_right == ratio(1, 2) && std::abs(s.mc_right_fraction - 0.5) <= 0.05 && walks >= 10000;
    return Outcome{ok, "exact " + to_string(s.hit_right) + ", MC right fraction " + num(s.mc_right_fraction) + " over " +
                           std::to_string(walks) + " walks"};
  });

  criterion(9, "series diagnostic: triple ratios <= 8/9 + 1e-6 (J in [50,200]); symmetric S_2J/S_J >= 1.2", 60, [] {
    const auto triple = preset("triple_r2");
    const auto tmap = build_map(triple.map);
    const auto tenv = realize(triple.environment, env_seed_for(triple.environment.seed, 0));
    const auto sd = series_diagnostic(tmap, tenv, 0, ratio(1, 2), 201);
    double worst = 0;
    for (std::size_t J = 50; J <= 200; ++J) worst = std::max(worst, sd.ratios[J]);
    const bool bound_ok = sd.geometric_bound && *sd.geometric_bound == ratio(8, 9);
    const bool ratio_ok = worst <= 8.0 / 9.0 + 1e-6;

    const auto sym = preset("symmetric_doubling");
    const auto smap = build_map(sym.map);
    const auto senv = realize(sym.environment, env_seed_for(sym.environment.seed, 0));
    const auto ss = series_diagnostic(smap, senv, 0, ratio(1, 2), 512);
    std::ostringstream growth;
    bool growth_ok = true;
    for (std::size_t J : {64u, 128u, 256u}) {
      const double g = to_double(ss.partial_sums[2 * J] / ss.partial_sums[J]);
      growth << (J == 64 ? "" : ", ") << "J=" << J << ": " << num(g);
      growth_ok = growth_ok && g >= 1.2;
    }
    return Outcome{bound_ok && ratio_ok && growth_ok,
                   "triple max ratio " + num(worst, 6) + " (bound 4r(K-r)M^2 = " +
                       (sd.geometric_bound ? to_string(*sd.geometric_bound) : std::string("-")) + "); symmetric " +
                       growth.str()};
  });

  criterion(10, "shift identity U(x, shift_k env) + k = U_k(x, env), 100 exact triples, N = 1e3", 10, [] {
    const char* maps[] = {"doubling", "triple", "slopes244", "markov3"};
    std::size_t steps_checked = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto map = named_map(maps[i % 4]);
      EnvironmentModel model;
      const std::size_t K = map.size();
      for (int f = 0; f < 3; ++f) {
        TransitionFunction g;
        for (std::size_t j = 0; j < K; ++j) g.jumps.push_back(static_cast<int>(rng::prf(i * 7 + f, j) % 5) - 2);
        model.support.push_back(g);
      }
      if (i % 2 == 0) {
        model.kind = EnvKind::iid;
        model.weights = {ratio(1, 2), ratio(1, 3), ratio(1, 6)};
      } else {
        model.kind = EnvKind::markov;
        model.matrix = {{ratio(1, 2), ratio(1, 4), ratio(1, 4)},
                        {ratio(1, 3), ratio(1, 3), ratio(1, 3)},
                        {ratio(1, 10), ratio(7, 10), ratio(1, 5)}};
      }
      model.seed = 1000 + i;
      const auto env = realize(model, rng::derive(model.seed, i));
      const long long k = static_cast<long long>(rng::prf(77, i) % 2001) - 1000;
      const Rational x = random_rational_point(rng::derive(5, i));
      SimulateOptions opt;
      opt.steps = 1000;
      opt.mode = SimMode::exact;
      const auto shifted = simulate(map, env.shift(k), 0, x, opt);
      const auto direct = simulate(map, env, k, x, opt);
      for (std::size_t t = 0; t <= opt.steps; ++t) {
        if (shifted.sites[t] + k != direct.sites[t]) {
          return Outcome{false, "triple " + std::to_string(i) + " differs at t=" + std::to_string(t)};
        }
      }
      steps_checked += opt.steps;
    }
    return Outcome{true, "100 triples (4 maps, iid and markov), " + std::to_string(steps_checked) +
                             " positions equal"};
  });

  criterion(11, "Solomon sign matches observed divergence on right, left and symmetric presets", 5, [] {
    std::ostringstream detail;
    bool ok = true;
    for (const char* name : {"triple_r2", "triple_r1", "symmetric_doubling"}) {
      auto config = preset(name);
      config.kind = ExperimentKind::classify;
      config.budgets = {5, 200, 2000};
      const auto res = classify(config);
      const auto expected = res.solomon.verdict == SolomonVerdict::right  ? Label::transient_plus
                            : res.solomon.verdict == SolomonVerdict::left ? Label::transient_minus
                                                                          : Label::recurrent_like;
      const bool agree = res.aggregate.consensus && *res.aggregate.consensus == expected &&
                         res.aggregate.counts.at(expected) == res.envs.size();
      ok = ok && agree && res.solomon.applicable;
      detail << (detail.tellp() ? "; " : "") << name << ": E = " << num(res.solomon.expectation, 4) << " -> "
             << to_string(res.solomon.verdict) << ", observed "
             << (res.aggregate.consensus ? std::string(to_string(*res.aggregate.consensus)) : "none") << " in "
             << res.aggregate.counts.at(expected) << "/" << res.envs.size() << " envs";
    }
    return Outcome{ok, detail.str()};
  });

  criterion(12, "two runs of the preset suite give byte-identical reports", 0, [] {
    std::size_t bytes = 0;
    for (const char* name : {"symmetric_doubling", "triple_r2", "triple_r1", "split_demo", "adversarial"}) {
      if (!first_reports.count(name)) run_preset(name);
      const auto again = all_reports(run_scenario(preset(name)));
      if (again != first_reports[name]) return Outcome{false, std::string(name) + " differs between runs"};
      bytes += again.size();
    }
    return Outcome{true, "5 presets, " + std::to_string(bytes) + " report bytes identical"};
  });

  std::cout << (failures ? "FAILED: " : "all criteria passed: ") << failures << " failing" << std::endl;
  return failures ? 1 : 0;
}
