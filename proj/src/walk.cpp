#include "dwde/walk.hpp"

#include "dwde/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>

namespace dwde {

WalkState step(const MarkovIntervalMap& map, const EnvironmentRealization& env, const WalkState& state) {
  const std::size_t cell = map.cell_of(state.x);
  return {map.branches()[cell](state.x), state.site + env.at(state.site)[cell]};
}

std::string_view to_string(SimMode mode) { return mode == SimMode::exact ? "exact" : "symbolic"; }

SimMode parse_sim_mode(std::string_view text) {
  if (text == "exact") return SimMode::exact;
  if (text == "symbolic") return SimMode::symbolic;
  throw Error(Errc::config_error, "unknown simulation mode '" + std::string(text) + "'");
}

SymbolSampler::Row SymbolSampler::make_row(const std::vector<Rational>& probs) {
  BigInt den = 1;
  for (const auto& p : probs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.get_den_mpz_t());
  if (!den.fits_ulong_p()) throw Error(Errc::unsupported_base, "symbol law denominator exceeds 64 bits");
  Row row;
  row.denominator = den.get_ui();
  BigInt acc = 0;
  for (const auto& p : probs) {
    acc += p.get_num() * (den / p.get_den());
    row.cumulative.push_back(acc.get_ui());
  }
  return row;
}

SymbolSampler::SymbolSampler(const MarkovIntervalMap& map) : independent_(map.full_branch()) {
  SymbolLaw law = map.symbol_law();
  initial_ = make_row(law.initial);
  for (const auto& row : law.transition) rows_.push_back(make_row(row));
}

namespace {

int jump_bound(const EnvironmentModel& model) { return std::max(1, symmetry_and_bounds(model).jump_bound_M); }

struct Tracker {
  long long start;
  long long site;
  TrajectorySummary summary;
  const std::vector<long long>* targets;

  Tracker(long long s, const std::vector<long long>& t) : start(s), site(s), targets(&t) {
    summary.start_site = summary.final_site = summary.min_site = summary.max_site = s;
    summary.hit_times.resize(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (t[k] == s) summary.hit_times[k] = 0;
    }
  }

  void visit(std::size_t time, long long new_site) {
    site = new_site;
    summary.min_site = std::min(summary.min_site, site);
    summary.max_site = std::max(summary.max_site, site);
    if (site == start) {
      if (!summary.first_return_time) summary.first_return_time = time;
      summary.last_return_time = time;
    }
    for (std::size_t k = 0; k < targets->size(); ++k) {
      if (!summary.hit_times[k] && (*targets)[k] == site) summary.hit_times[k] = time;
    }
  }
};

WalkRecord symbolic_record(const SymbolSampler& sampler, const EnvWindow& window, long long start, std::size_t steps,
                           rng::Engine& gen) {
  WalkRecord rec;
  long long site = start;
  long long lo = start;
  long long hi = start;
  std::size_t first = 0;
  std::size_t last = 0;
  rng::BitStream bits(gen);
  std::size_t symbol = sampler.initial(bits);
  for (std::size_t t = 1; t <= steps; ++t) {
    site += window.jump(site, symbol);
    lo = std::min(lo, site);
    hi = std::max(hi, site);
    if (site == start) {
      if (!first) first = t;
      last = t;
    }
    symbol = sampler.next(symbol, bits);
  }
  rec.final_site = site;
  rec.min_site = lo;
  rec.max_site = hi;
  if (first) rec.first_return_time = first;
  if (last) rec.last_return_time = last;
  return rec;
}

WalkRecord exact_record(const MarkovIntervalMap& map, const EnvWindow& window, long long start, std::size_t steps,
                        Rational x) {
  static const std::vector<long long> no_targets;
  Tracker tr(start, no_targets);
  for (std::size_t t = 1; t <= steps; ++t) {
    const std::size_t cell = map.cell_of(x);
    tr.visit(t, tr.site + window.jump(tr.site, cell));
    x = map.branches()[cell](x);
  }
  const auto& s = tr.summary;
  return {tr.site, s.min_site, s.max_site, s.first_return_time, s.last_return_time};
}

}  // namespace

Rational random_rational_point(std::uint64_t seed) {
  constexpr std::uint64_t q = (1ULL << 61) - 1;  // prime
  rng::Engine gen(seed);
  const std::uint64_t u = rng::bounded(gen, q);
  Rational r(BigInt(std::to_string(u)), BigInt(std::to_string(q)));
  r.canonicalize();
  return r;
}

Trajectory simulate(const MarkovIntervalMap& map, const EnvironmentRealization& env, long long start_site,
                    const std::optional<Rational>& start_x, const SimulateOptions& options) {
  if (options.steps == 0) throw Error(Errc::horizon_zero, "simulate needs at least one step");
  if (env.model().support.front().size() != map.size()) {
    throw Error(Errc::invalid_model, "environment cell count does not match the map");
  }
  Trajectory traj;
  traj.steps = options.steps;
  traj.thin = options.thin;
  Tracker tr(start_site, options.targets);
  if (options.thin) traj.sites.push_back(start_site);

  auto record = [&](std::size_t t, std::size_t cell) {
    if (options.record_symbols) traj.symbols.push_back(cell);
    tr.visit(t, tr.site + env.at(tr.site)[cell]);
    if (options.thin && t % options.thin == 0) traj.sites.push_back(tr.site);
  };

  if (options.mode == SimMode::exact) {
    if (!start_x) throw Error(Errc::config_error, "exact mode needs a rational start point");
    Rational x = *start_x;
    map.cell_of(x);
    for (std::size_t t = 1; t <= options.steps; ++t) {
      const std::size_t cell = map.cell_of(x);
      record(t, cell);
      x = map.branches()[cell](x);
    }
  } else {
    SymbolSampler sampler(map);
    rng::Engine gen(options.walk_seed);
    rng::BitStream bits(gen);
    std::size_t symbol = sampler.initial(bits);
    for (std::size_t t = 1; t <= options.steps; ++t) {
      record(t, symbol);
      symbol = sampler.next(symbol, bits);
    }
  }
  traj.summary = std::move(tr.summary);
  traj.summary.final_site = tr.site;
  return traj;
}

HitEstimate taboo_hit(const MarkovIntervalMap& map, const EnvironmentRealization& env, const TabooQuery& query,
                      std::size_t n_walks, std::uint64_t walk_seed) {
  if (query.horizon == 0) throw Error(Errc::horizon_zero, "taboo query needs horizon >= 1");
  const long long M = jump_bound(env.model());
  auto block_of = [M](long long site) {
    return site >= 0 ? site / M : -((-site + M - 1) / M);
  };
  const long long reach = static_cast<long long>(query.horizon) * M;
  const long long base = query.start_block * M;
  EnvWindow window(env, base - reach, base + M - 1 + reach);
  SymbolSampler sampler(map);

  HitEstimate est;
  est.walks = n_walks;
  for (std::size_t w = 0; w < n_walks; ++w) {
    rng::Engine gen(rng::derive(walk_seed, 0x7461626f6fULL, w));
    long long site = base + static_cast<long long>(rng::bounded(gen, static_cast<std::uint64_t>(M)));
    rng::BitStream bits(gen);
    std::size_t symbol = sampler.initial(bits);
    for (std::size_t t = 1; t <= query.horizon; ++t) {
      site += window.jump(site, symbol);
      const long long b = block_of(site);
      if (b == query.target_block) {
        ++est.hits;
        break;
      }
      if (query.taboo_block && b == *query.taboo_block) break;
      symbol = sampler.next(symbol, bits);
    }
  }
  if (n_walks) {
    est.fraction = static_cast<double>(est.hits) / static_cast<double>(n_walks);
    est.standard_error = std::sqrt(est.fraction * (1 - est.fraction) / static_cast<double>(n_walks));
  }
  return est;
}

std::uint64_t env_seed_for(std::uint64_t master_seed, std::size_t env_index) {
  return rng::derive(master_seed, 0x656e76ULL, env_index);
}

std::uint64_t walk_seed_for(std::uint64_t master_seed, std::size_t env_index, std::size_t walk_index) {
  return rng::derive(rng::derive(master_seed, 0x77616c6bULL, env_index), walk_index);
}

std::size_t worker_count(std::size_t requested) {
  if (requested) return requested;
  if (const char* v = std::getenv("DWDE_THREADS")) {
    long n = std::strtol(v, nullptr, 10);
    if (n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EnvSummary run_walks(const MarkovIntervalMap& map, const EnvironmentRealization& env, std::size_t env_index,
                     const EnsembleOptions& options) {
  if (options.steps == 0) throw Error(Errc::horizon_zero, "ensemble needs at least one step");
  const long long M = jump_bound(env.model());
  const long long reach = static_cast<long long>(options.steps) * M;
  const EnvWindow window(env, options.start_site - reach, options.start_site + reach);
  const SymbolSampler sampler(map);

  EnvSummary out;
  out.env_index = env_index;
  out.env_seed = env.env_seed();
  out.walks.resize(options.n_walks);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t w = begin; w < end; ++w) {
      const std::uint64_t seed = walk_seed_for(options.master_seed, env_index, w);
      if (options.mode == SimMode::symbolic) {
        rng::Engine gen(seed);
        out.walks[w] = symbolic_record(sampler, window, options.start_site, options.steps, gen);
      } else {
        out.walks[w] = exact_record(map, window, options.start_site, options.steps, random_rational_point(seed));
      }
    }
  };
  const std::size_t workers = std::min(worker_count(options.threads), std::max<std::size_t>(1, options.n_walks));
  if (workers <= 1) {
    work(0, options.n_walks);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (options.n_walks + workers - 1) / workers;
    for (std::size_t t = 0; t < workers; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(options.n_walks, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<long long> finals;
  finals.reserve(out.walks.size());
  std::size_t returned = 0;
  out.min_site = out.max_site = options.start_site;
  for (const auto& w : out.walks) {
    finals.push_back(w.final_site);
    if (w.first_return_time) ++returned;
    out.min_site = std::min(out.min_site, w.min_site);
    out.max_site = std::max(out.max_site, w.max_site);
    if (w.final_site > options.start_site) ++out.votes_right;
    if (w.final_site < options.start_site) ++out.votes_left;
  }
  if (!finals.empty()) {
    out.return_fraction = static_cast<double>(returned) / static_cast<double>(finals.size());
    std::sort(finals.begin(), finals.end());
    const double ps[5] = {0.05, 0.25, 0.5, 0.75, 0.95};
    for (std::size_t q = 0; q < 5; ++q) {
      out.final_quantiles[q] = finals[static_cast<std::size_t>(ps[q] * static_cast<double>(finals.size() - 1))];
    }
  }
  return out;
}

EnsembleReport run_ensemble(const MarkovIntervalMap& map, const EnvironmentModel& model,
                            const EnsembleOptions& options) {
  const double work = static_cast<double>(options.n_envs) * static_cast<double>(options.n_walks) *
                      static_cast<double>(options.steps);
  if (work > options.budget) {
    throw Error(Errc::budget_exceeded, "ensemble needs " + std::to_string(work) + " walk-steps, budget is " +
                                           std::to_string(options.budget));
  }
  EnvironmentModel validated = model;
  validate(validated, map.size());
  auto shared = std::make_shared<const EnvironmentModel>(std::move(validated));

  EnsembleReport report;
  report.options = options;
  for (std::size_t e = 0; e < options.n_envs; ++e) {
    EnvironmentRealization env(shared, env_seed_for(shared->seed, e));
    report.envs.push_back(run_walks(map, env, e, options));
  }
  return report;
}

}  // namespace dwde
