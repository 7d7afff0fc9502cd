#include "dwde/error.hpp"
#include "dwde/exact.hpp"
#include "dwde/walk.hpp"
#include "helpers.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace dwde;
using testing::fn;

TEST_CASE("skew product step") {
  const auto map = named_map("triple");
  auto env = realize(testing::piecewise_model({fn({-1, -1, 1}), fn({1, 1, -1})}, {0}), 0);
  WalkState s{ratio(1, 2), 0};  // cell 1, site 0 uses (1, 1, -1)
  s = step(map, env, s);
  CHECK(s.x == ratio(1, 2));
  CHECK(s.site == 1);
  WalkState t{ratio(5, 6), -1};  // cell 2 at site -1 uses (-1, -1, 1)
  t = step(map, env, t);
  CHECK(t.x == ratio(1, 2));
  CHECK(t.site == 0);
}

TEST_CASE("exact simulation follows the orbit") {
  const auto map = named_map("slopes244");
  auto env = realize(testing::iid_model({fn({1, -1, 2}), fn({-1, 1, -2})}, {ratio(1, 2), ratio(1, 2)}), 3);
  SimulateOptions opt;
  opt.steps = 40;
  opt.mode = SimMode::exact;
  opt.record_symbols = true;
  const Rational x0 = ratio(123456789, 1000000007);
  const auto tr = simulate(map, env, 0, x0, opt);
  WalkState s{x0, 0};
  for (std::size_t t = 0; t < opt.steps; ++t) {
    CHECK(tr.symbols[t] == map.cell_of(s.x));
    s = step(map, env, s);
    CHECK(tr.sites[t + 1] == s.site);
  }
  CHECK(tr.summary.final_site == s.site);
  CHECK_THROWS_AS(simulate(map, env, 0, std::nullopt, opt), Error);
  opt.steps = 0;
  CHECK_THROWS_AS(simulate(map, env, 0, x0, opt), Error);
}

TEST_CASE("simulation is deterministic in its seeds") {
  const auto map = named_map("doubling");
  auto env = realize(testing::iid_model({fn({1, -1}), fn({-1, 1})}, {ratio(1, 2), ratio(1, 2)}), 3);
  SimulateOptions opt;
  opt.steps = 500;
  opt.walk_seed = 77;
  const auto a = simulate(map, env, 0, std::nullopt, opt);
  const auto b = simulate(map, env, 0, std::nullopt, opt);
  CHECK(a.sites == b.sites);
  opt.walk_seed = 78;
  const auto c = simulate(map, env, 0, std::nullopt, opt);
  CHECK(a.sites != c.sites);
}

TEST_CASE("symbolic sampler reproduces the symbol law") {
  const auto map = named_map("markov3");
  const auto law = map.symbol_law();
  const SymbolSampler sampler(map);
  rng::Engine gen(5);
  // Pair counts (w_0, w_1) against m([w_0 w_1]).
  const int n = 60000;
  std::vector<double> counts(9, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto a = sampler.initial(gen);
    const auto b = sampler.next(a, gen);
    counts[a * 3 + b] += 1;
  }
  double stat = 0;
  int dof = -1;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      const double p = to_double(law.initial[a] * law.transition[a][b]);
      if (p == 0) {
        CHECK(counts[a * 3 + b] == 0);
        continue;
      }
      ++dof;
      const double e = p * n;
      stat += (counts[a * 3 + b] - e) * (counts[a * 3 + b] - e) / e;
    }
  }
  CHECK(stat < boost::math::quantile(boost::math::chi_squared(dof), 1 - 1e-6));
}

TEST_CASE("exact and symbolic modes agree in law") {
  const auto map = named_map("triple");
  auto env = realize(testing::iid_model({fn({1, 1, -1}), fn({-1, 1, -1})}, {ratio(1, 2), ratio(1, 2)}), 8);
  const std::size_t n = 1000;
  std::vector<long long> exact, symbolic;
  SimulateOptions opt;
  opt.steps = 60;
  opt.thin = 0;
  for (std::size_t w = 0; w < n; ++w) {
    opt.mode = SimMode::exact;
    exact.push_back(simulate(map, env, 0, random_rational_point(1000 + w), opt).summary.final_site);
    opt.mode = SimMode::symbolic;
    opt.walk_seed = 5000 + w;
    symbolic.push_back(simulate(map, env, 0, std::nullopt, opt).summary.final_site);
  }
  std::sort(exact.begin(), exact.end());
  std::sort(symbolic.begin(), symbolic.end());
  // Two-sample Kolmogorov-Smirnov statistic.
  double d = 0;
  std::size_t i = 0, j = 0;
  while (i < n && j < n) {
    const long long v = std::min(exact[i], symbolic[j]);
    while (i < n && exact[i] == v) ++i;
    while (j < n && symbolic[j] == v) ++j;
    d = std::max(d, std::abs(double(i) - double(j)) / n);
  }
  CHECK(d < 1.949 * std::sqrt(2.0 / n));
}

TEST_CASE("taboo estimate agrees with the exact taboo probability") {
  const auto map = named_map("slopes244");
  auto env = realize(testing::iid_model({fn({1, -1, 2}), fn({-2, 1, -1})}, {ratio(1, 2), ratio(1, 2)}), 21);
  TabooQuery q;
  q.start_block = 0;
  q.target_block = 2;
  q.taboo_block = -2;
  q.horizon = 30;
  const auto chain = build_site_chain(map, env, 80);
  const double p = to_double(taboo_hit_exact(chain, q));
  const auto est = taboo_hit(map, env, q, 20000, 99);
  CHECK(est.walks == 20000);
  const boost::math::binomial dist(20000, p);
  const double lo = cdf(dist, static_cast<double>(est.hits));
  const double hi = cdf(complement(dist, static_cast<double>(est.hits) - 1));
  CHECK(std::min(lo, hi) > 1e-6);
}

TEST_CASE("ensemble seeding is reproducible") {
  const auto map = named_map("doubling");
  auto model = testing::iid_model({fn({1, -1}), fn({-1, 1})}, {ratio(1, 2), ratio(1, 2)}, 4);
  EnsembleOptions opt;
  opt.n_envs = 3;
  opt.n_walks = 20;
  opt.steps = 200;
  opt.master_seed = 12;
  opt.threads = 1;
  const auto a = run_ensemble(map, model, opt);
  opt.threads = 3;
  const auto b = run_ensemble(map, model, opt);
  for (std::size_t e = 0; e < 3; ++e) {
    for (std::size_t w = 0; w < 20; ++w) CHECK(a.envs[e].walks[w].final_site == b.envs[e].walks[w].final_site);
  }
  opt.budget = 100;
  CHECK_THROWS_AS(run_ensemble(map, model, opt), Error);
}
