#include "dwde/environment.hpp"
#include "dwde/error.hpp"
#include "helpers.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <cmath>

using namespace dwde;
using testing::fn;

TEST_CASE("fixed and periodic environments") {
  auto env = realize(testing::fixed_model(fn({1, -1})), 7);
  CHECK(env.at(-100) == fn({1, -1}));
  CHECK(env.at(5) == fn({1, -1}));

  EnvironmentModel p;
  p.kind = EnvKind::periodic;
  p.support = {fn({1, -1}), fn({-1, 1}), fn({2, -2})};
  auto per = realize(p, 0);
  CHECK(per.index_at(0) == 0);
  CHECK(per.index_at(4) == 1);
  CHECK(per.index_at(-1) == 2);
  CHECK(per.index_at(-3) == 0);
}

TEST_CASE("piecewise environment") {
  auto env = realize(testing::piecewise_model({fn({-1, 1}), fn({0, 0}), fn({1, -1})}, {0, 1}), 0);
  CHECK(env.index_at(-5) == 0);
  CHECK(env.index_at(-1) == 0);
  CHECK(env.index_at(0) == 1);
  CHECK(env.index_at(1) == 2);
  CHECK(env.index_at(99) == 2);
}

TEST_CASE("iid environment is a pure function of the seed") {
  const auto model = testing::iid_model({fn({1, -1}), fn({-1, 1})}, {ratio(1, 2), ratio(1, 2)}, 3);
  auto a = realize(model, 42);
  auto b = realize(model, 42);
  auto c = realize(model, 43);
  int differ = 0;
  for (long long i = -200; i <= 200; ++i) {
    CHECK(a.index_at(i) == b.index_at(i));
    differ += a.index_at(i) != c.index_at(i);
  }
  CHECK(differ > 100);
}

TEST_CASE("iid site frequencies pass a chi-square test") {
  const auto model = testing::iid_model({fn({1, -1}), fn({-1, 1}), fn({1, 1})},
                                        {ratio(1, 2), ratio(1, 3), ratio(1, 6)}, 3);
  auto env = realize(model, 9);
  const long long n = 60000;
  double counts[3] = {0, 0, 0};
  for (long long i = -n / 2; i < n / 2; ++i) counts[env.index_at(i)] += 1;
  const double expected[3] = {n / 2.0, n / 3.0, n / 6.0};
  double stat = 0;
  for (int k = 0; k < 3; ++k) stat += (counts[k] - expected[k]) * (counts[k] - expected[k]) / expected[k];
  const double critical = boost::math::quantile(boost::math::chi_squared(2), 1 - 1e-6);
  CHECK(stat < critical);
}

TEST_CASE("markov environment follows its transition matrix") {
  EnvironmentModel m;
  m.kind = EnvKind::markov;
  m.support = {fn({1, -1}), fn({-1, 1})};
  m.matrix = {{ratio(9, 10), ratio(1, 10)}, {ratio(1, 5), ratio(4, 5)}};
  m.seed = 5;
  validate(m, 2);
  CHECK(m.stationary[0] == ratio(2, 3));
  auto env = realize(m, 11);
  // Both directions from 0 should show the same one-step statistics.
  double stay0 = 0, from0 = 0, ones = 0;
  const long long n = 40000;
  for (long long i = -n; i < n; ++i) {
    const auto a = env.index_at(i);
    const auto b = env.index_at(i + 1);
    ones += a == 1;
    if (a == 0) {
      from0 += 1;
      stay0 += b == 0;
    }
  }
  const double p = stay0 / from0;
  CHECK(std::abs(p - 0.9) < 3 * std::sqrt(0.9 * 0.1 / from0) + 0.005);
  CHECK(std::abs(ones / (2.0 * n) - 1.0 / 3.0) < 0.03);
}

TEST_CASE("shift identity") {
  const auto model = testing::iid_model({fn({1, -1}), fn({-1, 1})}, {ratio(1, 2), ratio(1, 2)});
  auto env = realize(model, 17);
  for (long long k : {-7LL, 0LL, 3LL, 1000LL}) {
    auto s = env.shift(k);
    for (long long i = -20; i <= 20; ++i) CHECK(s.at(i) == env.at(i + k));
    auto ss = s.shift(-k);
    for (long long i = -5; i <= 5; ++i) CHECK(ss.at(i) == env.at(i));
  }
}

TEST_CASE("model validation") {
  auto bad = testing::iid_model({fn({1, -1}), fn({-1, 1})}, {ratio(1, 2), ratio(1, 3)});
  CHECK_THROWS_AS(validate(bad, 2), Error);
  auto wrong_cells = testing::fixed_model(fn({1, -1, 1}));
  CHECK_THROWS_AS(validate(wrong_cells, 2), Error);
  auto unsorted = testing::piecewise_model({fn({1, -1}), fn({-1, 1}), fn({1, 1})}, {3, 1});
  CHECK_THROWS_AS(validate(unsorted, 2), Error);
  EnvironmentModel reducible;
  reducible.kind = EnvKind::markov;
  reducible.support = {fn({1, -1}), fn({-1, 1})};
  reducible.matrix = {{1, 0}, {0, 1}};
  CHECK_THROWS_AS(validate(reducible, 2), Error);
}

TEST_CASE("symmetry and bounds") {
  const auto sym = testing::iid_model({fn({1, -1}), fn({-1, 1})}, {ratio(1, 2), ratio(1, 2)});
  auto sb = symmetry_and_bounds(sym);
  CHECK(sb.is_symmetric);
  CHECK(sb.jump_bound_M == 1);
  const auto asym = testing::iid_model({fn({2, -1}), fn({-1, 1})}, {ratio(1, 2), ratio(1, 2)});
  sb = symmetry_and_bounds(asym);
  CHECK_FALSE(sb.is_symmetric);
  CHECK(sb.jump_bound_M == 2);
}
