#include "dwde/markov_map.hpp"

#include "dwde/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dwde {

MarkovIntervalMap build_map(MapSpec spec) {
  const auto& bp = spec.breakpoints;
  if (bp.size() < 3) throw Error(Errc::bad_partition, "need at least two partition elements");
  if (bp.front() != 0 || bp.back() != 1) throw Error(Errc::bad_partition, "breakpoints must span [0,1]");
  for (std::size_t j = 1; j < bp.size(); ++j) {
    if (!(bp[j - 1] < bp[j])) throw Error(Errc::bad_partition, "breakpoints not strictly increasing");
  }
  const std::size_t k = bp.size() - 1;
  if (spec.branches.size() != k) {
    throw Error(Errc::bad_partition, "expected " + std::to_string(k) + " branches, got " +
                                         std::to_string(spec.branches.size()));
  }

  MarkovIntervalMap map;
  map.name_ = spec.name;
  map.breakpoints_ = bp;
  map.branches_ = spec.branches;
  map.image_sets_.resize(k);
  map.measures_.resize(k);
  map.image_measures_.resize(k);
  map.allowed_.assign(k * k, false);
  map.full_branch_ = true;

  auto index_of = [&](const Rational& y) -> std::optional<std::size_t> {
    auto it = std::lower_bound(bp.begin(), bp.end(), y);
    if (it == bp.end() || *it != y) return std::nullopt;
    return static_cast<std::size_t>(it - bp.begin());
  };

  for (std::size_t j = 0; j < k; ++j) {
    const Branch& br = spec.branches[j];
    if (abs(br.slope) <= 1) {
      throw Error(Errc::non_expanding, "branch " + std::to_string(j) + " has slope " + to_string(br.slope));
    }
    map.measures_[j] = bp[j + 1] - bp[j];
    Rational y0 = br(bp[j]);
    Rational y1 = br(bp[j + 1]);
    if (y1 < y0) std::swap(y0, y1);
    auto lo = index_of(y0);
    auto hi = index_of(y1);
    if (!lo || !hi) {
      throw Error(Errc::non_markov_image, "image of cell " + std::to_string(j) + " is [" + to_string(y0) +
                                              ", " + to_string(y1) + "], not a union of cells");
    }
    for (std::size_t c = *lo; c < *hi; ++c) {
      map.image_sets_[j].push_back(c);
      map.allowed_[j * k + c] = true;
    }
    map.image_measures_[j] = y1 - y0;
    if (map.image_sets_[j].size() != k) map.full_branch_ = false;
  }
  return map;
}

std::size_t MarkovIntervalMap::cell_of(const Rational& x) const {
  if (x < 0 || x > 1) throw Error(Errc::out_of_domain, "x = " + to_string(x) + " outside [0,1]");
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  auto j = static_cast<std::size_t>(it - breakpoints_.begin());
  return std::min(j, size()) - 1;
}

Rational MarkovIntervalMap::apply(const Rational& x) const { return branches_[cell_of(x)](x); }

bool MarkovIntervalMap::admissible(std::span<const std::size_t> word) const {
  if (word.empty()) return false;
  for (std::size_t w : word) {
    if (w >= size()) return false;
  }
  for (std::size_t t = 0; t + 1 < word.size(); ++t) {
    if (!transition_allowed(word[t], word[t + 1])) return false;
  }
  return true;
}

void MarkovIntervalMap::pullback(std::span<const std::size_t> word, BigInt& lo, BigInt& hi, BigInt& den) const {
  // Pull the last cell back through the inverse branches. Endpoints are kept
  // as integer numerators over one shared denominator and reduced once at the
  // end, which avoids a gcd per step.
  const Interval last = cell(word.back());
  den = last.lo.get_den() * last.hi.get_den();
  lo = last.lo.get_num() * last.hi.get_den();
  hi = last.hi.get_num() * last.lo.get_den();
  BigInt tmp;
  for (std::size_t t = word.size() - 1; t-- > 0;) {
    const Branch& br = branches_[word[t]];
    const mpz_class& sn = br.slope.get_num();
    const mpz_class& sd = br.slope.get_den();
    const mpz_class& bn = br.offset.get_num();
    const mpz_class& bd = br.offset.get_den();
    // (y - bn/bd) * sd / sn with y = num/den
    mpz_mul(tmp.get_mpz_t(), bn.get_mpz_t(), den.get_mpz_t());
    for (BigInt* e : {&lo, &hi}) {
      mpz_mul(e->get_mpz_t(), e->get_mpz_t(), bd.get_mpz_t());
      mpz_sub(e->get_mpz_t(), e->get_mpz_t(), tmp.get_mpz_t());
      mpz_mul(e->get_mpz_t(), e->get_mpz_t(), sd.get_mpz_t());
    }
    mpz_mul(den.get_mpz_t(), den.get_mpz_t(), bd.get_mpz_t());
    mpz_mul(den.get_mpz_t(), den.get_mpz_t(), sn.get_mpz_t());
    if (sgn(den) < 0) {
      den = -den;
      lo = -lo;
      hi = -hi;
      std::swap(lo, hi);
    }
  }
}

Interval MarkovIntervalMap::cylinder(std::span<const std::size_t> word) const {
  if (!admissible(word)) return {Rational(0), Rational(0)};
  BigInt lo, hi, den;
  pullback(word, lo, hi, den);
  Rational a{lo, den};
  Rational b{hi, den};
  a.canonicalize();
  b.canonicalize();
  return {a, b};
}

SymbolLaw MarkovIntervalMap::symbol_law() const {
  SymbolLaw law;
  law.initial = measures_;
  law.transition.assign(size(), std::vector<Rational>(size(), Rational(0)));
  for (std::size_t j = 0; j < size(); ++j) {
    for (std::size_t c : image_sets_[j]) law.transition[j][c] = measures_[c] / image_measures_[j];
  }
  return law;
}

MapSpec MarkovIntervalMap::spec() const { return {name_, breakpoints_, branches_}; }

MapSpec uniform_map_spec(std::size_t k) {
  MapSpec spec;
  spec.name = "x->" + std::to_string(k) + "x mod 1";
  for (std::size_t j = 0; j <= k; ++j) spec.breakpoints.emplace_back(ratio(static_cast<long>(j), static_cast<long>(k)));
  for (std::size_t j = 0; j < k; ++j) spec.branches.push_back({Rational(static_cast<long>(k)), Rational(-static_cast<long>(j))});
  return spec;
}

std::optional<MapSpec> named_map_spec(std::string_view name) {
  auto uniform = [&](std::size_t k) {
    MapSpec s = uniform_map_spec(k);
    s.name = std::string(name);
    return s;
  };
  if (name == "doubling") return uniform(2);
  if (name == "triple") return uniform(3);
  if (name == "quad") return uniform(4);
  if (name == "quint") return uniform(5);
  if (name == "slopes244") {
    return MapSpec{"slopes244",
                   {Rational(0), ratio(1, 2), ratio(3, 4), Rational(1)},
                   {{Rational(2), Rational(0)}, {Rational(4), Rational(-2)}, {Rational(4), Rational(-3)}}};
  }
  if (name == "markov3") {
    // a_0 = [0,1/4) -> [0,1], a_1 = [1/4,1/2) -> [0,1/2), a_2 = [1/2,1] -> [0,1]
    return MapSpec{"markov3",
                   {Rational(0), ratio(1, 4), ratio(1, 2), Rational(1)},
                   {{Rational(4), Rational(0)}, {Rational(2), ratio(-1, 2)}, {Rational(2), Rational(-1)}}};
  }
  return std::nullopt;
}

MarkovIntervalMap named_map(std::string_view name) {
  auto spec = named_map_spec(name);
  if (!spec) throw Error(Errc::config_error, "unknown map '" + std::string(name) + "'");
  return build_map(std::move(*spec));
}

Rational cylinder_measure(const MarkovIntervalMap& map, std::span<const std::size_t> word) {
  if (!map.admissible(word)) return 0;
  BigInt lo, hi, den;
  map.pullback(word, lo, hi, den);
  Rational m{hi - lo, den};
  m.canonicalize();
  return m;
}

std::uint64_t count_cylinders(const MarkovIntervalMap& map, std::size_t n) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (n == 0) return 0;
  const std::size_t k = map.size();
  std::vector<std::uint64_t> ending(k, 1);
  for (std::size_t step = 1; step < n; ++step) {
    std::vector<std::uint64_t> next(k, 0);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t c : map.image_sets()[j]) {
        next[c] = (kMax - next[c] < ending[j]) ? kMax : next[c] + ending[j];
      }
    }
    ending = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto v : ending) total = (kMax - total < v) ? kMax : total + v;
  return total;
}

std::vector<CylinderWord> enumerate_cylinders(const MarkovIntervalMap& map, std::size_t n, std::uint64_t cap) {
  if (n == 0) return {};
  const std::uint64_t count = count_cylinders(map, n);
  if (count > cap) {
    throw Error(Errc::enumeration_too_large,
                std::to_string(count) + " words of rank " + std::to_string(n) + " exceed cap " + std::to_string(cap));
  }
  std::vector<CylinderWord> out;
  out.reserve(static_cast<std::size_t>(count));
  CylinderWord word(n);
  auto extend = [&](auto&& self, std::size_t depth) -> void {
    if (depth == n) {
      out.push_back(word);
      return;
    }
    if (depth == 0) {
      for (std::size_t j = 0; j < map.size(); ++j) {
        word[0] = j;
        self(self, 1);
      }
      return;
    }
    for (std::size_t c : map.image_sets()[word[depth - 1]]) {
      word[depth] = c;
      self(self, depth + 1);
    }
  };
  extend(extend, 0);
  return out;
}

GibbsBounds gibbs_bounds(const MarkovIntervalMap& map) {
  GibbsBounds g;
  Rational min_slope = abs(map.branches().front().slope);
  Rational min_image = map.image_measure(0);
  for (std::size_t j = 0; j < map.size(); ++j) {
    Rational s = abs(map.branches()[j].slope);
    if (s < min_slope) min_slope = s;
    if (map.image_measure(j) < min_image) min_image = map.image_measure(j);
  }
  g.sup_g_exact = 1 / min_slope;
  g.inf_h = std::log(to_double(min_slope));
  g.sup_g = to_double(g.sup_g_exact);
  g.distortion_D = 1.0;
  g.big_image_inf = min_image;
  return g;
}

}  // namespace dwde
