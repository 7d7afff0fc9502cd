#include "dwde/exact.hpp"

#include "dwde/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace dwde {

std::map<int, Rational> SiteChainDP::jump_distribution(long long site) const {
  std::map<int, Rational> p;
  for (std::size_t j = 0; j < cells; ++j) p[jump(site, j)] += law.initial[j];
  return p;
}

SiteChainDP build_site_chain(const MarkovIntervalMap& map, const EnvironmentRealization& env, long long window,
                             bool joint_chain, Boundary boundary) {
  if (window < 1) throw Error(Errc::config_error, "site window must be >= 1");
  if (!map.full_branch() && !joint_chain) {
    throw Error(Errc::unsupported_base, "map '" + map.name() + "' is not full-branch; request the joint chain");
  }
  if (env.model().support.front().size() != map.size()) {
    throw Error(Errc::invalid_model, "environment cell count does not match the map");
  }
  SiteChainDP chain;
  chain.window = window;
  chain.cells = map.size();
  chain.collapsed = map.full_branch();
  chain.boundary = boundary;
  chain.law = map.symbol_law();
  chain.jumps.resize(static_cast<std::size_t>(2 * window + 1) * chain.cells);
  for (long long i = -window; i <= window; ++i) {
    const auto& f = env.at(i);
    for (std::size_t j = 0; j < chain.cells; ++j) {
      chain.jumps[static_cast<std::size_t>(i + window) * chain.cells + j] = f[j];
      chain.max_jump = std::max(chain.max_jump, std::abs(f[j]));
    }
  }
  return chain;
}

namespace {

inline bool is_zero(const BigInt& v) { return sgn(v) == 0; }
inline bool is_zero(double v) { return v == 0.0; }

BigInt power(const BigInt& base, std::size_t e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational quotient(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigInt lcm_of_denominators(const std::vector<Rational>& values, BigInt acc = 1) {
  for (const auto& v : values) mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), v.get_den_mpz_t());
  return acc;
}

// Transition weights of the symbol chain. For BigInt the weights are integer
// numerators over initial_den (time 0) and trans_den (per step); for double
// they are the probabilities themselves.
template <class Num>
struct Weights {
  std::vector<Num> initial;
  std::vector<std::vector<Num>> trans;
  BigInt initial_den = 1;
  BigInt trans_den = 1;
};

Weights<BigInt> integer_weights(const SymbolLaw& law) {
  Weights<BigInt> w;
  w.initial_den = lcm_of_denominators(law.initial);
  for (const auto& p : law.initial) w.initial.push_back(p.get_num() * (w.initial_den / p.get_den()));
  BigInt den = 1;
  for (const auto& row : law.transition) den = lcm_of_denominators(row, den);
  w.trans_den = den;
  for (const auto& row : law.transition) {
    std::vector<BigInt> r;
    for (const auto& p : row) r.push_back(p.get_num() * (den / p.get_den()));
    w.trans.push_back(std::move(r));
  }
  return w;
}

Weights<double> double_weights(const SymbolLaw& law) {
  Weights<double> w;
  for (const auto& p : law.initial) w.initial.push_back(to_double(p));
  for (const auto& row : law.transition) {
    std::vector<double> r;
    for (const auto& p : row) r.push_back(to_double(p));
    w.trans.push_back(std::move(r));
  }
  return w;
}

// Forward propagation of (site, current symbol) masses inside the window.
template <class Num>
class JointDP {
 public:
  JointDP(const SiteChainDP& chain, const Weights<Num>& w)
      : chain_(chain), w_(w), k_(chain.cells), width_(2 * chain.window + 1) {
    cur_.assign(static_cast<std::size_t>(width_) * k_, Num(0));
    next_ = cur_;
    if (chain.collapsed) incoming_.assign(static_cast<std::size_t>(width_), Num(0));
    for (std::size_t j = 0; j < k_; ++j) {
      std::vector<std::size_t> targets;
      for (std::size_t c = 0; c < k_; ++c) {
        if (!is_zero(w.trans[j][c])) targets.push_back(c);
      }
      targets_.push_back(std::move(targets));
    }
  }

  void seed(long long site, std::optional<std::size_t> forced = std::nullopt) {
    for (std::size_t j = 0; j < k_; ++j) {
      if (!forced || *forced == j) add(site, j, w_.initial[j]);
    }
  }

  void add(long long site, std::size_t symbol, const Num& value) {
    cell(cur_, site, symbol) += value;
    widen(site);
  }

  const Num& mass(long long site, std::size_t symbol) const { return cell(cur_, site, symbol); }

  Num site_total(long long site) const {
    Num total(0);
    if (!active_ || site < lo_ || site > hi_) return total;
    for (std::size_t j = 0; j < k_; ++j) total += cell(cur_, site, j);
    return total;
  }

  Num take(long long site) {
    Num total(0);
    if (!active_ || site < lo_ || site > hi_) return total;
    for (std::size_t j = 0; j < k_; ++j) {
      total += cell(cur_, site, j);
      cell(cur_, site, j) = 0;
    }
    return total;
  }

  void kill(long long from, long long to) {
    if (!active_) return;
    for (long long s = std::max(from, lo_); s <= std::min(to, hi_); ++s) take(s);
  }

  void step() {
    if (!active_) return;
    const int m = chain_.max_jump;
    const long long nlo = std::max(lo_ - m, -chain_.window);
    const long long nhi = std::min(hi_ + m, chain_.window);
    for (long long s = nlo; s <= nhi; ++s) {
      for (std::size_t j = 0; j < k_; ++j) cell(next_, s, j) = 0;
      if (chain_.collapsed) incoming_[index(s)] = 0;
    }
    for (long long s = lo_; s <= hi_; ++s) {
      for (std::size_t j = 0; j < k_; ++j) {
        const Num& v = cell(cur_, s, j);
        if (is_zero(v)) continue;
        const long long t = s + chain_.jump(s, j);
        if (!chain_.contains(t)) {
          leaked_ = true;
          continue;
        }
        if (chain_.collapsed) {
          incoming_[index(t)] += v;
        } else {
          for (std::size_t c : targets_[j]) cell(next_, t, c) += v * w_.trans[j][c];
        }
      }
    }
    if (chain_.collapsed) {
      const auto& row = w_.trans.front();
      for (long long t = nlo; t <= nhi; ++t) {
        const Num& in = incoming_[index(t)];
        if (is_zero(in)) continue;
        for (std::size_t c : targets_.front()) cell(next_, t, c) = in * row[c];
      }
    }
    for (long long s = lo_; s <= hi_; ++s) {
      for (std::size_t j = 0; j < k_; ++j) cell(cur_, s, j) = 0;
    }
    std::swap(cur_, next_);
    lo_ = nlo;
    hi_ = nhi;
  }

  /// Drops edge sites whose total mass is below eps (double only).
  void trim(double eps) {
    if constexpr (std::is_same_v<Num, double>) {
      while (active_ && lo_ < hi_ && site_total(lo_) < eps) dropped_ += take(lo_), ++lo_;
      while (active_ && hi_ > lo_ && site_total(hi_) < eps) dropped_ += take(hi_), --hi_;
    }
  }

  double dropped() const { return dropped_; }
  bool leaked() const { return leaked_; }
  long long lo() const { return lo_; }
  long long hi() const { return hi_; }
  bool active() const { return active_; }

 private:
  std::size_t index(long long site) const { return static_cast<std::size_t>(site + chain_.window); }
  Num& cell(std::vector<Num>& buf, long long site, std::size_t j) { return buf[index(site) * k_ + j]; }
  const Num& cell(const std::vector<Num>& buf, long long site, std::size_t j) const {
    return buf[index(site) * k_ + j];
  }
  void widen(long long site) {
    if (!active_) {
      lo_ = hi_ = site;
      active_ = true;
    } else {
      lo_ = std::min(lo_, site);
      hi_ = std::max(hi_, site);
    }
  }

  const SiteChainDP& chain_;
  const Weights<Num>& w_;
  std::size_t k_;
  long long width_;
  std::vector<Num> cur_;
  std::vector<Num> next_;
  std::vector<Num> incoming_;
  std::vector<std::vector<std::size_t>> targets_;
  long long lo_ = 0;
  long long hi_ = -1;
  bool active_ = false;
  bool leaked_ = false;
  double dropped_ = 0.0;
};

// Site-level propagation for collapsed chains: the symbol is summed out and
// each site carries its jump law p_i(v).
class SiteDP {
 public:
  explicit SiteDP(const SiteChainDP& chain) : chain_(chain), width_(2 * chain.window + 1) {
    cur_.assign(static_cast<std::size_t>(width_), 0.0);
    next_ = cur_;
    std::vector<double> m;
    for (const auto& p : chain.law.initial) m.push_back(to_double(p));
    offsets_.push_back(0);
    for (long long i = -chain.window; i <= chain.window; ++i) {
      std::map<int, double> law;
      for (std::size_t j = 0; j < chain.cells; ++j) law[chain.jump(i, j)] += m[j];
      for (const auto& [v, p] : law) steps_.push_back({v, p});
      offsets_.push_back(steps_.size());
    }
  }

  void seed(long long site) {
    cur_[index(site)] += 1.0;
    lo_ = hi_ = site;
    active_ = true;
  }

  double mass(long long site) const {
    return active_ && site >= lo_ && site <= hi_ ? cur_[index(site)] : 0.0;
  }

  double take(long long site) {
    if (!active_ || site < lo_ || site > hi_) return 0.0;
    return std::exchange(cur_[index(site)], 0.0);
  }

  void step() {
    if (!active_) return;
    const long long nlo = std::max(lo_ - chain_.max_jump, -chain_.window);
    const long long nhi = std::min(hi_ + chain_.max_jump, chain_.window);
    std::fill(next_.begin() + static_cast<std::ptrdiff_t>(index(nlo)),
              next_.begin() + static_cast<std::ptrdiff_t>(index(nhi)) + 1, 0.0);
    for (long long s = lo_; s <= hi_; ++s) {
      const double v = cur_[index(s)];
      if (v == 0.0) continue;
      for (std::size_t k = offsets_[index(s)]; k < offsets_[index(s) + 1]; ++k) {
        const long long t = s + steps_[k].first;
        if (t < -chain_.window || t > chain_.window) continue;
        next_[index(t)] += v * steps_[k].second;
      }
      cur_[index(s)] = 0.0;
    }
    std::swap(cur_, next_);
    lo_ = nlo;
    hi_ = nhi;
  }

  void trim(double eps) {
    while (active_ && lo_ < hi_ && cur_[index(lo_)] < eps) dropped_ += take(lo_), ++lo_;
    while (active_ && hi_ > lo_ && cur_[index(hi_)] < eps) dropped_ += take(hi_), --hi_;
  }

  double dropped() const { return dropped_; }
  bool active() const { return active_; }
  long long lo() const { return lo_; }
  long long hi() const { return hi_; }

 private:
  std::size_t index(long long site) const { return static_cast<std::size_t>(site + chain_.window); }

  const SiteChainDP& chain_;
  long long width_;
  std::vector<double> cur_;
  std::vector<double> next_;
  std::vector<std::pair<int, double>> steps_;
  std::vector<std::size_t> offsets_;
  long long lo_ = 0;
  long long hi_ = -1;
  bool active_ = false;
  double dropped_ = 0.0;
};

// Mass at a site regardless of the propagator.
inline double site_mass(const JointDP<double>& dp, long long s) { return dp.site_total(s); }
inline double site_mass(const SiteDP& dp, long long s) { return dp.mass(s); }

void require_reach(const SiteChainDP& chain, long long lo, long long hi, std::size_t horizon) {
  const long long reach = static_cast<long long>(horizon) * std::max(chain.max_jump, 1);
  if (lo - reach < -chain.window || hi + reach > chain.window) {
    throw Error(Errc::window_too_small, "window " + std::to_string(chain.window) + " cannot contain horizon " +
                                            std::to_string(horizon) + " from sites [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "]");
  }
}

constexpr double kTrimEps = 1e-40;

}  // namespace

Rational path_probability(const SiteChainDP& chain, std::span<const long long> sites) {
  if (sites.empty()) return Rational(1);
  for (long long s : sites) {
    if (!chain.contains(s)) throw Error(Errc::window_too_small, "path leaves the chain window");
  }
  const auto w = integer_weights(chain.law);
  std::vector<BigInt> mass = w.initial;
  for (std::size_t t = 0; t + 1 < sites.size(); ++t) {
    std::vector<BigInt> next(chain.cells, BigInt(0));
    for (std::size_t j = 0; j < chain.cells; ++j) {
      if (is_zero(mass[j]) || sites[t] + chain.jump(sites[t], j) != sites[t + 1]) continue;
      for (std::size_t c = 0; c < chain.cells; ++c) next[c] += mass[j] * w.trans[j][c];
    }
    mass = std::move(next);
  }
  BigInt total = std::accumulate(mass.begin(), mass.end(), BigInt(0));
  return quotient(total, w.initial_den * power(w.trans_den, sites.size() - 1));
}

Rational return_prob_by_time(const SiteChainDP& chain, long long start, std::size_t horizon) {
  require_reach(chain, start, start, horizon);
  const auto w = integer_weights(chain.law);
  JointDP<BigInt> dp(chain, w);
  dp.seed(start);
  BigInt acc = 0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    dp.step();
    acc = acc * w.trans_den + dp.take(start);
  }
  return quotient(acc, w.initial_den * power(w.trans_den, horizon));
}

namespace {

template <class DP>
ApproxProbability approx_return(DP dp, long long start, std::size_t horizon) {
  double acc = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    dp.step();
    acc += dp.take(start);
    dp.trim(kTrimEps);
  }
  return {acc, dp.dropped()};
}

template <class DP>
HorizonProfile profile(const DP& seeded, long long start, std::size_t horizon, double margin) {
  HorizonProfile out;
  DP first = seeded;
  for (std::size_t t = 1; t <= horizon; ++t) {
    first.step();
    out.return_by_horizon += first.take(start);
    first.trim(kTrimEps);
  }
  DP free = seeded;
  const std::size_t half = horizon / 2;
  for (std::size_t t = 1; t <= half; ++t) {
    free.step();
    free.trim(kTrimEps);
  }
  DP late = free;
  for (std::size_t t = half + 1; t <= horizon; ++t) {
    free.step();
    free.trim(kTrimEps);
    late.step();
    out.late_return += late.take(start);
    late.trim(kTrimEps);
  }
  const double cut = margin * static_cast<double>(horizon);
  double mean = 0.0;
  double second = 0.0;
  if (free.active()) {
    for (long long s = free.lo(); s <= free.hi(); ++s) {
      const double p = site_mass(free, s);
      const double d = static_cast<double>(s - start);
      if (d > cut) out.final_above += p;
      if (d < -cut) out.final_below += p;
      mean += p * d;
      second += p * d * d;
    }
  }
  out.mean_final = mean;
  out.variance_final = second - mean * mean;
  out.dropped_mass = first.dropped() + free.dropped() + late.dropped();
  return out;
}

}  // namespace

ApproxProbability return_prob_by_time_approx(const SiteChainDP& chain, long long start, std::size_t horizon) {
  require_reach(chain, start, start, horizon);
  if (chain.collapsed) {
    SiteDP dp(chain);
    dp.seed(start);
    return approx_return(std::move(dp), start, horizon);
  }
  const auto w = double_weights(chain.law);
  JointDP<double> dp(chain, w);
  dp.seed(start);
  return approx_return(std::move(dp), start, horizon);
}

HorizonProfile horizon_profile(const SiteChainDP& chain, long long start, std::size_t horizon, double margin) {
  require_reach(chain, start, start, horizon);
  if (chain.collapsed) {
    SiteDP dp(chain);
    dp.seed(start);
    return profile(dp, start, horizon, margin);
  }
  const auto w = double_weights(chain.law);
  JointDP<double> dp(chain, w);
  dp.seed(start);
  return profile(dp, start, horizon, margin);
}

Rational hit_before(const SiteChainDP& chain, long long start, long long target_a, long long target_b) {
  if (!(target_a < start && start < target_b)) {
    throw Error(Errc::config_error, "hit_before needs target_a < start < target_b");
  }
  if (!chain.collapsed) throw Error(Errc::unsupported_base, "hit_before needs a collapsed (full-branch) chain");
  if (target_a + 1 < -chain.window || target_b - 1 > chain.window) {
    throw Error(Errc::window_too_small, "targets outside the chain window");
  }
  const long long n = target_b - target_a - 1;
  const long long band = std::max(chain.max_jump, 1);
  const long long width = 2 * band + 1;
  // Row r (site target_a + 1 + r) stores columns r - band .. r + band.
  std::vector<std::vector<Rational>> A(static_cast<std::size_t>(n), std::vector<Rational>(width, Rational(0)));
  std::vector<Rational> rhs(static_cast<std::size_t>(n), Rational(0));
  auto at = [&](long long r, long long c) -> Rational& {
    return A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c - r + band)];
  };
  for (long long r = 0; r < n; ++r) {
    const long long site = target_a + 1 + r;
    at(r, r) += 1;
    for (const auto& [v, p] : chain.jump_distribution(site)) {
      const long long to = site + v;
      if (to >= target_b) {
        rhs[static_cast<std::size_t>(r)] += p;
      } else if (to > target_a) {
        at(r, to - target_a - 1) -= p;
      }
    }
  }
  // Banded elimination without pivoting (I - Q is an M-matrix).
  for (long long col = 0; col < n; ++col) {
    const Rational pivot = at(col, col);
    if (pivot == 0) throw Error(Errc::singular_system, "zero pivot at site " + std::to_string(target_a + 1 + col));
    for (long long r = col + 1; r <= std::min(n - 1, col + band); ++r) {
      if (at(r, col) == 0) continue;
      const Rational f = at(r, col) / pivot;
      for (long long c = col; c <= std::min(n - 1, col + band); ++c) at(r, c) -= f * at(col, c);
      rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(col)];
    }
  }
  std::vector<Rational> h(static_cast<std::size_t>(n));
  for (long long r = n - 1; r >= 0; --r) {
    Rational acc = rhs[static_cast<std::size_t>(r)];
    for (long long c = r + 1; c <= std::min(n - 1, r + band); ++c) acc -= at(r, c) * h[static_cast<std::size_t>(c)];
    h[static_cast<std::size_t>(r)] = acc / at(r, r);
  }
  return h[static_cast<std::size_t>(start - target_a - 1)];
}

Rational taboo_hit_exact(const SiteChainDP& chain, const TabooQuery& query) {
  if (query.horizon == 0) throw Error(Errc::horizon_zero, "taboo query needs horizon >= 1");
  const long long M = std::max(chain.max_jump, 1);
  const long long base = query.start_block * M;
  require_reach(chain, base, base + M - 1, query.horizon);
  const auto w = integer_weights(chain.law);
  JointDP<BigInt> dp(chain, w);
  for (long long s = base; s < base + M; ++s) dp.seed(s);
  const long long tlo = query.target_block * M;
  BigInt acc = 0;
  for (std::size_t t = 1; t <= query.horizon; ++t) {
    dp.step();
    BigInt hit = 0;
    for (long long s = tlo; s < tlo + M; ++s) hit += dp.take(s);
    if (query.taboo_block && *query.taboo_block != query.target_block) {
      dp.kill(*query.taboo_block * M, *query.taboo_block * M + M - 1);
    }
    acc = acc * w.trans_den + hit;
  }
  return quotient(acc, BigInt(static_cast<long>(M)) * w.initial_den * power(w.trans_den, query.horizon));
}

PathCountTable path_counts(std::size_t n_max, std::size_t k_max) {
  PathCountTable table;
  table.n_max = n_max;
  table.k_max = k_max;
  table.c.assign(n_max + 1, std::vector<BigInt>(k_max + 1, BigInt(0)));
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (k == 1) {
      table.c[0][1] = 1;
      continue;
    }
    // ways[p]: paths at position -(p + 1), p = 0..k-2, strictly inside (-k, 0).
    std::vector<BigInt> ways(k - 1, BigInt(0));
    ways[0] = 1;  // time 1: at -1
    const std::size_t last = 2 * n_max + k;
    for (std::size_t t = 1; t < last; ++t) {
      // A step from -(k-1) to -k at time t + 1 completes a path of length t + 1.
      const std::size_t length = t + 1;
      if (length >= k && (length - k) % 2 == 0) table.c[(length - k) / 2][k] = ways[k - 2];
      std::vector<BigInt> next(k - 1, BigInt(0));
      for (std::size_t p = 0; p + 1 < k; ++p) {
        if (is_zero(ways[p])) continue;
        if (p + 1 < k - 1) next[p + 1] += ways[p];  // down
        if (p > 0) next[p - 1] += ways[p];          // up, never back to 0
      }
      ways = std::move(next);
    }
  }
  return table;
}

FirstPassage first_passage_measure(const MarkovIntervalMap& map, const EnvironmentRealization& env, std::size_t k,
                                   std::size_t n_max, Direction direction) {
  if (k == 0) throw Error(Errc::config_error, "first passage needs k >= 1");
  const long long kk = static_cast<long long>(k);
  SiteChainDP chain = build_site_chain(map, env, kk + 1, /*joint_chain=*/true);
  for (int v : chain.jumps) {
    if (v != 1 && v != -1) throw Error(Errc::unsupported_jumps, "first passage needs +-1 jumps");
  }
  const long long sign = direction == Direction::down ? -1 : 1;
  const long long target = sign * kk;
  const std::size_t horizon = 2 * n_max + k;
  const auto w = integer_weights(chain.law);
  JointDP<BigInt> dp(chain, w);
  dp.seed(0);
  BigInt acc = 0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    dp.step();
    BigInt hit = dp.take(target);
    if (sign < 0) {
      dp.kill(0, chain.window);
    } else {
      dp.kill(-chain.window, 0);
    }
    acc = acc * w.trans_den + hit;
  }
  FirstPassage out;
  out.value = quotient(acc, w.initial_den * power(w.trans_den, horizon));

  // Bound for supports where every function has the same number r of +1 cells.
  const auto& support = env.model().support;
  std::optional<std::size_t> r;
  bool constant_r = true;
  for (const auto& g : support) {
    std::size_t plus = static_cast<std::size_t>(std::count(g.jumps.begin(), g.jumps.end(), 1));
    if (r && *r != plus) constant_r = false;
    r = plus;
  }
  if (constant_r && r && map.full_branch()) {
    const double K = static_cast<double>(map.size());
    const double toward = direction == Direction::down ? K - static_cast<double>(*r) : static_cast<double>(*r);
    const double away = K - toward;
    const double M = gibbs_bounds(map).sup_g;
    const auto counts = path_counts(n_max, k);
    double sum = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
      sum += counts.at(n, k).get_d() * std::pow(away * toward * M * M, static_cast<double>(n));
    }
    out.bound = std::pow(toward * M, static_cast<double>(k)) * sum;
  }
  return out;
}

ReturnCylinderCount return_cylinder_count(const MarkovIntervalMap& map, const TransitionFunction& g,
                                          std::size_t start_cell, std::size_t n, std::uint64_t cap) {
  if (g.size() != map.size()) throw Error(Errc::invalid_model, "transition function size does not match the map");
  for (int v : g.jumps) {
    if (v != 1 && v != -1) throw Error(Errc::unsupported_jumps, "return cylinder count needs +-1 jumps");
  }
  if (start_cell >= map.size()) throw Error(Errc::config_error, "start cell out of range");
  const std::size_t rank = 2 * n + 1;
  if (count_cylinders(map, rank) > cap) {
    throw Error(Errc::enumeration_too_large, "rank " + std::to_string(rank) + " exceeds the enumeration cap");
  }
  ReturnCylinderCount out;
  const std::size_t r = static_cast<std::size_t>(std::count(g.jumps.begin(), g.jumps.end(), 1));
  BigInt binom;
  mpz_bin_uiui(binom.get_mpz_t(), 2 * n, n);
  out.counting_bound = power(BigInt(static_cast<unsigned long>(r)), n) *
                    power(BigInt(static_cast<unsigned long>(map.size() - r)), n) * binom;

  // Words w_0 = start_cell, ..., w_{2n} = start_cell with sum_{t<2n} g(w_t) = 0.
  const long long steps = static_cast<long long>(2 * n);
  auto extend = [&](auto&& self, std::size_t prev, long long t, long long pos) -> void {
    if (t == steps) {
      if (pos == 0 && (t == 0 || map.transition_allowed(prev, start_cell))) ++out.enumerated;
      return;
    }
    if (std::abs(pos) > steps - t) return;
    for (std::size_t c : map.image_sets()[prev]) self(self, c, t + 1, pos + g[c]);
  };
  if (n == 0) {
    out.enumerated = 1;
    return out;
  }
  extend(extend, start_cell, 1, g[start_cell]);
  return out;
}

ReturnCylinderCount return_cylinder_count(const MarkovIntervalMap& map, std::size_t r, std::size_t n,
                                          std::uint64_t cap) {
  if (r > map.size()) throw Error(Errc::config_error, "r exceeds the number of cells");
  TransitionFunction g;
  for (std::size_t j = 0; j < map.size(); ++j) g.jumps.push_back(j < r ? 1 : -1);
  return return_cylinder_count(map, g, 0, n, cap);
}

TransienceCertificate transience_certificate(const MarkovIntervalMap& map, std::size_t r,
                                             std::span<const TransitionFunction> support) {
  const std::size_t K = map.size();
  if (!map.full_branch()) throw Error(Errc::hypothesis_violated, "map is not full-branch");
  if (r < 1 || r + 1 > K) throw Error(Errc::hypothesis_violated, "need 1 <= r <= #cells - 1");
  for (const auto& g : support) {
    if (g.size() != K) throw Error(Errc::hypothesis_violated, "support function size mismatch");
    std::size_t plus = 0;
    for (int v : g.jumps) {
      if (v != 1 && v != -1) throw Error(Errc::hypothesis_violated, "support function " + to_string(g) + " is not +-1");
      if (v == 1) ++plus;
    }
    if (plus != r) {
      throw Error(Errc::hypothesis_violated,
                  "support function " + to_string(g) + " has " + std::to_string(plus) + " cells at +1, not r");
    }
  }
  const auto gb = gibbs_bounds(map);
  const Rational min_slope = 1 / gb.sup_g_exact;
  const long product = 4 * static_cast<long>(r) * static_cast<long>(K - r);
  TransienceCertificate out;
  out.inf_h = gb.inf_h;
  out.threshold = 0.5 * std::log(static_cast<double>(product));
  out.holds = min_slope * min_slope > product;
  if (out.holds) {
    if (2 * r > K) out.direction = +1;
    if (2 * r < K) out.direction = -1;
  }
  return out;
}

SeriesDiagnostic series_diagnostic(const MarkovIntervalMap& map, const EnvironmentRealization& env,
                                   std::size_t base_cell, const Rational& theta, std::size_t j_max) {
  if (!(theta > 0 && theta < 1)) throw Error(Errc::config_error, "theta must lie in (0,1)");
  if (base_cell >= map.size()) throw Error(Errc::config_error, "base cell out of range");
  const auto& support = env.model().support;
  const bool all_odd = std::all_of(support.begin(), support.end(), [](const TransitionFunction& g) {
    return std::all_of(g.jumps.begin(), g.jumps.end(), [](int v) { return v % 2 != 0; });
  });
  SeriesDiagnostic out;
  out.period = all_odd ? 2 : 1;
  out.normalizer = (1 + theta) / (1 - theta);

  const int M = std::max(1, symmetry_and_bounds(env.model()).jump_bound_M);
  const std::size_t horizon = out.period * j_max;
  const auto chain = build_site_chain(map, env, static_cast<long long>(horizon) * M + 1, /*joint_chain=*/true);
  const auto w = integer_weights(chain.law);
  JointDP<BigInt> dp(chain, w);
  dp.seed(0, base_cell);

  Rational sum = 0;
  for (std::size_t t = 0; t <= horizon; ++t) {
    if (t % out.period == 0) {
      Rational d = quotient(dp.mass(0, base_cell), w.initial_den * power(w.trans_den, t)) / out.normalizer;
      sum += d;
      out.increments.push_back(d);
      out.partial_sums.push_back(sum);
    }
    if (t < horizon) dp.step();
  }
  for (std::size_t J = 0; J + 1 < out.increments.size(); ++J) {
    out.ratios.push_back(out.increments[J] == 0 ? std::numeric_limits<double>::quiet_NaN()
                                                : to_double(out.increments[J + 1] / out.increments[J]));
  }

  std::optional<std::size_t> r;
  bool pm_one_constant_r = map.full_branch();
  for (const auto& g : support) {
    std::size_t plus = 0;
    for (int v : g.jumps) {
      if (v != 1 && v != -1) pm_one_constant_r = false;
      if (v == 1) ++plus;
    }
    if (r && *r != plus) pm_one_constant_r = false;
    r = plus;
  }
  if (pm_one_constant_r && r) {
    const Rational Mg = gibbs_bounds(map).sup_g_exact;
    out.geometric_bound = Rational(4 * static_cast<long>(*r) * static_cast<long>(map.size() - *r)) * Mg * Mg;
  }
  return out;
}

std::string_view to_string(SolomonVerdict v) {
  switch (v) {
    case SolomonVerdict::left: return "left";
    case SolomonVerdict::right: return "right";
    case SolomonVerdict::recurrent: return "recurrent";
  }
  return "recurrent";
}

SolomonResult solomon_classifier(std::span<const AlphaWeight> support) {
  Rational total = 0;
  for (const auto& aw : support) {
    if (aw.alpha <= 0 || aw.alpha >= 1) throw Error(Errc::degenerate_alpha, "alpha = " + to_string(aw.alpha));
    if (aw.weight < 0) throw Error(Errc::config_error, "negative weight");
    total += aw.weight;
  }
  if (total != 1) throw Error(Errc::config_error, "alpha weights sum to " + to_string(total));

  std::map<Rational, Rational> by_alpha;
  for (const auto& aw : support) by_alpha[aw.alpha] += aw.weight;
  SolomonResult out;
  out.exact_zero = std::all_of(by_alpha.begin(), by_alpha.end(), [&](const auto& kv) {
    auto it = by_alpha.find(Rational(1 - kv.first));
    return it != by_alpha.end() && it->second == kv.second;
  });
  for (const auto& [alpha, weight] : by_alpha) {
    out.expectation += to_double(weight) * std::log(to_double(Rational(1 - alpha)) / to_double(alpha));
  }
  if (out.exact_zero) {
    out.expectation = 0.0;
    out.verdict = SolomonVerdict::recurrent;
  } else if (std::abs(out.expectation) <= 1e-12) {
    out.verdict = SolomonVerdict::recurrent;
  } else {
    out.verdict = out.expectation < 0 ? SolomonVerdict::right : SolomonVerdict::left;
  }
  return out;
}

std::vector<AlphaWeight> alpha_support(const MarkovIntervalMap& map, const EnvironmentModel& model) {
  EnvironmentModel m = model;
  validate(m, map.size());
  std::vector<Rational> weights;
  const std::size_t n = m.support.size();
  switch (m.kind) {
    case EnvKind::fixed: weights.assign(1, Rational(1)); break;
    case EnvKind::periodic: weights.assign(n, ratio(1, static_cast<long>(n))); break;
    case EnvKind::iid: weights = m.weights; break;
    case EnvKind::markov: weights = m.stationary; break;
    case EnvKind::piecewise:
      throw Error(Errc::hypothesis_violated, "piecewise environments have no stationary one-site law");
  }
  std::vector<AlphaWeight> out;
  for (std::size_t i = 0; i < n; ++i) {
    Rational alpha = 0;
    for (std::size_t j = 0; j < map.size(); ++j) {
      const int v = m.support[i][j];
      if (v != 1 && v != -1) throw Error(Errc::unsupported_jumps, "alpha needs +-1 jumps");
      if (v == 1) alpha += map.measures()[j];
    }
    out.push_back({alpha, weights[i]});
  }
  return out;
}

}  // namespace dwde
