#include "dwde/environment.hpp"

#include "dwde/error.hpp"
#include "dwde/rng.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <numeric>

namespace dwde {

TransitionFunction TransitionFunction::negated() const {
  TransitionFunction g = *this;
  for (int& v : g.jumps) v = -v;
  return g;
}

int TransitionFunction::max_abs() const {
  int m = 0;
  for (int v : jumps) m = std::max(m, std::abs(v));
  return m;
}

std::string to_string(const TransitionFunction& f) {
  std::string s = "(";
  for (std::size_t j = 0; j < f.jumps.size(); ++j) {
    if (j) s += ",";
    if (f.jumps[j] > 0) s += "+";
    s += std::to_string(f.jumps[j]);
  }
  return s + ")";
}

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::fixed: return "fixed";
    case EnvKind::periodic: return "periodic";
    case EnvKind::iid: return "iid";
    case EnvKind::markov: return "markov";
    case EnvKind::piecewise: return "piecewise";
  }
  return "fixed";
}

EnvKind parse_env_kind(std::string_view text) {
  for (EnvKind k : {EnvKind::fixed, EnvKind::periodic, EnvKind::iid, EnvKind::markov, EnvKind::piecewise}) {
    if (to_string(k) == text) return k;
  }
  throw Error(Errc::config_error, "unknown environment kind '" + std::string(text) + "'");
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::invalid_model, what); }

void check_distribution(const std::vector<Rational>& p, std::size_t n, const std::string& what) {
  if (p.size() != n) invalid(what + ": expected " + std::to_string(n) + " entries");
  Rational total = 0;
  for (const auto& v : p) {
    if (v < 0) invalid(what + ": negative entry");
    total += v;
  }
  if (total != 1) invalid(what + " sums to " + to_string(total) + ", not 1");
}

bool irreducible(const std::vector<std::vector<Rational>>& P) {
  const std::size_t n = P.size();
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (P[u][v] > 0 && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
  }
  return true;
}

// Solves pi P = pi, sum pi = 1 by Gauss-Jordan elimination over the rationals.
std::vector<Rational> stationary_vector(const std::vector<std::vector<Rational>>& P) {
  const std::size_t n = P.size();
  // Rows: (P^T - I) with the last equation replaced by sum = 1.
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n + 1, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) A[i][j] = P[j][i] - (i == j ? 1 : 0);
  }
  for (std::size_t j = 0; j < n; ++j) A[n - 1][j] = 1;
  A[n - 1][n] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && A[pivot][col] == 0) ++pivot;
    if (pivot == n) invalid("markov matrix has no unique stationary vector");
    std::swap(A[col], A[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || A[r][col] == 0) continue;
      Rational f = A[r][col] / A[col][col];
      for (std::size_t c = col; c <= n; ++c) A[r][c] -= f * A[col][c];
    }
  }
  std::vector<Rational> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = A[i][n] / A[i][i];
  return pi;
}

std::vector<double> cumulative(const std::vector<Rational>& p) {
  std::vector<double> c(p.size());
  Rational acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    c[i] = to_double(acc);
  }
  if (!c.empty()) c.back() = 1.0;
  return c;
}

std::size_t pick(const std::vector<double>& cum, double u) {
  for (std::size_t i = 0; i < cum.size(); ++i) {
    if (u < cum[i]) return i;
  }
  return cum.size() - 1;
}

long long floor_mod(long long a, long long n) {
  long long r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

void validate(EnvironmentModel& model, std::size_t cells) {
  if (model.support.empty()) invalid("empty support");
  const std::size_t k = cells ? cells : model.support.front().size();
  for (const auto& g : model.support) {
    if (g.size() != k || k == 0) {
      invalid("transition function " + to_string(g) + " has " + std::to_string(g.size()) + " cells, expected " +
              std::to_string(k));
    }
  }
  const std::size_t n = model.support.size();
  switch (model.kind) {
    case EnvKind::fixed:
      if (n != 1) invalid("fixed environment needs exactly one transition function");
      break;
    case EnvKind::periodic:
      break;
    case EnvKind::iid:
      check_distribution(model.weights, n, "iid weights");
      break;
    case EnvKind::markov: {
      if (model.matrix.size() != n) invalid("markov matrix must be " + std::to_string(n) + "x" + std::to_string(n));
      for (const auto& row : model.matrix) check_distribution(row, n, "markov matrix row");
      if (!irreducible(model.matrix)) invalid("markov chain is not irreducible");
      auto pi = stationary_vector(model.matrix);
      if (model.stationary.empty()) {
        model.stationary = pi;
      } else {
        check_distribution(model.stationary, n, "stationary vector");
        if (model.stationary != pi) invalid("given stationary vector is not invariant for the matrix");
      }
      break;
    }
    case EnvKind::piecewise:
      if (model.cuts.size() + 1 != n) invalid("piecewise environment needs support size = cuts + 1");
      for (std::size_t i = 1; i < model.cuts.size(); ++i) {
        if (model.cuts[i - 1] >= model.cuts[i]) invalid("piecewise cuts must be strictly increasing");
      }
      break;
  }
}

SymmetryAndBounds symmetry_and_bounds(const EnvironmentModel& model) {
  SymmetryAndBounds out;
  for (const auto& g : model.support) out.jump_bound_M = std::max(out.jump_bound_M, g.max_abs());
  out.uniformly_bounded = true;
  if (model.kind != EnvKind::iid || model.weights.size() != model.support.size()) return out;
  auto weight_of = [&](const TransitionFunction& f) {
    Rational w = 0;
    for (std::size_t i = 0; i < model.support.size(); ++i) {
      if (model.support[i] == f) w += model.weights[i];
    }
    return w;
  };
  out.is_symmetric = std::all_of(model.support.begin(), model.support.end(),
                                 [&](const TransitionFunction& g) { return weight_of(g) == weight_of(g.negated()); });
  return out;
}

struct EnvironmentRealization::SiteCache {
  std::vector<double> weights_cum;
  std::mutex mutex;
  std::vector<std::uint32_t> forward;   // sites 0, 1, 2, ...
  std::vector<std::uint32_t> backward;  // sites -1, -2, ...
  std::vector<double> stationary_cum;
  std::vector<std::vector<double>> forward_cum;
  std::vector<std::vector<double>> reversed_cum;
};

EnvironmentRealization::EnvironmentRealization(std::shared_ptr<const EnvironmentModel> model, std::uint64_t env_seed)
    : model_(std::move(model)), env_seed_(env_seed) {
  cache_ = std::make_shared<SiteCache>();
  if (model_->kind == EnvKind::iid) cache_->weights_cum = cumulative(model_->weights);
  if (model_->kind == EnvKind::markov) {
    const auto& P = model_->matrix;
    const auto& pi = model_->stationary;
    const std::size_t n = P.size();
    cache_->stationary_cum = cumulative(pi);
    for (std::size_t j = 0; j < n; ++j) {
      cache_->forward_cum.push_back(cumulative(P[j]));
      std::vector<Rational> rev(n);
      for (std::size_t k = 0; k < n; ++k) rev[k] = pi[k] * P[k][j] / pi[j];
      cache_->reversed_cum.push_back(cumulative(rev));
    }
  }
}

EnvironmentRealization realize(const EnvironmentModel& model, std::uint64_t env_seed) {
  EnvironmentModel copy = model;
  validate(copy);
  return EnvironmentRealization(std::make_shared<const EnvironmentModel>(std::move(copy)), env_seed);
}

std::size_t EnvironmentRealization::index_at(long long site) const { return index_absolute(site + offset_); }

EnvironmentRealization EnvironmentRealization::shift(long long k) const {
  EnvironmentRealization out = *this;
  out.offset_ += k;
  return out;
}

std::size_t EnvironmentRealization::index_absolute(long long site) const {
  const auto& m = *model_;
  auto counter = static_cast<std::uint64_t>(site);
  switch (m.kind) {
    case EnvKind::fixed:
      return 0;
    case EnvKind::periodic:
      return static_cast<std::size_t>(floor_mod(site, static_cast<long long>(m.support.size())));
    case EnvKind::piecewise:
      return static_cast<std::size_t>(std::upper_bound(m.cuts.begin(), m.cuts.end(), site) - m.cuts.begin());
    case EnvKind::iid:
      return pick(cache_->weights_cum, rng::unit(rng::prf(env_seed_, counter)));
    case EnvKind::markov: {
      auto& c = *cache_;
      std::lock_guard lock(c.mutex);
      if (c.forward.empty()) {
        c.forward.push_back(static_cast<std::uint32_t>(pick(c.stationary_cum, rng::unit(rng::prf(env_seed_, 0)))));
      }
      if (site >= 0) {
        auto idx = static_cast<std::size_t>(site);
        while (c.forward.size() <= idx) {
          auto s = static_cast<std::uint64_t>(c.forward.size());
          c.forward.push_back(
              static_cast<std::uint32_t>(pick(c.forward_cum[c.forward.back()], rng::unit(rng::prf(env_seed_, s)))));
        }
        return c.forward[idx];
      }
      auto idx = static_cast<std::size_t>(-site - 1);
      while (c.backward.size() <= idx) {
        std::uint32_t prev = c.backward.empty() ? c.forward.front() : c.backward.back();
        auto s = static_cast<std::uint64_t>(-static_cast<long long>(c.backward.size()) - 1);
        c.backward.push_back(static_cast<std::uint32_t>(pick(c.reversed_cum[prev], rng::unit(rng::prf(env_seed_, s)))));
      }
      return c.backward[idx];
    }
  }
  return 0;
}

EnvWindow::EnvWindow(const EnvironmentRealization& env, long long lo, long long hi)
    : lo_(lo), hi_(hi), cells_(env.model().support.front().size()) {
  jumps_.resize(static_cast<std::size_t>(hi - lo + 1) * cells_);
  for (long long i = lo; i <= hi; ++i) {
    const auto& f = env.at(i);
    std::copy(f.jumps.begin(), f.jumps.end(), jumps_.begin() + static_cast<std::ptrdiff_t>((i - lo) * cells_));
  }
}

}  // namespace dwde
