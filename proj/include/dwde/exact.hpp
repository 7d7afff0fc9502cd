#pragma once

#include "dwde/environment.hpp"
#include "dwde/markov_map.hpp"
#include "dwde/walk.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace dwde {

enum class Boundary { absorb, none };

/// Finite-window reduction of the skew product to a Markov chain on
/// (symbol, site). For full-branch maps the symbols are i.i.d. under
/// Lebesgue measure and the chain collapses to a walk on sites with jump
/// law p_i(v) = sum_j m(a_j) [f_i(a_j) = v].
struct SiteChainDP {
  long long window = 0;  // sites [-window, window]
  std::size_t cells = 0;
  bool collapsed = false;
  Boundary boundary = Boundary::absorb;
  int max_jump = 0;
  SymbolLaw law;
  std::vector<int> jumps;  // (site + window) * cells + cell

  bool contains(long long site) const noexcept { return site >= -window && site <= window; }
  int jump(long long site, std::size_t cell) const {
    return jumps[static_cast<std::size_t>(site + window) * cells + cell];
  }
  /// p_site(v) under the Lebesgue symbol marginal.
  std::map<int, Rational> jump_distribution(long long site) const;
};

/// Throws UnsupportedBase for a non-full-branch map unless `joint_chain`.
SiteChainDP build_site_chain(const MarkovIntervalMap& map, const EnvironmentRealization& env, long long window,
                             bool joint_chain = false, Boundary boundary = Boundary::absorb);

/// Exact probability of the site path s_0, ..., s_n for a Lebesgue-uniform
/// start point, computed by a forward pass restricted to the path.
Rational path_probability(const SiteChainDP& chain, std::span<const long long> sites);

/// P(walk from `start` revisits `start` at some time 1..horizon). Throws
/// WindowTooSmall when start +- horizon * max_jump leaves the window.
Rational return_prob_by_time(const SiteChainDP& chain, long long start, std::size_t horizon);

struct ApproxProbability {
  double value = 0.0;
  double dropped_mass = 0.0;  // total mass discarded by tail trimming
};

/// Double-precision evaluation of return_prob_by_time for long horizons.
ApproxProbability return_prob_by_time_approx(const SiteChainDP& chain, long long start, std::size_t horizon);

/// Finite-horizon event probabilities used to certify classifier labels.
struct HorizonProfile {
  double return_by_horizon = 0.0;     // visits start in [1, N]
  double late_return = 0.0;           // visits start in (N/2, N]
  double final_above = 0.0;           // final site > start + margin * N
  double final_below = 0.0;           // final site < start - margin * N
  double mean_final = 0.0;            // E[final site - start]
  double variance_final = 0.0;
  double dropped_mass = 0.0;
};

HorizonProfile horizon_profile(const SiteChainDP& chain, long long start, std::size_t horizon, double margin);

/// P(reach [target_b, inf) before (-inf, target_a]) from start, by an exact
/// banded solve. Requires a collapsed chain. Throws SingularSystem.
Rational hit_before(const SiteChainDP& chain, long long start, long long target_a, long long target_b);

/// Exact counterpart of taboo_hit: the start site is uniform in Λ_start
/// (blocks of width M = chain.max_jump) and x is Lebesgue-uniform.
Rational taboo_hit_exact(const SiteChainDP& chain, const TabooQuery& query);

/// c[n][k]: number of +-1 step sequences of length 2n + k from 0 that first
/// hit -k at the last step with every intermediate position in (-k, 0).
struct PathCountTable {
  std::size_t n_max = 0;
  std::size_t k_max = 0;
  std::vector<std::vector<BigInt>> c;  // c[n][k], k in 0..k_max (k = 0 unused)

  const BigInt& at(std::size_t n, std::size_t k) const { return c[n][k]; }
};

PathCountTable path_counts(std::size_t n_max, std::size_t k_max);

enum class Direction { down = -1, up = +1 };

struct FirstPassage {
  Rational value;                     // truncated m(0 A_{0,-k}) (or the mirrored +k event)
  std::optional<double> bound;        // (#β-r)^k M^k sum_n c_{n,k} (r(#β-r)M^2)^n, constant C = 1
};

/// Measure of {x : walk from 0 first reaches -k (or +k) at time 2n + k for
/// some n <= n_max, staying strictly between 0 and the target before}.
/// Throws UnsupportedJumps unless every jump is +-1.
FirstPassage first_passage_measure(const MarkovIntervalMap& map, const EnvironmentRealization& env, std::size_t k,
                                   std::size_t n_max, Direction direction = Direction::down);

struct ReturnCylinderCount {
  std::uint64_t enumerated = 0;
  BigInt counting_bound;  // r^n (#β - r)^n C(2n, n)
};

/// Rank-(2n+1) cylinders that start and end in cell `start_cell` at site 0
/// of the homogeneous environment f_i = g.
ReturnCylinderCount return_cylinder_count(const MarkovIntervalMap& map, const TransitionFunction& g,
                                          std::size_t start_cell, std::size_t n,
                                          std::uint64_t cap = kDefaultEnumerationCap);
/// g = (+1 on the first r cells, -1 elsewhere), start cell 0.
ReturnCylinderCount return_cylinder_count(const MarkovIntervalMap& map, std::size_t r, std::size_t n,
                                          std::uint64_t cap = kDefaultEnumerationCap);

struct TransienceCertificate {
  bool holds = false;
  double inf_h = 0.0;
  double threshold = 0.0;  // 0.5 * ln(4 r (#β - r))
  int direction = 0;       // +1, -1, or 0 when none
};

/// Exact predicate min|s_j|^2 > 4 r (#β - r) (equivalent to inf h >
/// threshold). When `support` is given, every function must be +-1 valued
/// with exactly r cells at +1. Throws HypothesisViolated.
TransienceCertificate transience_certificate(const MarkovIntervalMap& map, std::size_t r,
                                             std::span<const TransitionFunction> support = {});

struct SeriesDiagnostic {
  std::size_t period = 1;             // returns only at multiples of `period`
  Rational normalizer;                // sum_i theta^|i|
  std::vector<Rational> increments;   // d_J = nu(A ∩ T_f^{-period J} A), J = 0..J_max
  std::vector<Rational> partial_sums; // S_J
  std::vector<double> ratios;         // d_{J+1} / d_J (NaN when d_J = 0)
  std::optional<Rational> geometric_bound;  // 4 r (#β - r) M^2 for +-1 supports with constant r
};

/// Partial sums of the return series for A = a × {0} under the weighted
/// measure ν(B × {i}) = θ^|i| m(B) / sum θ^|i|.
SeriesDiagnostic series_diagnostic(const MarkovIntervalMap& map, const EnvironmentRealization& env,
                                   std::size_t base_cell, const Rational& theta, std::size_t j_max);

enum class SolomonVerdict { left, right, recurrent };

std::string_view to_string(SolomonVerdict v);

struct SolomonResult {
  double expectation = 0.0;  // E ln((1 - α) / α)
  SolomonVerdict verdict = SolomonVerdict::recurrent;
  bool exact_zero = false;
};

struct AlphaWeight {
  Rational alpha;
  Rational weight;
};

/// Throws DegenerateAlpha for α in {0, 1} and ConfigError when weights do
/// not sum to 1.
SolomonResult solomon_classifier(std::span<const AlphaWeight> support);

/// α(g) = m{x : g(x) = +1} for each support function, weighted by the
/// model's one-site marginal law. Requires +-1 jumps.
std::vector<AlphaWeight> alpha_support(const MarkovIntervalMap& map, const EnvironmentModel& model);

}  // namespace dwde
