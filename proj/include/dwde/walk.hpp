#pragma once

#include "dwde/environment.hpp"
#include "dwde/markov_map.hpp"
#include "dwde/rng.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace dwde {

/// Exact point of the skew product: base point x and lattice site i.
struct WalkState {
  Rational x;
  long long site = 0;
};

/// T_f(x, i) = (T x, i + f_i(x)).
WalkState step(const MarkovIntervalMap& map, const EnvironmentRealization& env, const WalkState& state);

enum class SimMode { exact, symbolic };

std::string_view to_string(SimMode mode);
SimMode parse_sim_mode(std::string_view text);

/// Draws the symbol process of a Lebesgue-uniform point exactly: each
/// conditional law has a common integer denominator and is sampled with an
/// unbiased bounded integer draw.
class SymbolSampler {
 public:
  explicit SymbolSampler(const MarkovIntervalMap& map);

  template <class Gen>
  std::size_t initial(Gen& gen) const {
    return pick(initial_, gen);
  }
  template <class Gen>
  std::size_t next(std::size_t current, Gen& gen) const {
    return pick(independent_ ? initial_ : rows_[current], gen);
  }
  /// True when symbols are i.i.d. (full-branch maps).
  bool independent() const noexcept { return independent_; }

 private:
  struct Row {
    std::uint64_t denominator = 1;
    std::vector<std::uint64_t> cumulative;
  };

  template <class Gen>
  static std::size_t pick(const Row& row, Gen& gen) {
    const std::uint64_t u = rng::bounded(gen, row.denominator);
    std::size_t k = 0;
    while (u >= row.cumulative[k]) ++k;
    return k;
  }

  static Row make_row(const std::vector<Rational>& probs);

  Row initial_;
  std::vector<Row> rows_;
  bool independent_ = false;
};

struct TrajectorySummary {
  long long start_site = 0;
  long long final_site = 0;
  long long min_site = 0;
  long long max_site = 0;
  std::optional<std::size_t> first_return_time;  // to the exact start site
  std::optional<std::size_t> last_return_time;
  std::vector<std::optional<std::size_t>> hit_times;  // per registered target
};

struct Trajectory {
  std::size_t steps = 0;
  std::size_t thin = 1;               // sites[t] is the site at time t * thin
  std::vector<long long> sites;
  std::vector<std::size_t> symbols;   // symbol of x_t, t < steps (only when record_symbols)
  TrajectorySummary summary;
};

struct SimulateOptions {
  std::size_t steps = 0;
  SimMode mode = SimMode::symbolic;
  std::uint64_t walk_seed = 0;
  std::size_t thin = 1;  // 0: keep no path
  bool record_symbols = false;
  std::vector<long long> targets;
};

/// Simulates one trajectory of length `steps` from site `start_site`. In
/// exact mode `start_x` is required; in symbolic mode x is implicit (a
/// Lebesgue-uniform point drawn through its symbol stream). Throws
/// HorizonZero when steps == 0.
Trajectory simulate(const MarkovIntervalMap& map, const EnvironmentRealization& env, long long start_site,
                    const std::optional<Rational>& start_x, const SimulateOptions& options);

/// Lattice blocks Λ_j = {jM, ..., (j+1)M - 1}.
struct TabooQuery {
  long long start_block = 0;
  long long target_block = 0;
  std::optional<long long> taboo_block;
  std::size_t horizon = 1;
};

struct HitEstimate {
  std::size_t walks = 0;
  std::size_t hits = 0;
  double fraction = 0.0;
  double standard_error = 0.0;
};

/// Fraction of walks started uniformly in Λ_start (site uniform in the block,
/// x Lebesgue-uniform) whose first entry into Λ_target ∪ Λ_taboo at a time
/// 1 <= t <= horizon lies in Λ_target.
HitEstimate taboo_hit(const MarkovIntervalMap& map, const EnvironmentRealization& env, const TabooQuery& query,
                      std::size_t n_walks, std::uint64_t walk_seed);

struct WalkRecord {
  long long final_site = 0;
  long long min_site = 0;
  long long max_site = 0;
  std::optional<std::size_t> first_return_time;
  std::optional<std::size_t> last_return_time;
};

struct EnvSummary {
  std::size_t env_index = 0;
  std::uint64_t env_seed = 0;
  std::vector<WalkRecord> walks;
  double return_fraction = 0.0;
  std::array<long long, 5> final_quantiles{};  // 5%, 25%, 50%, 75%, 95%
  long long min_site = 0;
  long long max_site = 0;
  std::size_t votes_right = 0;  // final site above start
  std::size_t votes_left = 0;
};

struct EnsembleOptions {
  std::size_t n_envs = 1;
  std::size_t n_walks = 1;
  std::size_t steps = 1;
  SimMode mode = SimMode::symbolic;
  std::uint64_t master_seed = 0;
  long long start_site = 0;
  double budget = 2e10;     // max n_envs * n_walks * steps
  std::size_t threads = 0;  // 0: DWDE_THREADS or hardware concurrency
};

struct EnsembleReport {
  EnsembleOptions options;
  std::vector<EnvSummary> envs;
};

std::uint64_t env_seed_for(std::uint64_t master_seed, std::size_t env_index);
std::uint64_t walk_seed_for(std::uint64_t master_seed, std::size_t env_index, std::size_t walk_index);

/// Worker count: explicit request, else DWDE_THREADS, else hardware threads.
std::size_t worker_count(std::size_t requested = 0);

/// Runs n_walks walks in each of n_envs seeded environments. Deterministic in
/// master_seed regardless of thread count. Throws BudgetExceeded.
EnsembleReport run_ensemble(const MarkovIntervalMap& map, const EnvironmentModel& model,
                            const EnsembleOptions& options);

/// Walks within one fixed environment (used by the classifier and tests).
EnvSummary run_walks(const MarkovIntervalMap& map, const EnvironmentRealization& env, std::size_t env_index,
                     const EnsembleOptions& options);

/// Uniformly drawn rational start point u / (2^61 - 1) for exact-mode walks.
Rational random_rational_point(std::uint64_t seed);

}  // namespace dwde
