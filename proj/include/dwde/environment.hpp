#pragma once

#include "dwde/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace dwde {

/// Jump value of f on each partition element (f is constant on cells).
struct TransitionFunction {
  std::vector<int> jumps;

  std::size_t size() const noexcept { return jumps.size(); }
  int operator[](std::size_t cell) const { return jumps[cell]; }
  TransitionFunction negated() const;
  int max_abs() const;
  bool operator==(const TransitionFunction&) const = default;
};

std::string to_string(const TransitionFunction& f);

enum class EnvKind { fixed, periodic, iid, markov, piecewise };

std::string_view to_string(EnvKind kind);
EnvKind parse_env_kind(std::string_view text);

/// Generative description of an environment (f_i), i in Z.
///  fixed      every site uses support[0]
///  periodic   site i uses support[i mod n] (floor-mod for negative i)
///  iid        each site drawn independently with `weights`
///  markov     stationary chain with `matrix`, two-sided via the reversed chain
///  piecewise  ascending `cuts` c_0 < ... < c_{m-1}; sites i with
///             #{c <= i} = s use support[s] (m + 1 functions)
struct EnvironmentModel {
  EnvKind kind = EnvKind::fixed;
  std::vector<TransitionFunction> support;
  std::vector<Rational> weights;
  std::vector<std::vector<Rational>> matrix;
  std::vector<Rational> stationary;  // filled by validate() when empty
  std::vector<long long> cuts;
  std::uint64_t seed = 0;
};

/// Throws InvalidModel. `cells` (when non-zero) is #β of the driving map.
/// Computes the stationary vector for markov models if absent.
void validate(EnvironmentModel& model, std::size_t cells = 0);

struct SymmetryAndBounds {
  bool is_symmetric = false;
  int jump_bound_M = 0;
  bool uniformly_bounded = true;
};

SymmetryAndBounds symmetry_and_bounds(const EnvironmentModel& model);

/// One realisation ω of an environment model: a pure function site -> f_i.
/// Copies share the model and the sampling tables; markov realisations
/// memoise the generated chain (guarded by a mutex).
class EnvironmentRealization {
 public:
  EnvironmentRealization(std::shared_ptr<const EnvironmentModel> model, std::uint64_t env_seed);

  const EnvironmentModel& model() const noexcept { return *model_; }
  std::uint64_t env_seed() const noexcept { return env_seed_; }
  long long offset() const noexcept { return offset_; }

  /// Index into model().support of f_i.
  std::size_t index_at(long long site) const;
  const TransitionFunction& at(long long site) const { return model_->support[index_at(site)]; }

  /// Realisation of η^k(ω): shift(k).at(i) == at(i + k).
  EnvironmentRealization shift(long long k) const;

 private:
  struct SiteCache;

  std::size_t index_absolute(long long site) const;

  std::shared_ptr<const EnvironmentModel> model_;
  std::uint64_t env_seed_ = 0;
  long long offset_ = 0;
  std::shared_ptr<SiteCache> cache_;
};

EnvironmentRealization realize(const EnvironmentModel& model, std::uint64_t env_seed);
inline const TransitionFunction& env_at(const EnvironmentRealization& env, long long site) { return env.at(site); }
inline EnvironmentRealization shift(const EnvironmentRealization& env, long long k) { return env.shift(k); }

/// Dense copy of the jumps for sites [lo, hi]; used by the simulation hot loops.
class EnvWindow {
 public:
  EnvWindow(const EnvironmentRealization& env, long long lo, long long hi);

  long long lo() const noexcept { return lo_; }
  long long hi() const noexcept { return hi_; }
  std::size_t cells() const noexcept { return cells_; }
  bool contains(long long site) const noexcept { return site >= lo_ && site <= hi_; }
  int jump(long long site, std::size_t cell) const noexcept {
    return jumps_[static_cast<std::size_t>(site - lo_) * cells_ + cell];
  }
  const int* row(long long site) const noexcept { return &jumps_[static_cast<std::size_t>(site - lo_) * cells_]; }

 private:
  long long lo_;
  long long hi_;
  std::size_t cells_;
  std::vector<int> jumps_;
};

}  // namespace dwde
