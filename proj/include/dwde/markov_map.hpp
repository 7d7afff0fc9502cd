#pragma once

#include "dwde/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dwde {

/// Affine branch x -> slope * x + offset.
struct Branch {
  Rational slope;
  Rational offset;

  Rational operator()(const Rational& x) const { return slope * x + offset; }
};

/// Raw description of a piecewise-linear interval map, as read from a
/// config document. Validated into a MarkovIntervalMap by build_map.
struct MapSpec {
  std::string name;
  std::vector<Rational> breakpoints;
  std::vector<Branch> branches;
};

/// Closed-open interval [lo, hi) of the unit interval; empty when hi <= lo.
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi > lo ? Rational(hi - lo) : Rational(0); }
  bool empty() const { return hi <= lo; }
};

using CylinderWord = std::vector<std::size_t>;

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Exact law of the symbol process x -> (cell of T^n x) under Lebesgue
/// measure. For piecewise-linear Markov maps this process is a Markov chain.
struct SymbolLaw {
  std::vector<Rational> initial;                  // m(a_j)
  std::vector<std::vector<Rational>> transition;  // m(a_k) / m(T a_j), 0 outside the image set
};

/// A piecewise-linear expanding Markov map of [0,1] with rational data.
/// Immutable once built; all queries are pure.
class MarkovIntervalMap {
 public:
  std::size_t size() const noexcept { return branches_.size(); }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Rational>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }
  const std::vector<std::vector<std::size_t>>& image_sets() const noexcept { return image_sets_; }
  const std::vector<Rational>& measures() const noexcept { return measures_; }
  bool full_branch() const noexcept { return full_branch_; }

  Interval cell(std::size_t j) const { return {breakpoints_[j], breakpoints_[j + 1]}; }
  /// m(T a_j).
  const Rational& image_measure(std::size_t j) const { return image_measures_[j]; }
  bool transition_allowed(std::size_t from, std::size_t to) const { return allowed_[from * size() + to]; }

  /// Cell containing x: b_{j-1} <= x < b_j, with x = 1 in the last cell.
  std::size_t cell_of(const Rational& x) const;
  Rational apply(const Rational& x) const;

  bool admissible(std::span<const std::size_t> word) const;
  /// Exact cylinder [w_0, ..., w_{n-1}] as an interval (empty if inadmissible).
  Interval cylinder(std::span<const std::size_t> word) const;

  SymbolLaw symbol_law() const;
  MapSpec spec() const;

 private:
  friend MarkovIntervalMap build_map(MapSpec spec);
  friend Rational cylinder_measure(const MarkovIntervalMap& map, std::span<const std::size_t> word);
  // Cylinder endpoints as lo/den and hi/den (not reduced).
  void pullback(std::span<const std::size_t> word, BigInt& lo, BigInt& hi, BigInt& den) const;
  MarkovIntervalMap() = default;

  std::string name_;
  std::vector<Rational> breakpoints_;
  std::vector<Branch> branches_;
  std::vector<std::vector<std::size_t>> image_sets_;
  std::vector<Rational> measures_;
  std::vector<Rational> image_measures_;
  std::vector<bool> allowed_;
  bool full_branch_ = false;
};

/// Validates a map description. Throws BadPartition, NonExpanding or
/// NonMarkovImage.
MarkovIntervalMap build_map(MapSpec spec);

/// Built-in maps: "doubling", "triple", "quad", "quint" (x -> kx mod 1),
/// "slopes244" (cells 1/2, 1/4, 1/4, full branches) and "markov3", a
/// non-full-branch map with T(a_1) = a_0 ∪ a_1.
std::optional<MapSpec> named_map_spec(std::string_view name);
MarkovIntervalMap named_map(std::string_view name);

/// Full-branch map x -> k x mod 1 with k equal cells.
MapSpec uniform_map_spec(std::size_t k);

Rational cylinder_measure(const MarkovIntervalMap& map, std::span<const std::size_t> word);

/// Admissible words of rank n in lexicographic order. Throws
/// EnumerationTooLarge if their number exceeds `cap`.
std::vector<CylinderWord> enumerate_cylinders(const MarkovIntervalMap& map, std::size_t n,
                                              std::uint64_t cap = kDefaultEnumerationCap);

/// Number of admissible words of rank n, saturating at UINT64_MAX.
std::uint64_t count_cylinders(const MarkovIntervalMap& map, std::size_t n);

struct GibbsBounds {
  double inf_h = 0.0;         // min_j ln |s_j|
  double sup_g = 0.0;         // max_j 1/|s_j| = exp(-inf_h)
  Rational sup_g_exact;
  double distortion_D = 1.0;  // constant densities on cylinder images
  Rational big_image_inf;     // min_j m(T a_j)
};

GibbsBounds gibbs_bounds(const MarkovIntervalMap& map);

}  // namespace dwde
