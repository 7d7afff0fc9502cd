#pragma once

#include "dwde/environment.hpp"
#include "dwde/markov_map.hpp"

#include <initializer_list>
#include <vector>

namespace testing {

inline dwde::TransitionFunction fn(std::initializer_list<int> jumps) { return {std::vector<int>(jumps)}; }

inline dwde::EnvironmentModel fixed_model(dwde::TransitionFunction g) {
  dwde::EnvironmentModel m;
  m.kind = dwde::EnvKind::fixed;
  m.support = {std::move(g)};
  return m;
}

inline dwde::EnvironmentModel iid_model(std::vector<dwde::TransitionFunction> support,
                                        std::vector<dwde::Rational> weights, std::uint64_t seed = 1) {
  dwde::EnvironmentModel m;
  m.kind = dwde::EnvKind::iid;
  m.support = std::move(support);
  m.weights = std::move(weights);
  m.seed = seed;
  return m;
}

inline dwde::EnvironmentModel piecewise_model(std::vector<dwde::TransitionFunction> support,
                                              std::vector<long long> cuts) {
  dwde::EnvironmentModel m;
  m.kind = dwde::EnvKind::piecewise;
  m.support = std::move(support);
  m.cuts = std::move(cuts);
  return m;
}

// Sites visited by the word w_0 .. w_{n-1} from site 0 (n + 1 entries).
inline std::vector<long long> sites_of(const dwde::EnvironmentRealization& env, const std::vector<std::size_t>& word,
                                       long long start = 0) {
  std::vector<long long> sites{start};
  for (std::size_t c : word) sites.push_back(sites.back() + env.at(sites.back())[c]);
  return sites;
}

}  // namespace testing
