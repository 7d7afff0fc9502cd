#include "dwde/structure.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <queue>
#include <set>

using namespace dwde;
using testing::fn;

namespace {

// Breadth-first reachability inside the window [lo, hi].
std::set<SkewNode> reachable(const SkewGraph& g, SkewNode from, long long lo, long long hi) {
  std::set<SkewNode> seen{from};
  std::queue<SkewNode> q;
  q.push(from);
  while (!q.empty()) {
    const auto n = q.front();
    q.pop();
    for (const auto& e : g.edges) {
      if (e.from == n && e.to.site >= lo && e.to.site <= hi && seen.insert(e.to).second) q.push(e.to);
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("graph sizes and degrees") {
  const auto doubling = named_map("doubling");
  auto env = realize(testing::fixed_model(fn({1, -1})), 0);
  const auto g = build_skew_graph(doubling, env, 2);
  CHECK(g.node_count() == 10);
  CHECK(g.out_degree({0, 0}) == 2);
  CHECK(g.out_degree({1, 1}) == 2);

  const auto triple = named_map("triple");
  auto env3 = realize(testing::fixed_model(fn({1, 1, -1})), 0);
  const auto g3 = build_skew_graph(triple, env3, 1);
  CHECK(g3.node_count() == 9);
  CHECK(g3.out_degree({2, 0}) == 3);

  const auto markov3 = named_map("markov3");
  auto envm = realize(testing::fixed_model(fn({1, 1, -1})), 0);
  const auto gm = build_skew_graph(markov3, envm, 3);
  CHECK(gm.out_degree({1, 0}) == 2);
  CHECK(build_skew_graph(markov3, envm, 3).edges.size() == gm.edges.size());
  CHECK(edge_list(gm) == edge_list(build_skew_graph(markov3, envm, 3)));
}

TEST_CASE("edge list format") {
  auto env = realize(testing::fixed_model(fn({1, -1})), 0);
  const auto g = build_skew_graph(named_map("doubling"), env, 1);
  const auto text = edge_list(g);
  CHECK(text.rfind("0,-1 -> 0,0\n0,-1 -> 1,0\n1,-1 -> 0,-2 external\n", 0) == 0);
}

TEST_CASE("drift environment has singleton open classes") {
  auto env = realize(testing::fixed_model(fn({1, 1})), 0);
  const auto g = build_skew_graph(named_map("doubling"), env, 6);
  for (const auto& e : g.edges) CHECK(e.to.site == e.from.site + 1);
  const auto classes = communication_classes(g);
  CHECK(classes.size() == 2 * 11);
  for (const auto& c : classes) {
    CHECK(c.nodes.size() == 1);
    CHECK_FALSE(c.closed);
  }
}

TEST_CASE("symmetric environments form one interior class") {
  const auto map = named_map("doubling");
  const auto model = testing::iid_model({fn({1, -1}), fn({-1, 1})}, {ratio(1, 2), ratio(1, 2)});
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto env = realize(model, seed);
    for (long long W : {2LL, 5LL, 10LL}) {
      const auto classes = communication_classes(build_skew_graph(map, env, W));
      REQUIRE(classes.size() == 1);
      CHECK(classes[0].nodes.size() == 2 * static_cast<std::size_t>(2 * W - 1));
      CHECK(classes[0].truncated);
    }
  }
}

TEST_CASE("trap between two sites") {
  // f_0 sends everything right, f_1 everything left: {0, 1} x β is closed.
  const auto map = named_map("doubling");
  auto env = realize(testing::piecewise_model({fn({1, -1}), fn({1, 1}), fn({-1, -1}), fn({1, -1})}, {0, 1, 2}), 0);
  const auto g = build_skew_graph(map, env, 6);
  const auto classes = communication_classes(g);
  bool found = false;
  for (const auto& c : classes) {
    // Compare against explicit breadth-first mutual reachability.
    for (const auto& n : c.nodes) {
      const auto fwd = reachable(g, n, -6, 6);
      for (const auto& m : c.nodes) CHECK(fwd.count(m) == 1);
    }
    if (c.nodes.front().site == 0) {
      found = true;
      CHECK(c.nodes.size() == 4);
      CHECK(c.nodes.back().site == 1);
      CHECK(c.closed);
    } else {
      CHECK_FALSE(c.closed);
    }
  }
  CHECK(found);
}

TEST_CASE("window monotonicity") {
  const auto map = named_map("triple");
  auto env = realize(testing::iid_model({fn({1, 1, -1}), fn({2, -1, -1}), fn({1, 1, 1})},
                                        {ratio(1, 3), ratio(1, 3), ratio(1, 3)}), 7);
  for (long long W = 3; W < 9; ++W) {
    const auto small = communication_classes(build_skew_graph(map, env, W));
    const auto big = communication_classes(build_skew_graph(map, env, W + 1));
    for (const auto& c : small) {
      const auto it = std::find_if(big.begin(), big.end(), [&](const CommunicationClass& b) {
        return std::find(b.nodes.begin(), b.nodes.end(), c.nodes.front()) != b.nodes.end();
      });
      REQUIRE(it != big.end());
      CHECK(std::includes(it->nodes.begin(), it->nodes.end(), c.nodes.begin(), c.nodes.end(),
                          [](const SkewNode& a, const SkewNode& b) {
                            return std::tie(a.site, a.cell) < std::tie(b.site, b.cell);
                          }));
    }
  }
}

TEST_CASE("linkage sufficient condition") {
  const std::vector<TransitionFunction> r2{fn({1, 1, -1}), fn({1, -1, 1}), fn({-1, 1, 1})};
  auto ok = check_linkage(named_map("triple"), r2);
  CHECK(ok.holds);
  const std::vector<TransitionFunction> one_sided{fn({1, 1, -1}), fn({1, 1, 1})};
  auto bad = check_linkage(named_map("triple"), one_sided);
  CHECK_FALSE(bad.holds);
  CHECK(bad.witness.find("condition (ii)") != std::string::npos);
  const std::vector<TransitionFunction> single{fn({1})};
  auto tiny = check_linkage(1, true, single);
  CHECK_FALSE(tiny.holds);
  CHECK(tiny.witness.find("condition (i)") != std::string::npos);
  const std::vector<TransitionFunction> m3{fn({1, -1, 1})};
  CHECK_FALSE(check_linkage(named_map("markov3"), m3).holds);
}
