#pragma once

#include "dwde/environment.hpp"
#include "dwde/markov_map.hpp"

#include <span>
#include <string>
#include <vector>

namespace dwde {

struct SkewNode {
  std::size_t cell = 0;
  long long site = 0;

  auto operator<=>(const SkewNode&) const = default;
};

struct SkewEdge {
  SkewNode from;
  SkewNode to;
  bool external = false;  // target site lies outside [-W, W]
};

/// Reachability graph of the skew product on β × [-W, W]. Edges are stored
/// in canonical order: by source site, source cell, then target cell.
struct SkewGraph {
  long long window = 0;
  std::size_t cells = 0;
  int max_jump = 0;
  std::vector<SkewEdge> edges;

  std::size_t node_count() const { return cells * static_cast<std::size_t>(2 * window + 1); }
  std::size_t index(const SkewNode& n) const {
    return static_cast<std::size_t>(n.site + window) * cells + n.cell;
  }
  std::size_t out_degree(const SkewNode& n) const;
};

/// Throws ConfigError when W < 1.
SkewGraph build_skew_graph(const MarkovIntervalMap& map, const EnvironmentRealization& env, long long window);

/// One line per edge: "j,i -> k,i'" (external edges get a trailing " external").
std::string edge_list(const SkewGraph& graph);

struct CommunicationClass {
  std::vector<SkewNode> nodes;  // interior nodes only, sorted by (site, cell)
  bool truncated = false;       // the component touches the window boundary: no certification
  bool closed = false;          // no edge leaves the component (never set when truncated)
};

/// Strongly connected components of the window graph, restricted to the
/// interior sites [-W + M, W - M] whose successors all lie in the window.
/// Components without interior nodes are dropped; sorted by smallest node.
std::vector<CommunicationClass> communication_classes(const SkewGraph& graph);

struct LinkageCheck {
  bool holds = false;
  std::string witness;
};

/// Sufficient condition: (i) 2 <= #β, (ii) every g has g(X) = {+1, -1}, and
/// the map has full branches.
LinkageCheck check_linkage(const MarkovIntervalMap& map, std::span<const TransitionFunction> support);
/// Same check from the partition size alone (a map needs #β >= 2 to exist).
LinkageCheck check_linkage(std::size_t cells, bool full_branch, std::span<const TransitionFunction> support,
                           const std::string& map_name = "map");

}  // namespace dwde
