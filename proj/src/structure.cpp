#include "dwde/structure.hpp"

#include "dwde/error.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include <algorithm>
#include <map>
#include <sstream>

namespace dwde {

std::size_t SkewGraph::out_degree(const SkewNode& n) const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const SkewEdge& e) {
    return e.from == n;
  }));
}

SkewGraph build_skew_graph(const MarkovIntervalMap& map, const EnvironmentRealization& env, long long window) {
  if (window < 1) throw Error(Errc::config_error, "graph window must be >= 1");
  SkewGraph g;
  g.window = window;
  g.cells = map.size();
  for (long long i = -window; i <= window; ++i) {
    const auto& f = env.at(i);
    if (f.size() != map.size()) throw Error(Errc::invalid_model, "environment cell count does not match the map");
    for (std::size_t j = 0; j < map.size(); ++j) {
      g.max_jump = std::max(g.max_jump, std::abs(f[j]));
      const long long to = i + f[j];
      for (std::size_t k : map.image_sets()[j]) {
        g.edges.push_back({{j, i}, {k, to}, to < -window || to > window});
      }
    }
  }
  return g;
}

std::string edge_list(const SkewGraph& graph) {
  std::ostringstream out;
  for (const auto& e : graph.edges) {
    out << e.from.cell << ',' << e.from.site << " -> " << e.to.cell << ',' << e.to.site;
    if (e.external) out << " external";
    out << '\n';
  }
  return out.str();
}

std::vector<CommunicationClass> communication_classes(const SkewGraph& graph) {
  const long long reach = std::max(graph.max_jump, 1);
  const long long lo = -graph.window + reach;
  const long long hi = graph.window - reach;
  auto interior = [&](const SkewNode& n) { return n.site >= lo && n.site <= hi; };

  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  Graph G(graph.node_count());
  for (const auto& e : graph.edges) {
    if (!e.external) boost::add_edge(graph.index(e.from), graph.index(e.to), G);
  }
  std::vector<int> component(graph.node_count());
  const int n_comp = boost::strong_components(
      G, boost::make_iterator_property_map(component.begin(), boost::get(boost::vertex_index, G)));

  const auto nc = static_cast<std::size_t>(n_comp);
  std::vector<CommunicationClass> all(nc);
  std::vector<bool> leaves(nc, false);
  for (long long s = -graph.window; s <= graph.window; ++s) {
    for (std::size_t c = 0; c < graph.cells; ++c) {
      const SkewNode n{c, s};
      auto& cls = all[static_cast<std::size_t>(component[graph.index(n)])];
      if (interior(n)) {
        cls.nodes.push_back(n);
      } else {
        cls.truncated = true;
      }
    }
  }
  for (const auto& e : graph.edges) {
    const auto k = static_cast<std::size_t>(component[graph.index(e.from)]);
    if (e.external) {
      all[k].truncated = true;
    } else if (component[graph.index(e.to)] != component[graph.index(e.from)]) {
      leaves[k] = true;
    }
  }
  std::vector<CommunicationClass> classes;
  for (std::size_t k = 0; k < nc; ++k) {
    if (all[k].nodes.empty()) continue;
    all[k].closed = !all[k].truncated && !leaves[k];
    classes.push_back(std::move(all[k]));
  }
  std::sort(classes.begin(), classes.end(), [](const CommunicationClass& a, const CommunicationClass& b) {
    return std::tie(a.nodes.front().site, a.nodes.front().cell) < std::tie(b.nodes.front().site, b.nodes.front().cell);
  });
  return classes;
}

LinkageCheck check_linkage(const MarkovIntervalMap& map, std::span<const TransitionFunction> support) {
  return check_linkage(map.size(), map.full_branch(), support, map.name());
}

LinkageCheck check_linkage(std::size_t cells, bool full_branch, std::span<const TransitionFunction> support,
                           const std::string& map_name) {
  if (cells < 2) return {false, "condition (i) fails: #beta = " + std::to_string(cells)};
  for (const auto& g : support) {
    if (g.size() != cells) return {false, "support function " + to_string(g) + " has the wrong size"};
    const bool pm = std::all_of(g.jumps.begin(), g.jumps.end(), [](int v) { return v == 1 || v == -1; });
    const bool both = std::count(g.jumps.begin(), g.jumps.end(), 1) > 0 &&
                      std::count(g.jumps.begin(), g.jumps.end(), -1) > 0;
    if (!pm || !both) return {false, "condition (ii) fails: g(X) != {+1,-1} for g = " + to_string(g)};
  }
  if (!full_branch) return {false, "map '" + map_name + "' does not have full branches"};
  return {true, "#beta = " + std::to_string(cells) + ", every g(X) = {+1,-1}, full branches"};
}

}  // namespace dwde
