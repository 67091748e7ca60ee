#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sspucb/graph.hpp"

namespace sspucb::testing {

inline Edge gaussian_edge(NodeId s, NodeId t, double mean, double variance, EdgeIndex idx) {
  return Edge{s, t, Gaussian{mean, variance}, idx};
}

inline Edge fixed_edge(NodeId s, NodeId t, double value, EdgeIndex idx) {
  return Edge{s, t, Deterministic{value}, idx};
}

// A(0) -> B(1) : 1, B -> D(2) : 2, A -> D : 4
inline StochasticGraph three_node(bool deterministic = true, double variance = 2.0) {
  auto mk = [&](NodeId s, NodeId t, double m, EdgeIndex i) {
    return deterministic ? fixed_edge(s, t, m, i) : gaussian_edge(s, t, m, variance, i);
  };
  return StochasticGraph(3, 0, 2, {mk(0, 1, 1.0, 0), mk(1, 2, 2.0, 1), mk(0, 2, 4.0, 2)});
}

inline StochasticGraph single_edge(double mean = 5.0, bool deterministic = false) {
  return StochasticGraph(2, 0, 1,
                         {deterministic ? fixed_edge(0, 1, mean, 0) : gaussian_edge(0, 1, mean, 2.0, 0)});
}

// Origin 0 with three parallel routes 0 -> k -> 4 (k = 1..3), all costs fixed.
inline StochasticGraph fan(double a, double b, double c) {
  return StochasticGraph(5, 0, 4,
                         {fixed_edge(0, 1, a, 0), fixed_edge(0, 2, b, 1), fixed_edge(0, 3, c, 2),
                          fixed_edge(1, 4, 0.0, 3), fixed_edge(2, 4, 0.0, 4), fixed_edge(3, 4, 0.0, 5)});
}

// Plain Bellman-Ford over true means, written independently of the oracle.
inline std::vector<double> bellman_ford_values(const StochasticGraph& g) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> v(g.node_count(), inf);
  v[g.destination()] = 0.0;
  for (std::size_t round = 0; round < g.node_count(); ++round) {
    bool changed = false;
    for (const Edge& e : g.edges()) {
      if (e.source == g.destination()) continue;
      const double cand = expected_cost(e.distribution) + v[e.target];
      if (cand < v[e.source]) {
        v[e.source] = cand;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return v;
}

// Counts simple origin->destination paths, stopping once `limit` is exceeded.
inline std::size_t count_simple_paths(const StochasticGraph& g, std::size_t limit) {
  std::vector<std::uint8_t> on(g.node_count(), 0);
  std::size_t count = 0;
  auto dfs = [&](auto&& self, NodeId s) -> void {
    if (count > limit) return;
    if (s == g.destination()) {
      ++count;
      return;
    }
    on[s] = 1;
    for (EdgeIndex e : g.outgoing(s)) {
      const NodeId t = g.edge(e).target;
      if (!on[t]) self(self, t);
    }
    on[s] = 0;
  };
  dfs(dfs, g.origin());
  return count;
}

inline std::string data_path(const std::string& name) { return std::string(SSPUCB_DATA_DIR) + "/" + name; }

}  // namespace sspucb::testing
