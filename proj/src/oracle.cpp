#include "sspucb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace sspucb {

OptimalSolution solve_exact(const StochasticGraph& graph) {
  const std::size_t n = graph.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  constexpr EdgeIndex kNoEdge = std::numeric_limits<EdgeIndex>::max();

  std::vector<std::vector<EdgeIndex>> incoming(n);
  for (const Edge& e : graph.edges()) {
    if (e.source != graph.destination()) incoming[e.target].push_back(e.edge_index);
  }

  OptimalSolution sol;
  sol.values.assign(n, inf);
  std::vector<EdgeIndex> next_edge(n, kNoEdge);
  std::vector<std::uint8_t> settled(n, 0);

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  sol.values[graph.destination()] = 0.0;
  open.emplace(0.0, graph.destination());
  while (!open.empty()) {
    const auto [d, t] = open.top();
    open.pop();
    if (settled[t]) continue;
    settled[t] = 1;
    for (EdgeIndex ei : incoming[t]) {
      const Edge& e = graph.edge(ei);
      if (settled[e.source]) continue;
      const double cand = graph.means()[ei] + d;
      double& cur = sol.values[e.source];
      if (cand < cur || (cand == cur && ei < next_edge[e.source])) {
        cur = cand;
        next_edge[e.source] = ei;
        open.emplace(cand, e.source);
      }
    }
  }

  if (!std::isfinite(sol.values[graph.origin()])) {
    throw OracleError("internal error: destination unreachable from origin");
  }

  NodeId s = graph.origin();
  sol.optimal_path.push_back(s);
  while (s != graph.destination()) {
    const EdgeIndex ei = next_edge[s];
    sol.optimal_edges.push_back(ei);
    s = graph.edge(ei).target;
    sol.optimal_path.push_back(s);
  }
  // Left-to-right, the same order episode_regret and enumerate_paths use,
  // so replaying the optimal path yields exactly zero regret.
  for (EdgeIndex ei : sol.optimal_edges) sol.optimal_cost += graph.means()[ei];

  // A tie exists if some state on the optimal path has a second edge
  // achieving the minimum, up to summation-order rounding.
  for (std::size_t k = 0; k < sol.optimal_edges.size() && sol.unique; ++k) {
    const NodeId at = sol.optimal_path[k];
    for (EdgeIndex ei : graph.outgoing(at)) {
      if (ei == sol.optimal_edges[k]) continue;
      const double alt = graph.means()[ei] + sol.values[graph.edge(ei).target];
      if (std::abs(alt - sol.values[at]) <= 1e-9 * std::max(1.0, std::abs(alt))) {
        sol.unique = false;
        break;
      }
    }
  }
  return sol;
}

std::vector<PathCost> enumerate_paths(const StochasticGraph& graph, std::size_t max_paths) {
  std::vector<PathCost> out;
  std::vector<NodeId> stack{graph.origin()};
  std::vector<std::uint8_t> on_path(graph.node_count(), 0);
  on_path[graph.origin()] = 1;

  std::function<void(NodeId, double)> dfs = [&](NodeId s, double cost) {
    if (s == graph.destination()) {
      if (out.size() == max_paths) {
        throw PathOverflowError("more than " + std::to_string(max_paths) + " simple paths");
      }
      out.push_back(PathCost{stack, cost});
      return;
    }
    for (EdgeIndex ei : graph.outgoing(s)) {
      const NodeId t = graph.edge(ei).target;
      if (on_path[t]) continue;
      on_path[t] = 1;
      stack.push_back(t);
      dfs(t, cost + graph.means()[ei]);
      stack.pop_back();
      on_path[t] = 0;
    }
  };
  dfs(graph.origin(), 0.0);

  std::sort(out.begin(), out.end(), [](const PathCost& a, const PathCost& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.nodes < b.nodes;
  });
  return out;
}

double bellman_residual(const StochasticGraph& graph, const std::vector<double>& values) {
  double worst = 0.0;
  for (NodeId s : graph.relevant_nodes()) {
    if (s == graph.destination()) continue;
    double best = std::numeric_limits<double>::infinity();
    for (EdgeIndex ei : graph.outgoing(s)) {
      best = std::min(best, graph.means()[ei] + values[graph.edge(ei).target]);
    }
    worst = std::max(worst, std::abs(values[s] - best));
  }
  return worst;
}

}  // namespace sspucb
