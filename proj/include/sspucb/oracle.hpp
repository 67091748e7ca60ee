#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sspucb/graph.hpp"

namespace sspucb {

/// Ground truth for a graph under its true edge means.
struct OptimalSolution {
  std::vector<double> values;        // V*(s); +inf where the goal is unreachable
  std::vector<NodeId> optimal_path;  // origin .. destination
  std::vector<EdgeIndex> optimal_edges;
  double optimal_cost = 0.0;
  /// False when another origin->destination path ties the optimal cost.
  bool unique = true;
};

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PathOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Label-setting search backwards from the destination over expected edge
/// costs. Among equal-cost successors the smallest edge_index wins.
OptimalSolution solve_exact(const StochasticGraph& graph);

struct PathCost {
  std::vector<NodeId> nodes;
  double cost = 0.0;
};

/// Every simple origin->destination path with its expected cost, sorted by
/// cost and then lexicographically by node sequence. Throws
/// PathOverflowError once more than max_paths paths exist.
std::vector<PathCost> enumerate_paths(const StochasticGraph& graph, std::size_t max_paths);

/// max over relevant non-goal states of |V*(s) - min_e(mu_e + V*(t))|.
double bellman_residual(const StochasticGraph& graph, const std::vector<double>& values);

}  // namespace sspucb
