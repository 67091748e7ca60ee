#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sspucb {

using NodeId = std::uint32_t;
using EdgeIndex = std::uint32_t;

/// Normally distributed travel time. Variance is in time-units squared.
struct Gaussian {
  double mean = 0.0;
  double variance = 0.0;
  bool operator==(const Gaussian&) const = default;
};

/// Fixed travel time; used for tests and for noise-free reference networks.
struct Deterministic {
  double value = 0.0;
  bool operator==(const Deterministic&) const = default;
};

using CostDistribution = std::variant<Gaussian, Deterministic>;

/// Expected value of a cost distribution (the true mean used by the oracle
/// and by regret accounting).
double expected_cost(const CostDistribution& dist);

struct Edge {
  NodeId source = 0;
  NodeId target = 0;
  CostDistribution distribution;
  EdgeIndex edge_index = 0;
  bool operator==(const Edge&) const = default;
};

class GraphParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GraphValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Directed road network with per-edge stochastic costs.
///
/// Immutable once constructed. The constructor validates every structural
/// invariant and throws GraphValidationError naming the first one violated:
///  - node ids in range, origin != destination
///  - no self-loops, positive Gaussian means, non-negative variances/values
///  - the destination is reachable from every node reachable from the origin
///
/// Edges are stored in edge_index order; outgoing adjacency lists are sorted
/// by edge_index so every iteration over A(s) is deterministic.
class StochasticGraph {
 public:
  StochasticGraph(std::size_t node_count, NodeId origin, NodeId destination,
                  std::vector<Edge> edges);

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  NodeId origin() const { return origin_; }
  NodeId destination() const { return destination_; }

  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const EdgeIndex> outgoing(NodeId s) const {
    return {adjacency_.data() + offsets_[s], adjacency_.data() + offsets_[s + 1]};
  }
  std::size_t max_out_degree() const { return max_out_degree_; }

  /// Dense per-edge true means, indexed by edge_index.
  std::span<const double> means() const { return means_; }

  /// Nodes reachable from the origin, ascending.
  std::span<const NodeId> relevant_nodes() const { return relevant_; }
  bool is_relevant(NodeId s) const { return relevant_mask_[s] != 0; }

  bool operator==(const StochasticGraph& other) const {
    return node_count_ == other.node_count_ && origin_ == other.origin_ &&
           destination_ == other.destination_ && edges_ == other.edges_;
  }

 private:
  std::size_t node_count_;
  NodeId origin_;
  NodeId destination_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<EdgeIndex> adjacency_;
  std::vector<double> means_;
  std::vector<NodeId> relevant_;
  std::vector<std::uint8_t> relevant_mask_;
  std::size_t max_out_degree_ = 0;
};

/// Seeded source of all randomness in one run (cost draws and exploration
/// coin flips). Same seed and same call sequence yield the same samples.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  double standard_normal() { return normal_(engine_); }
  double uniform01() { return uniform_(engine_); }
  /// Uniform integer in [0, bound).
  std::size_t uniform_index(std::size_t bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Draws one realization of the edge's cost, clamped at zero.
double sample_cost(const StochasticGraph& graph, EdgeIndex edge, SampleStream& stream);

/// Parses and validates a JSON graph document.
StochasticGraph load_graph(std::string_view document);
StochasticGraph load_graph_file(const std::string& path);

/// Serializes to the JSON graph document format (2-space indent, stable
/// field order, trailing newline).
std::string dump_graph(const StochasticGraph& graph);

enum class Layout {
  scatter,  // uniform random points
  grid,     // jittered city blocks with 4-neighbour streets
};

struct NetworkParams {
  std::size_t nodes = 22;
  double connectivity = 3.0;  // target average out-degree
  double mean_min = 5.0;
  double mean_max = 30.0;
  double variance = 2.0;
  std::uint64_t seed = 7;
  Layout layout = Layout::scatter;
  /// Orient every segment toward the destination (acyclic network) instead
  /// of emitting both directions.
  bool one_way = false;
};

/// Generates a road-like network.
///
/// Intersections are either scattered uniformly on the unit square or placed
/// on jittered city blocks (ceil(sqrt(nodes)) columns, surplus blocks
/// dropped at random) where neighbouring blocks are always joined by a
/// street. Further segments are added shortest first until about
/// `connectivity * nodes` directed edges exist. Segments are two-way unless
/// `one_way` is set, in which case each runs toward the destination.
///
/// Edge means grow linearly with segment length across
/// [mean_min, mean_max], scaled by a +-10% factor per direction. Origin is
/// node 0 and destination node nodes-1; both sit a quarter of the way in from
/// opposite corners. Nodes that cannot reach the destination are linked to
/// the nearest node that can; generation fails after a bounded number of
/// repair rounds. Output is a pure function of the parameters.
StochasticGraph generate_network(const NetworkParams& params);

}  // namespace sspucb
