#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sspucb/graph.hpp"
#include "sspucb/oracle.hpp"

namespace sspucb {

enum class Algorithm { rtdp_ucb, rtdp_standard, rtdp_epsilon_greedy, vi_ucb };

/// CLI spelling: rtdp-ucb, rtdp-standard, rtdp-eps, vi-ucb.
std::string_view algorithm_name(Algorithm algo);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// How V(s) is refreshed after taking an edge out of s.
enum class UpdateRule {
  full_min,  // V(s) <- min over all outgoing a of Q(s,a)
  monotone,  // V(s) <- min(V(s), Q(s, taken a))
};

/// Finite stand-in for an infinite confidence radius on unvisited edges.
inline constexpr double kMaxRadius = 1e9;

struct UcbParams {
  double exploration_coefficient = 2.0;
  /// When set, unvisited edges get kMaxRadius; otherwise their radius is 0.
  bool unvisited_priority = true;
};

/// Per-run learner statistics. Plain data: every field is indexed by node id
/// (V, N) or by edge_index (n, cost_sum, c_hat).
struct LearnerState {
  LearnerState() = default;
  explicit LearnerState(const StochasticGraph& graph);

  std::vector<double> V;
  std::vector<std::uint64_t> N;
  std::vector<std::uint64_t> n;
  std::vector<double> cost_sum;
  std::vector<double> c_hat;

  bool operator==(const LearnerState&) const = default;
};

struct EpisodeTrace {
  std::vector<EdgeIndex> edges;
  std::vector<double> sampled_costs;
  bool truncated = false;

  std::size_t steps() const { return edges.size(); }
};

class LearnerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Q(s,a) = c_hat(s,a) + V(s').
double compute_q(const LearnerState& state, const Edge& edge);

/// sqrt(c * log N(s) / n(e)); kMaxRadius (or 0 without unvisited priority)
/// when either count is zero.
double confidence_radius(const UcbParams& params, std::uint64_t state_visits,
                         std::uint64_t edge_visits);

/// U(s,a) = Q(s,a) - rad(e).
double compute_u(const LearnerState& state, const UcbParams& params, const Edge& edge);

/// argmin_a U(s,a); ties go to the smallest edge_index.
EdgeIndex select_action_ucb(const LearnerState& state, const UcbParams& params,
                            const StochasticGraph& graph, NodeId s);

/// argmin_a Q(s,a); ties go to the smallest edge_index.
EdgeIndex select_action_greedy(const LearnerState& state, const StochasticGraph& graph, NodeId s);

/// Folds one sampled cost into the edge statistics, then refreshes
/// V(edge.source) according to `rule`. V(destination) is never touched.
void observe_and_update(LearnerState& state, const Edge& edge, double sampled_cost,
                        const StochasticGraph& graph, UpdateRule rule);

struct RtdpOptions {
  UcbParams ucb;
  double epsilon = 0.1;
  UpdateRule update_rule = UpdateRule::full_min;
  std::size_t max_steps = 0;  // L_max; 0 means 10 * |V|
};

std::size_t effective_max_steps(std::size_t requested, const StochasticGraph& graph);

/// One asynchronous episode from the origin. `algo` must be one of the
/// three RTDP variants.
EpisodeTrace run_episode_rtdp(Algorithm algo, LearnerState& state, const StochasticGraph& graph,
                              SampleStream& stream, const RtdpOptions& options);

/// Synchronous value iteration over the origin-reachable states on
/// optimistic edge costs max(0, c_hat - rad), warm-started from the values
/// passed in, until the largest per-sweep change drops below theta. Data-parallel parts go through
/// sspucb::kernels.
class OptimisticValueIteration {
 public:
  explicit OptimisticValueIteration(const StochasticGraph& graph);

  /// Fills `optimistic_cost` (by edge_index) and iterates `values` (by node
  /// id, used as the starting point) to convergence.
  /// Returns the number of sweeps. Throws LearnerError after
  /// kMaxSweeps without convergence.
  std::size_t solve(const LearnerState& state, const UcbParams& params, double theta,
                    std::vector<double>& optimistic_cost, std::vector<double>& values);

  static constexpr std::size_t kMaxSweeps = 10000;

 private:
  const StochasticGraph* graph_;
  std::vector<NodeId> sources_;            // relevant non-goal states
  std::vector<std::size_t> offsets_;       // CSR over sources_
  std::vector<EdgeIndex> edge_of_slot_;
  std::vector<std::int32_t> target_of_slot_;
  std::vector<double> visits_, scale_, slot_cost_, backups_, next_;
};

/// Value-iteration-UCB episode: solve the optimistic problem, then roll out
/// greedily on it while updating edge statistics and visit counts.
EpisodeTrace run_episode_vi_ucb(LearnerState& state, const UcbParams& params,
                                const StochasticGraph& graph, SampleStream& stream, double theta,
                                std::size_t max_steps);

struct LearnerConfig {
  Algorithm algorithm = Algorithm::rtdp_ucb;
  RtdpOptions rtdp;
  double theta = 1e-3;
};

/// Common episodic interface over the four algorithms.
class EpisodicLearner {
 public:
  virtual ~EpisodicLearner() = default;
  virtual EpisodeTrace run_episode(SampleStream& stream) = 0;
  virtual const LearnerState& state() const = 0;
  virtual Algorithm algorithm() const = 0;
};

std::unique_ptr<EpisodicLearner> make_learner(const LearnerConfig& config,
                                              const StochasticGraph& graph);

struct RegretTerms {
  double price_of_optimism = 0.0;
  double bellman_error = 0.0;
};

/// Per-episode decomposition terms, evaluated with the statistics as they
/// stood before the episode: sum of rad(e) over traversed edges and sum of
/// V(s) - V*(s) over visited non-goal states. Logging only.
RegretTerms regret_decomposition_diagnostic(const EpisodeTrace& trace,
                                            const LearnerState& state_before,
                                            const StochasticGraph& graph,
                                            const OptimalSolution& oracle,
                                            const UcbParams& params);

}  // namespace sspucb
