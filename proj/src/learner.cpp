#include "sspucb/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sspucb/kernels.hpp"

namespace sspucb {

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::rtdp_ucb: return "rtdp-ucb";
    case Algorithm::rtdp_standard: return "rtdp-standard";
    case Algorithm::rtdp_epsilon_greedy: return "rtdp-eps";
    case Algorithm::vi_ucb: return "vi-ucb";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::rtdp_ucb, Algorithm::rtdp_standard,
                      Algorithm::rtdp_epsilon_greedy, Algorithm::vi_ucb}) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

LearnerState::LearnerState(const StochasticGraph& graph)
    : V(graph.node_count(), 0.0),
      N(graph.node_count(), 0),
      n(graph.edge_count(), 0),
      cost_sum(graph.edge_count(), 0.0),
      c_hat(graph.edge_count(), 0.0) {}

double compute_q(const LearnerState& state, const Edge& edge) {
  return state.c_hat[edge.edge_index] + state.V[edge.target];
}

double confidence_radius(const UcbParams& params, std::uint64_t state_visits,
                         std::uint64_t edge_visits) {
  if (state_visits == 0 || edge_visits == 0) {
    return params.unvisited_priority ? kMaxRadius : 0.0;
  }
  const double scale = params.exploration_coefficient * std::log(static_cast<double>(state_visits));
  return std::sqrt(scale / static_cast<double>(edge_visits));
}

double compute_u(const LearnerState& state, const UcbParams& params, const Edge& edge) {
  return compute_q(state, edge) -
         confidence_radius(params, state.N[edge.source], state.n[edge.edge_index]);
}

namespace {

template <typename Score>
EdgeIndex argmin_outgoing(const StochasticGraph& graph, NodeId s, Score&& score) {
  const auto out = graph.outgoing(s);
  if (out.empty()) {
    throw LearnerError("dead-end state " + std::to_string(s) + " has no outgoing edges");
  }
  EdgeIndex best = out.front();
  double best_score = score(graph.edge(best));
  for (EdgeIndex e : out.subspan(1)) {
    const double v = score(graph.edge(e));
    if (v < best_score) {
      best_score = v;
      best = e;
    }
  }
  return best;
}

}  // namespace

EdgeIndex select_action_ucb(const LearnerState& state, const UcbParams& params,
                            const StochasticGraph& graph, NodeId s) {
  return argmin_outgoing(graph, s, [&](const Edge& e) { return compute_u(state, params, e); });
}

EdgeIndex select_action_greedy(const LearnerState& state, const StochasticGraph& graph, NodeId s) {
  return argmin_outgoing(graph, s, [&](const Edge& e) { return compute_q(state, e); });
}

void observe_and_update(LearnerState& state, const Edge& edge, double sampled_cost,
                        const StochasticGraph& graph, UpdateRule rule) {
  const EdgeIndex e = edge.edge_index;
  state.n[e] += 1;
  state.cost_sum[e] += sampled_cost;
  state.c_hat[e] = state.cost_sum[e] / static_cast<double>(state.n[e]);

  const NodeId s = edge.source;
  if (s == graph.destination()) return;
  if (rule == UpdateRule::full_min) {
    double best = std::numeric_limits<double>::infinity();
    for (EdgeIndex a : graph.outgoing(s)) best = std::min(best, compute_q(state, graph.edge(a)));
    state.V[s] = best;
  } else {
    state.V[s] = std::min(state.V[s], compute_q(state, edge));
  }
}

std::size_t effective_max_steps(std::size_t requested, const StochasticGraph& graph) {
  return requested != 0 ? requested : 10 * graph.node_count();
}

EpisodeTrace run_episode_rtdp(Algorithm algo, LearnerState& state, const StochasticGraph& graph,
                              SampleStream& stream, const RtdpOptions& options) {
  if (algo == Algorithm::vi_ucb) {
    throw LearnerError("run_episode_rtdp called with a value-iteration learner");
  }
  const std::size_t cap = effective_max_steps(options.max_steps, graph);
  EpisodeTrace trace;
  NodeId s = graph.origin();
  while (s != graph.destination()) {
    if (trace.steps() == cap) {
      trace.truncated = true;
      break;
    }
    state.N[s] += 1;
    EdgeIndex a;
    switch (algo) {
      case Algorithm::rtdp_ucb:
        a = select_action_ucb(state, options.ucb, graph, s);
        break;
      case Algorithm::rtdp_epsilon_greedy:
        // The coin is flipped on every step, so the stream advances the
        // same way regardless of which branch is taken.
        if (stream.uniform01() < options.epsilon) {
          const auto out = graph.outgoing(s);
          if (out.empty()) throw LearnerError("dead-end state " + std::to_string(s));
          a = out[stream.uniform_index(out.size())];
        } else {
          a = select_action_greedy(state, graph, s);
        }
        break;
      default:
        a = select_action_greedy(state, graph, s);
        break;
    }
    const Edge& edge = graph.edge(a);
    const double cost = sample_cost(graph, a, stream);
    observe_and_update(state, edge, cost, graph, options.update_rule);
    trace.edges.push_back(a);
    trace.sampled_costs.push_back(cost);
    s = edge.target;
  }
  return trace;
}

OptimisticValueIteration::OptimisticValueIteration(const StochasticGraph& graph)
    : graph_(&graph) {
  offsets_.push_back(0);
  for (NodeId s : graph.relevant_nodes()) {
    if (s == graph.destination()) continue;
    sources_.push_back(s);
    for (EdgeIndex e : graph.outgoing(s)) {
      edge_of_slot_.push_back(e);
      target_of_slot_.push_back(static_cast<std::int32_t>(graph.edge(e).target));
    }
    offsets_.push_back(edge_of_slot_.size());
  }
  visits_.resize(graph.edge_count());
  scale_.resize(graph.edge_count());
  slot_cost_.resize(edge_of_slot_.size());
  backups_.resize(edge_of_slot_.size());
}

std::size_t OptimisticValueIteration::solve(const LearnerState& state, const UcbParams& params,
                                            double theta, std::vector<double>& optimistic_cost,
                                            std::vector<double>& values) {
  const StochasticGraph& g = *graph_;
  if (!(theta > 0.0)) throw LearnerError("value iteration threshold must be positive");

  for (const Edge& e : g.edges()) {
    const std::uint64_t at_source = state.N[e.source];
    visits_[e.edge_index] = static_cast<double>(state.n[e.edge_index]);
    scale_[e.edge_index] =
        at_source == 0 ? 0.0
                       : params.exploration_coefficient * std::log(static_cast<double>(at_source));
    // N(s) >= n(e) normally; keep the unvisited rule if a caller breaks it.
    if (at_source == 0) visits_[e.edge_index] = 0.0;
  }
  optimistic_cost.resize(g.edge_count());
  kernels::optimistic_costs(state.c_hat, visits_, scale_,
                            params.unvisited_priority ? kMaxRadius : 0.0, optimistic_cost);
  for (std::size_t k = 0; k < edge_of_slot_.size(); ++k) {
    slot_cost_[k] = optimistic_cost[edge_of_slot_[k]];
  }

  // Warm start from the caller's values (the previous episode's solution).
  values.resize(g.node_count(), 0.0);
  values[g.destination()] = 0.0;
  next_ = values;
  for (std::size_t sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    kernels::edge_backups(slot_cost_, target_of_slot_, values, backups_);
    double delta = 0.0;
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      const auto first = backups_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
      const auto last = backups_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
      const double v = *std::min_element(first, last);
      delta = std::max(delta, std::abs(v - values[sources_[i]]));
      next_[sources_[i]] = v;
    }
    values.swap(next_);
    if (delta < theta) return sweep;
    if (sweep == kMaxSweeps) {
      throw LearnerError("value iteration did not converge in " + std::to_string(kMaxSweeps) +
                         " sweeps (residual " + std::to_string(delta) + ")");
    }
    next_ = values;
  }
  return kMaxSweeps;
}

namespace {

EpisodeTrace optimistic_rollout(LearnerState& state, const StochasticGraph& graph,
                                SampleStream& stream, const std::vector<double>& optimistic_cost,
                                std::size_t max_steps) {
  const std::size_t cap = effective_max_steps(max_steps, graph);
  EpisodeTrace trace;
  NodeId s = graph.origin();
  while (s != graph.destination()) {
    if (trace.steps() == cap) {
      trace.truncated = true;
      break;
    }
    state.N[s] += 1;
    const EdgeIndex a = argmin_outgoing(graph, s, [&](const Edge& e) {
      return optimistic_cost[e.edge_index] + state.V[e.target];
    });
    const double cost = sample_cost(graph, a, stream);
    state.n[a] += 1;
    state.cost_sum[a] += cost;
    state.c_hat[a] = state.cost_sum[a] / static_cast<double>(state.n[a]);
    trace.edges.push_back(a);
    trace.sampled_costs.push_back(cost);
    s = graph.edge(a).target;
  }
  return trace;
}

}  // namespace

EpisodeTrace run_episode_vi_ucb(LearnerState& state, const UcbParams& params,
                                const StochasticGraph& graph, SampleStream& stream, double theta,
                                std::size_t max_steps) {
  OptimisticValueIteration vi(graph);
  std::vector<double> optimistic_cost;
  vi.solve(state, params, theta, optimistic_cost, state.V);
  return optimistic_rollout(state, graph, stream, optimistic_cost, max_steps);
}

namespace {

class RtdpLearner final : public EpisodicLearner {
 public:
  RtdpLearner(const LearnerConfig& config, const StochasticGraph& graph)
      : config_(config), graph_(graph), state_(graph) {}

  EpisodeTrace run_episode(SampleStream& stream) override {
    return run_episode_rtdp(config_.algorithm, state_, graph_, stream, config_.rtdp);
  }
  const LearnerState& state() const override { return state_; }
  Algorithm algorithm() const override { return config_.algorithm; }

 private:
  LearnerConfig config_;
  const StochasticGraph& graph_;
  LearnerState state_;
};

class ViUcbLearner final : public EpisodicLearner {
 public:
  ViUcbLearner(const LearnerConfig& config, const StochasticGraph& graph)
      : config_(config), graph_(graph), state_(graph), vi_(graph) {}

  EpisodeTrace run_episode(SampleStream& stream) override {
    vi_.solve(state_, config_.rtdp.ucb, config_.theta, optimistic_cost_, state_.V);
    return optimistic_rollout(state_, graph_, stream, optimistic_cost_, config_.rtdp.max_steps);
  }
  const LearnerState& state() const override { return state_; }
  Algorithm algorithm() const override { return Algorithm::vi_ucb; }

 private:
  LearnerConfig config_;
  const StochasticGraph& graph_;
  LearnerState state_;
  OptimisticValueIteration vi_;
  std::vector<double> optimistic_cost_;
};

}  // namespace

std::unique_ptr<EpisodicLearner> make_learner(const LearnerConfig& config,
                                              const StochasticGraph& graph) {
  if (config.algorithm == Algorithm::vi_ucb) return std::make_unique<ViUcbLearner>(config, graph);
  return std::make_unique<RtdpLearner>(config, graph);
}

RegretTerms regret_decomposition_diagnostic(const EpisodeTrace& trace,
                                            const LearnerState& state_before,
                                            const StochasticGraph& graph,
                                            const OptimalSolution& oracle,
                                            const UcbParams& params) {
  RegretTerms terms;
  for (EdgeIndex e : trace.edges) {
    const Edge& edge = graph.edge(e);
    terms.price_of_optimism += confidence_radius(params, state_before.N[edge.source], state_before.n[e]);
    terms.bellman_error += state_before.V[edge.source] - oracle.values[edge.source];
  }
  return terms;
}

}  // namespace sspucb
