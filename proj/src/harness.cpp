#include "sspucb/harness.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace sspucb {

void ExperimentConfig::validate() const {
  if (runs < 1) throw ExperimentError("runs must be at least 1");
  if (episodes < 1) throw ExperimentError("episodes must be at least 1");
  if (!(theta > 0.0)) throw ExperimentError("theta must be positive");
  if (!(exploration_coefficient >= 0.0)) {
    throw ExperimentError("exploration coefficient must be non-negative");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ExperimentError("epsilon must lie in [0, 1]");
  if (threads < 1) throw ExperimentError("threads must be at least 1");
}

LearnerConfig ExperimentConfig::learner_config() const {
  LearnerConfig lc;
  lc.algorithm = algorithm;
  lc.theta = theta;
  lc.rtdp.ucb.exploration_coefficient = exploration_coefficient;
  lc.rtdp.epsilon = epsilon;
  lc.rtdp.update_rule = update_rule;
  lc.rtdp.max_steps = max_steps;
  return lc;
}

double episode_regret(const EpisodeTrace& trace, const StochasticGraph& graph,
                      const OptimalSolution& oracle) {
  double total = 0.0;
  for (EdgeIndex e : trace.edges) total += graph.means()[e];
  return total - oracle.optimal_cost;
}

std::uint64_t derive_run_seed(std::uint64_t base_seed, std::size_t run_index) {
  std::uint64_t z = base_seed + (static_cast<std::uint64_t>(run_index) + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RunResult run_single(const ExperimentConfig& config, const StochasticGraph& graph,
                     const OptimalSolution& oracle, std::size_t run_index, std::uint64_t seed) {
  RunResult r;
  r.run_index = run_index;
  r.seed = seed;
  const std::size_t episodes = config.episodes;
  r.per_episode_regret.reserve(episodes);
  r.cumulative_regret.reserve(episodes);
  r.average_regret.reserve(episodes);
  r.v_origin_series.reserve(episodes);
  r.steps.reserve(episodes);
  r.truncated.reserve(episodes);
  r.price_of_optimism.reserve(episodes);
  r.bellman_error.reserve(episodes);

  const LearnerConfig lc = config.learner_config();
  auto learner = make_learner(lc, graph);
  SampleStream stream(seed);

  using Clock = std::chrono::steady_clock;
  Clock::duration learning{};
  double cumulative = 0.0;
  for (std::size_t t = 0; t < episodes; ++t) {
    // The diagnostic needs pre-episode statistics; snapshotting is
    // bookkeeping and stays outside the timed region.
    const LearnerState before = learner->state();
    EpisodeTrace trace;
    const auto start = Clock::now();
    try {
      trace = learner->run_episode(stream);
    } catch (const std::exception& err) {
      throw ExperimentError("run " + std::to_string(run_index) + ", episode " +
                            std::to_string(t + 1) + ": " + err.what());
    }
    learning += Clock::now() - start;

    const double regret = episode_regret(trace, graph, oracle);
    cumulative += regret;
    const RegretTerms terms =
        regret_decomposition_diagnostic(trace, before, graph, oracle, lc.rtdp.ucb);
    r.per_episode_regret.push_back(regret);
    r.cumulative_regret.push_back(cumulative);
    r.average_regret.push_back(cumulative / static_cast<double>(t + 1));
    r.v_origin_series.push_back(learner->state().V[graph.origin()]);
    r.steps.push_back(trace.steps());
    r.truncated.push_back(trace.truncated ? 1 : 0);
    r.price_of_optimism.push_back(terms.price_of_optimism);
    r.bellman_error.push_back(terms.bellman_error);
    if (trace.truncated) ++r.truncation_count;
  }
  r.edge_sample_counts = learner->state().n;
  r.wall_clock_seconds = std::chrono::duration<double>(learning).count();
  return r;
}

std::vector<RunResult> run_experiment(const ExperimentConfig& config, const StochasticGraph& graph,
                                      const OptimalSolution& oracle) {
  config.validate();
  std::vector<RunResult> results(config.runs);
  if (config.threads <= 1) {
    for (std::size_t i = 0; i < config.runs; ++i) {
      results[i] = run_single(config, graph, oracle, i, derive_run_seed(config.base_seed, i));
    }
    return results;
  }

  std::mutex mu;
  std::exception_ptr first_error;
  std::size_t failed_run = config.runs;
  std::vector<std::thread> pool;
  const std::size_t workers = std::min(config.threads, config.runs);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < config.runs; i += workers) {
        try {
          results[i] = run_single(config, graph, oracle, i, derive_run_seed(config.base_seed, i));
        } catch (...) {
          std::lock_guard lock(mu);
          // Report the lowest failing run so the error is interleaving-independent.
          if (i < failed_run) {
            failed_run = i;
            first_error = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

std::vector<RunResult> run_experiment(const ExperimentConfig& config, const StochasticGraph& graph) {
  return run_experiment(config, graph, solve_exact(graph));
}

namespace {

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

std::vector<double> mean_curve(const std::vector<RunResult>& results,
                               std::vector<double> RunResult::*series) {
  std::vector<double> out((results.front().*series).size(), 0.0);
  for (const auto& r : results) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += (r.*series)[k];
  }
  for (double& v : out) v /= static_cast<double>(results.size());
  return out;
}

}  // namespace

AggregateResult aggregate(const std::vector<RunResult>& results) {
  if (results.empty()) throw ExperimentError("aggregate needs at least one run");
  const std::size_t len = results.front().per_episode_regret.size();
  const std::size_t edges = results.front().edge_sample_counts.size();
  for (const auto& r : results) {
    if (r.per_episode_regret.size() != len || r.average_regret.size() != len ||
        r.cumulative_regret.size() != len || r.v_origin_series.size() != len ||
        r.edge_sample_counts.size() != edges) {
      throw ExperimentError("run results have mismatched lengths");
    }
  }
  if (len == 0) throw ExperimentError("run results have no episodes");

  AggregateResult agg;
  agg.runs = results.size();
  std::vector<double> final_avg, final_v, clock;
  for (const auto& r : results) {
    final_avg.push_back(r.average_regret.back());
    final_v.push_back(r.v_origin_series.back());
    clock.push_back(r.wall_clock_seconds);
  }
  agg.final_average_regret = mean_std(final_avg);
  agg.final_v_origin = mean_std(final_v);
  agg.wall_clock_seconds = mean_std(clock);
  agg.mean_regret = mean_curve(results, &RunResult::per_episode_regret);
  agg.mean_average_regret = mean_curve(results, &RunResult::average_regret);
  agg.mean_cumulative_regret = mean_curve(results, &RunResult::cumulative_regret);
  agg.mean_v_origin = mean_curve(results, &RunResult::v_origin_series);
  agg.edge_sample_counts.assign(edges, 0);
  for (const auto& r : results) {
    for (std::size_t e = 0; e < edges; ++e) agg.edge_sample_counts[e] += r.edge_sample_counts[e];
  }
  return agg;
}

}  // namespace sspucb
