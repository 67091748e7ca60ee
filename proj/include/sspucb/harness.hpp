#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sspucb/graph.hpp"
#include "sspucb/learner.hpp"
#include "sspucb/oracle.hpp"

namespace sspucb {

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::rtdp_ucb;
  std::size_t runs = 100;
  std::size_t episodes = 300;
  double theta = 1e-3;
  double exploration_coefficient = 2.0;
  double epsilon = 0.1;
  std::size_t max_steps = 0;  // 0 means 10 * |V|
  std::uint64_t base_seed = 0;
  UpdateRule update_rule = UpdateRule::full_min;
  /// Worker threads for independent runs; 1 is the serial timing mode.
  std::size_t threads = 1;

  void validate() const;
  LearnerConfig learner_config() const;
};

struct EpisodeRecord {
  double regret = 0.0;
  double cumulative_regret = 0.0;
  double average_regret = 0.0;
  double v_origin = 0.0;
  std::size_t steps = 0;
  bool truncated = false;
  double price_of_optimism = 0.0;
  double bellman_error = 0.0;
};

struct RunResult {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  std::vector<double> per_episode_regret;
  std::vector<double> cumulative_regret;
  std::vector<double> average_regret;
  std::vector<double> v_origin_series;
  std::vector<std::size_t> steps;
  std::vector<std::uint8_t> truncated;
  std::vector<double> price_of_optimism;
  std::vector<double> bellman_error;
  std::vector<std::uint64_t> edge_sample_counts;
  double wall_clock_seconds = 0.0;
  std::size_t truncation_count = 0;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

struct AggregateResult {
  std::size_t runs = 0;
  MeanStd final_average_regret;
  MeanStd final_v_origin;
  MeanStd wall_clock_seconds;
  std::vector<double> mean_regret;
  std::vector<double> mean_average_regret;
  std::vector<double> mean_cumulative_regret;
  std::vector<double> mean_v_origin;
  std::vector<std::uint64_t> edge_sample_counts;  // summed over runs
};

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sum of true means along the traversed edges minus the optimal cost.
double episode_regret(const EpisodeTrace& trace, const StochasticGraph& graph,
                      const OptimalSolution& oracle);

/// Seed for run i: splitmix64(base_seed + (i + 1) * 0x9E3779B97F4A7C15).
/// This rule is part of the output contract; changing it changes every CSV.
std::uint64_t derive_run_seed(std::uint64_t base_seed, std::size_t run_index);

/// Executes one run with an explicit seed.
RunResult run_single(const ExperimentConfig& config, const StochasticGraph& graph,
                     const OptimalSolution& oracle, std::size_t run_index, std::uint64_t seed);

/// Executes config.runs independent runs, each with its own learner and
/// sample stream, ordered by run index in the result. Wall-clock covers
/// the learning loop only. With threads > 1 the per-run timings include
/// contention from sibling runs; use threads = 1 for timing comparisons.
std::vector<RunResult> run_experiment(const ExperimentConfig& config, const StochasticGraph& graph,
                                      const OptimalSolution& oracle);
std::vector<RunResult> run_experiment(const ExperimentConfig& config, const StochasticGraph& graph);

/// Element-wise means and population standard deviations over runs.
AggregateResult aggregate(const std::vector<RunResult>& results);

}  // namespace sspucb
