#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sspucb/graph.hpp"
#include "sspucb/harness.hpp"
#include "sspucb/oracle.hpp"

// Stable text outputs. Column names and order are part of the external
// interface; tests/test_report.cpp pins them against golden strings.

namespace sspucb {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed 6-decimal rendering with '.' separator; "-0.000000" is folded to
/// "0.000000".
std::string format_fixed(double value);

inline constexpr const char* kEpisodesHeader =
    "run,episode,regret,cumulative_regret,average_regret,v_origin,steps,truncated,"
    "price_of_optimism,bellman_error";
inline constexpr const char* kEdgesHeader = "run,edge_index,source,target,samples";
inline constexpr const char* kSummaryHeader =
    "algo,runs,episodes,mean_final_avg_regret,std_final_avg_regret,mean_v_origin,"
    "mean_wall_clock_s";

/// Episodes are numbered from 1.
void write_episodes_csv(std::ostream& out, const std::vector<RunResult>& results);
void write_edges_csv(std::ostream& out, const StochasticGraph& graph,
                     const std::vector<RunResult>& results);

struct SummaryRow {
  Algorithm algorithm = Algorithm::rtdp_ucb;
  std::size_t runs = 0;
  std::size_t episodes = 0;
  AggregateResult aggregate;
};

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Fixed-width console table: Algorithm, Time (s), Est. V(origin), Avg. Regret.
void write_comparison_table(std::ostream& out, const std::vector<SummaryRow>& rows,
                            NodeId origin);

/// Sums the samples column of an edges.csv per edge_index, checking every
/// row's source/target against the graph.
std::vector<std::uint64_t> read_edge_samples(std::istream& in, const StochasticGraph& graph);

inline constexpr double kMinPenWidth = 1.0;
inline constexpr double kMaxPenWidth = 8.0;

/// penwidth = 1 + 7 * samples / max_samples (all 1 when nothing was sampled).
double pen_width(std::uint64_t samples, std::uint64_t max_samples);

/// Graphviz digraph; each edge carries penwidth, samples and mean
/// attributes, origin and destination are marked with shapes.
void write_dot(std::ostream& out, const StochasticGraph& graph,
               const std::vector<std::uint64_t>& samples);

/// "V*=<value>, path: a -> b -> c", plus one "V*(s)=..." line per node when
/// `full` is set.
void write_oracle_report(std::ostream& out, const StochasticGraph& graph,
                         const OptimalSolution& solution, bool full);

}  // namespace sspucb
