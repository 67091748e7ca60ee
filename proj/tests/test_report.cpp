#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "sspucb/report.hpp"
#include "support.hpp"

namespace sspucb {
namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(SSPUCB_TEST_DIR) + "/golden/" + name, std::ios::binary);
  EXPECT_TRUE(in) << name;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Two hand-built runs on the three-node graph (edges 0->1, 1->2, 0->2).
std::vector<RunResult> sample_runs() {
  RunResult a;
  a.run_index = 0;
  a.per_episode_regret = {2.0, 0.0};
  a.cumulative_regret = {2.0, 2.0};
  a.average_regret = {2.0, 1.0};
  a.v_origin_series = {10.25, 11.0};
  a.steps = {3, 2};
  a.truncated = {0, 1};
  a.price_of_optimism = {1e9, 0.5};
  a.bellman_error = {-12.5, -1e-9};
  a.edge_sample_counts = {2, 2, 1};
  a.wall_clock_seconds = 0.75;

  RunResult b;
  b.run_index = 1;
  b.per_episode_regret = {1.0, -0.5};
  b.cumulative_regret = {1.0, 0.5};
  b.average_regret = {1.0, 0.25};
  b.v_origin_series = {9.0, 9.5};
  b.steps = {2, 1};
  b.truncated = {0, 0};
  b.price_of_optimism = {0.1234567, 0.0};
  b.bellman_error = {-3.0, 0.0};
  b.edge_sample_counts = {1, 1, 1};
  b.wall_clock_seconds = 0.0;
  return {a, b};
}

TEST(FormatFixed, SixDecimals) {
  EXPECT_EQ(format_fixed(3.0), "3.000000");
  EXPECT_EQ(format_fixed(0.1234567), "0.123457");
  EXPECT_EQ(format_fixed(-2.5), "-2.500000");
  EXPECT_EQ(format_fixed(-1e-12), "0.000000");
  EXPECT_EQ(format_fixed(-0.0), "0.000000");
}

TEST(Csv, EpisodesGolden) {
  std::ostringstream out;
  write_episodes_csv(out, sample_runs());
  EXPECT_EQ(out.str(), golden("episodes.csv"));
}

TEST(Csv, EdgesGolden) {
  std::ostringstream out;
  write_edges_csv(out, testing::three_node(), sample_runs());
  EXPECT_EQ(out.str(), golden("edges.csv"));
}

TEST(Csv, SummaryGolden) {
  const AggregateResult agg = aggregate(sample_runs());
  std::ostringstream out;
  write_summary_csv(out, {{Algorithm::rtdp_ucb, 2, 2, agg}, {Algorithm::vi_ucb, 2, 2, agg}});
  EXPECT_EQ(out.str(), golden("summary.csv"));
}

TEST(Csv, HeadersAreFixed) {
  EXPECT_STREQ(kEpisodesHeader,
               "run,episode,regret,cumulative_regret,average_regret,v_origin,steps,truncated,"
               "price_of_optimism,bellman_error");
  EXPECT_STREQ(kEdgesHeader, "run,edge_index,source,target,samples");
  EXPECT_STREQ(kSummaryHeader,
               "algo,runs,episodes,mean_final_avg_regret,std_final_avg_regret,mean_v_origin,"
               "mean_wall_clock_s");
}

TEST(ComparisonTable, Columns) {
  const AggregateResult agg = aggregate(sample_runs());
  std::ostringstream out;
  write_comparison_table(out, {{Algorithm::rtdp_standard, 2, 2, agg}, {Algorithm::rtdp_ucb, 2, 2, agg}}, 0);
  const std::string text = out.str();
  std::istringstream lines(text);
  std::string header, first, second, extra;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_FALSE(std::getline(lines, extra));
  EXPECT_EQ(header.find("Algorithm"), 0u);
  EXPECT_NE(header.find("Time (s)"), std::string::npos);
  EXPECT_NE(header.find("Est. V(0)"), std::string::npos);
  EXPECT_NE(header.find("Avg. Regret"), std::string::npos);
  EXPECT_EQ(first.find("rtdp-standard"), 0u);
  EXPECT_NE(second.find("0.375000"), std::string::npos);
  EXPECT_NE(second.find("10.250000"), std::string::npos);
  EXPECT_NE(second.find("0.625000"), std::string::npos);
}

TEST(EdgeSamples, ReadSumsAcrossRuns) {
  const StochasticGraph g = testing::three_node();
  std::istringstream in(golden("edges.csv"));
  EXPECT_EQ(read_edge_samples(in, g), (std::vector<std::uint64_t>{3, 3, 2}));
}

TEST(EdgeSamples, MismatchesRejected) {
  const StochasticGraph g = testing::three_node();
  const char* bad[] = {
      "",
      "run,edge,source,target,samples\n",
      "run,edge_index,source,target,samples\n0,0,0,1\n",
      "run,edge_index,source,target,samples\n0,9,0,1,3\n",
      "run,edge_index,source,target,samples\n0,0,1,0,3\n",
      "run,edge_index,source,target,samples\n0,0,0,1,x\n",
  };
  for (const char* doc : bad) {
    std::istringstream in(doc);
    EXPECT_THROW(read_edge_samples(in, g), ReportError) << doc;
  }
}

TEST(Dot, PenWidthScaling) {
  EXPECT_EQ(pen_width(0, 0), kMinPenWidth);
  EXPECT_EQ(pen_width(0, 10), kMinPenWidth);
  EXPECT_EQ(pen_width(10, 10), kMaxPenWidth);
  EXPECT_EQ(pen_width(5, 10), 4.5);
}

TEST(Dot, Golden) {
  std::ostringstream out;
  write_dot(out, testing::three_node(), {4, 2, 0});
  EXPECT_EQ(out.str(), golden("network.dot"));
}

TEST(Dot, SingleEdgeGetsMaxWidth) {
  std::ostringstream out;
  write_dot(out, testing::single_edge(), {10});
  EXPECT_NE(out.str().find("0 -> 1 [penwidth=8.000, samples=10"), std::string::npos);
}

TEST(OracleReport, ThreeNode) {
  const StochasticGraph g = testing::three_node();
  std::ostringstream brief, full;
  write_oracle_report(brief, g, solve_exact(g), false);
  EXPECT_EQ(brief.str(), "V*=3.000000, path: 0 -> 1 -> 2\n");
  write_oracle_report(full, g, solve_exact(g), true);
  EXPECT_EQ(full.str(),
            "V*=3.000000, path: 0 -> 1 -> 2\nV*(0)=3.000000\nV*(1)=2.000000\nV*(2)=0.000000\n");
}

}  // namespace
}  // namespace sspucb
