#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "sspucb/graph.hpp"
#include "sspucb/report.hpp"
#include "support.hpp"

namespace sspucb::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sspucb_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  fs::path dir_;
};

constexpr const char* kSingleEdge = R"({"nodes": 2, "origin": 0, "destination": 1,
  "edges": [{"source": 0, "target": 1, "dist": {"kind": "gaussian", "mean": 5, "variance": 2}}]})";

TEST_F(CliTest, NoSubcommandIsUsageError) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
}

TEST_F(CliTest, HelpSucceeds) {
  const Outcome o = invoke({"--help"});
  EXPECT_EQ(o.code, kExitOk);
  EXPECT_NE(o.out.find("generate"), std::string::npos);
}

TEST_F(CliTest, GenerateWritesValidDocument) {
  const Outcome o = invoke({"generate", "--nodes", "22", "--variance", "2", "--seed", "7", "--out", path("g.json")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const StochasticGraph g = load_graph_file(path("g.json"));
  EXPECT_EQ(g.node_count(), 22u);
}

TEST_F(CliTest, GenerateIsByteIdentical) {
  for (const char* name : {"a.json", "b.json"}) {
    ASSERT_EQ(invoke({"generate", "--seed", "3", "--layout", "grid", "--one-way", "--out", path(name)}).code, kExitOk);
  }
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(CliTest, GenerateFlagErrors) {
  EXPECT_EQ(invoke({"generate", "--nodes", "1", "--out", path("g.json")}).code, kExitUsage);
  EXPECT_EQ(invoke({"generate", "--nodes", "5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"generate", "--bogus", "--out", path("g.json")}).code, kExitUsage);
  EXPECT_EQ(invoke({"generate", "--mean-min", "9", "--mean-max", "3", "--out", path("g.json")}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"generate", "--layout", "ring", "--out", path("g.json")}).code, kExitUsage);
}

TEST_F(CliTest, GenerateUnwritableOutputIsFailure) {
  EXPECT_EQ(invoke({"generate", "--out", "/nonexistent/dir/g.json"}).code, kExitFailure);
}

TEST_F(CliTest, OracleThreeNode) {
  const Outcome o = invoke({"oracle", "--graph", testing::data_path("three_node.json")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(o.out, "V*=3.000000, path: 0 -> 1 -> 2\n");
  const Outcome full = invoke({"oracle", "--graph", testing::data_path("three_node.json"), "--full"});
  EXPECT_NE(full.out.find("V*(1)=2.000000"), std::string::npos);
}

TEST_F(CliTest, OracleSingleEdge) {
  const Outcome o = invoke({"oracle", "--graph", write("one.json", kSingleEdge)});
  ASSERT_EQ(o.code, kExitOk);
  EXPECT_EQ(o.out, "V*=5.000000, path: 0 -> 1\n");
}

TEST_F(CliTest, OracleInvalidGraphIsFailure) {
  const std::string doc = R"({"nodes": 3, "origin": 0, "destination": 2,
    "edges": [{"source": 0, "target": 1, "dist": {"kind": "deterministic", "value": 1}}]})";
  const Outcome o = invoke({"oracle", "--graph", write("bad.json", doc)});
  EXPECT_EQ(o.code, kExitFailure);
  EXPECT_NE(o.err.find("unreachable"), std::string::npos);
  EXPECT_EQ(invoke({"oracle", "--graph", write("junk.json", "{not json")}).code, kExitFailure);
  EXPECT_EQ(invoke({"oracle", "--graph", path("missing.json")}).code, kExitFailure);
}

TEST_F(CliTest, RunSingleEdgeOneEpisode) {
  const Outcome o = invoke({"run", "--graph", write("one.json", kSingleEdge), "--algo", "rtdp-ucb", "--runs", "1",
                            "--episodes", "1", "--seed", "0", "--out-dir", path("out")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  std::istringstream episodes(slurp(path("out/episodes.csv")));
  std::string header, row, extra;
  std::getline(episodes, header);
  std::getline(episodes, row);
  EXPECT_EQ(header, kEpisodesHeader);
  EXPECT_EQ(row.rfind("0,1,0.000000,0.000000,0.000000,", 0), 0u) << row;
  EXPECT_FALSE(std::getline(episodes, extra));
  EXPECT_EQ(slurp(path("out/edges.csv")), std::string(kEdgesHeader) + "\n0,0,0,1,1\n");
  EXPECT_EQ(slurp(path("out/summary.csv")).rfind(std::string(kSummaryHeader) + "\nrtdp-ucb,1,1,0.000000,", 0), 0u);
}

TEST_F(CliTest, RunUsageErrors) {
  const std::string g = testing::data_path("three_node.json");
  EXPECT_EQ(invoke({"run", "--graph", g, "--algo", "a-star", "--out-dir", path("o")}).code, kExitUsage);
  EXPECT_EQ(invoke({"run", "--graph", g, "--out-dir", path("o")}).code, kExitUsage);
  EXPECT_EQ(invoke({"run", "--graph", g, "--algo", "rtdp-ucb", "--runs", "0", "--out-dir", path("o")}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"run", "--graph", g, "--algo", "rtdp-ucb", "--update-rule", "lazy", "--out-dir", path("o")}).code,
            kExitUsage);
}

TEST_F(CliTest, RunFailureRemovesPartialOutputs) {
  // Value iteration cannot converge to 1e-12 here within its sweep cap.
  const std::string doc = R"({"nodes": 3, "origin": 0, "destination": 2, "edges": [
    {"source": 0, "target": 2, "dist": {"kind": "deterministic", "value": 1000000}},
    {"source": 1, "target": 2, "dist": {"kind": "deterministic", "value": 1000000}},
    {"source": 0, "target": 1, "dist": {"kind": "deterministic", "value": 0.000001}},
    {"source": 1, "target": 0, "dist": {"kind": "deterministic", "value": 0.000001}}]})";
  fs::create_directories(path("out"));
  std::ofstream(path("out/episodes.csv")) << "stale\n";
  const Outcome o = invoke({"run", "--graph", write("trap.json", doc), "--algo", "vi-ucb", "--runs", "1",
                            "--episodes", "50", "--theta", "1e-12", "--c", "0", "--out-dir", path("out")});
  EXPECT_EQ(o.code, kExitFailure);
  EXPECT_NE(o.err.find("residual"), std::string::npos) << o.err;
  EXPECT_FALSE(fs::exists(path("out/episodes.csv")));
  EXPECT_FALSE(fs::exists(path("out/edges.csv")));
  EXPECT_FALSE(fs::exists(path("out/summary.csv")));
}

TEST_F(CliTest, RunIsByteIdenticalAcrossInvocations) {
  const std::string g = testing::data_path("example22.json");
  for (const char* out : {"a", "b"}) {
    ASSERT_EQ(invoke({"run", "--graph", g, "--algo", "rtdp-eps", "--runs", "3", "--episodes", "40", "--seed", "9",
                      "--out-dir", path(out)})
                  .code,
              kExitOk);
  }
  EXPECT_EQ(slurp(path("a/episodes.csv")), slurp(path("b/episodes.csv")));
  EXPECT_EQ(slurp(path("a/edges.csv")), slurp(path("b/edges.csv")));
}

TEST_F(CliTest, CompareSmoke) {
  const Outcome o = invoke({"compare", "--graph", testing::data_path("example22.json"), "--runs", "2",
                            "--episodes", "1", "--out", path("cmp/summary.csv")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const std::string csv = slurp(path("cmp/summary.csv"));
  for (const char* algo : {"rtdp-standard", "rtdp-eps", "vi-ucb", "rtdp-ucb"}) {
    EXPECT_NE(csv.find(std::string("\n") + algo + ",2,1,"), std::string::npos) << algo;
  }
  EXPECT_EQ(csv.find("nan"), std::string::npos);
  EXPECT_EQ(csv.find("inf"), std::string::npos);
  EXPECT_NE(o.out.find("Avg. Regret"), std::string::npos);
  EXPECT_NE(o.out.find("V*(0)=40.680000"), std::string::npos);
}

TEST_F(CliTest, CompareFullProtocolRanksUcbFirst) {
  // 100 runs x 300 episodes, theta 1e-3, c = 2 on the committed example.
  const Outcome o = invoke({"compare", "--graph", testing::data_path("example22.json"), "--seed", "0", "--out",
                            path("summary.csv")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  std::istringstream csv(slurp(path("summary.csv")));
  std::string line;
  std::getline(csv, line);
  std::map<std::string, std::pair<double, double>> rows;  // algo -> (avg regret, V(origin))
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 7u);
    rows[cells[0]] = {std::stod(cells[3]), std::stod(cells[5])};
  }
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& [algo, row] : rows) {
    if (algo != "rtdp-ucb") EXPECT_LT(rows["rtdp-ucb"].first, row.first) << algo;
  }
  const double vstar = 40.68;
  EXPECT_LT(std::abs(rows["vi-ucb"].second - vstar), 0.05 * vstar);
}

TEST_F(CliTest, ExportDotFromRun) {
  const std::string g = testing::data_path("example22.json");
  ASSERT_EQ(invoke({"run", "--graph", g, "--algo", "rtdp-ucb", "--runs", "5", "--episodes", "300", "--out-dir",
                    path("out")})
                .code,
            kExitOk);
  ASSERT_EQ(invoke({"export-dot", "--graph", g, "--edges", path("out/edges.csv"), "--out", path("net.dot")}).code,
            kExitOk);
  const std::string dot = slurp(path("net.dot"));
  EXPECT_EQ(dot.rfind("digraph network {", 0), 0u);

  // After convergence the optimal route carries the heaviest edges.
  const StochasticGraph graph = load_graph_file(g);
  const OptimalSolution sol = solve_exact(graph);
  std::ifstream edges(path("out/edges.csv"));
  const auto samples = read_edge_samples(edges, graph);
  std::uint64_t off_path_max = 0;
  for (std::size_t e = 0; e < samples.size(); ++e) {
    if (std::find(sol.optimal_edges.begin(), sol.optimal_edges.end(), e) == sol.optimal_edges.end()) {
      off_path_max = std::max(off_path_max, samples[e]);
    }
  }
  for (EdgeIndex e : sol.optimal_edges) EXPECT_GT(samples[e], off_path_max);
  EXPECT_NE(dot.find("penwidth=8.000"), std::string::npos);
}

TEST_F(CliTest, ExportDotMismatchIsFailure) {
  const std::string edges = write("edges.csv", "run,edge_index,source,target,samples\n0,0,1,0,4\n");
  const Outcome o = invoke({"export-dot", "--graph", testing::data_path("three_node.json"), "--edges", edges,
                            "--out", path("x.dot")});
  EXPECT_EQ(o.code, kExitFailure);
}

TEST_F(CliTest, GeneratedDocumentsRoundTripThroughOracle) {
  for (int seed = 0; seed < 100; ++seed) {
    const std::string out = path("g.json");
    std::vector<std::string> args{"generate", "--nodes", std::to_string(5 + seed % 30), "--seed",
                                  std::to_string(seed), "--out", out};
    if (seed % 2) {
      args.push_back("--layout");
      args.push_back("grid");
    }
    if (seed % 3 == 0) args.push_back("--one-way");
    ASSERT_EQ(invoke(args).code, kExitOk) << "seed " << seed;
    ASSERT_EQ(invoke({"oracle", "--graph", out}).code, kExitOk) << "seed " << seed;
  }
}

}  // namespace
}  // namespace sspucb::cli
