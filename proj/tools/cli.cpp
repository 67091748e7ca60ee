#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "sspucb/graph.hpp"
#include "sspucb/harness.hpp"
#include "sspucb/kernels.hpp"
#include "sspucb/learner.hpp"
#include "sspucb/oracle.hpp"
#include "sspucb/report.hpp"

namespace sspucb::cli {

namespace fs = std::filesystem;

namespace {

struct SharedRunFlags {
  std::string graph;
  std::size_t runs = 100;
  std::size_t episodes = 300;
  std::uint64_t seed = 0;
  double theta = 1e-3;
  double coefficient = 2.0;
  double epsilon = 0.1;
  std::size_t max_steps = 0;
  std::string update_rule = "full-min";
  std::size_t threads = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--graph", graph, "Graph document (JSON)")->required();
    cmd->add_option("--runs", runs, "Independent runs")->check(CLI::PositiveNumber);
    cmd->add_option("--episodes", episodes, "Episodes per run")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Base seed for all randomness");
    cmd->add_option("--theta", theta, "Value-iteration convergence threshold")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--c", coefficient, "UCB exploration coefficient")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--epsilon", epsilon, "Exploration rate for rtdp-eps")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--max-steps", max_steps, "Episode step cap (0 = 10 x nodes)");
    cmd->add_option("--update-rule", update_rule, "Value update after a step")
        ->check(CLI::IsMember({"full-min", "monotone"}));
  }

  ExperimentConfig config(Algorithm algo) const {
    ExperimentConfig c;
    c.algorithm = algo;
    c.runs = runs;
    c.episodes = episodes;
    c.base_seed = seed;
    c.theta = theta;
    c.exploration_coefficient = coefficient;
    c.epsilon = epsilon;
    c.max_steps = max_steps;
    c.update_rule = update_rule == "monotone" ? UpdateRule::monotone : UpdateRule::full_min;
    c.threads = threads;
    return c;
  }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

int cmd_generate(const NetworkParams& params, const std::string& out_path, std::ostream& out) {
  const StochasticGraph graph = generate_network(params);
  write_file(out_path, dump_graph(graph));
  out << "wrote " << out_path << " (" << graph.node_count() << " nodes, " << graph.edge_count()
      << " edges)\n";
  return kExitOk;
}

int cmd_oracle(const std::string& graph_path, bool full, std::ostream& out) {
  const StochasticGraph graph = load_graph_file(graph_path);
  write_oracle_report(out, graph, solve_exact(graph), full);
  return kExitOk;
}

int cmd_run(const SharedRunFlags& flags, Algorithm algo, const fs::path& out_dir,
            std::ostream& out) {
  const StochasticGraph graph = load_graph_file(flags.graph);
  const OptimalSolution oracle = solve_exact(graph);
  const ExperimentConfig config = flags.config(algo);

  fs::create_directories(out_dir);
  const fs::path episodes_path = out_dir / "episodes.csv";
  const fs::path edges_path = out_dir / "edges.csv";
  const fs::path summary_path = out_dir / "summary.csv";
  try {
    const auto results = run_experiment(config, graph, oracle);
    std::ostringstream episodes, edges, summary;
    write_episodes_csv(episodes, results);
    write_edges_csv(edges, graph, results);
    const SummaryRow row{algo, config.runs, config.episodes, aggregate(results)};
    write_summary_csv(summary, {row});
    write_file(episodes_path, episodes.str());
    write_file(edges_path, edges.str());
    write_file(summary_path, summary.str());
    out << "V*(" << graph.origin() << ")=" << format_fixed(oracle.optimal_cost)
        << "  mean V(" << graph.origin() << ")=" << format_fixed(row.aggregate.final_v_origin.mean)
        << "  mean avg regret=" << format_fixed(row.aggregate.final_average_regret.mean) << '\n';
  } catch (...) {
    std::error_code ec;
    fs::remove(episodes_path, ec);
    fs::remove(edges_path, ec);
    fs::remove(summary_path, ec);
    throw;
  }
  return kExitOk;
}

int cmd_compare(const SharedRunFlags& flags, const fs::path& out_path, std::ostream& out) {
  const StochasticGraph graph = load_graph_file(flags.graph);
  const OptimalSolution oracle = solve_exact(graph);
  std::vector<SummaryRow> rows;
  for (Algorithm algo : {Algorithm::rtdp_standard, Algorithm::rtdp_epsilon_greedy,
                         Algorithm::vi_ucb, Algorithm::rtdp_ucb}) {
    ExperimentConfig config = flags.config(algo);
    config.threads = 1;  // serial timing mode
    rows.push_back(SummaryRow{algo, config.runs, config.episodes,
                              aggregate(run_experiment(config, graph, oracle))});
  }
  std::ostringstream summary;
  write_summary_csv(summary, rows);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  try {
    write_file(out_path, summary.str());
  } catch (...) {
    std::error_code ec;
    fs::remove(out_path, ec);
    throw;
  }
  out << "V*(" << graph.origin() << ")=" << format_fixed(oracle.optimal_cost) << '\n';
  write_comparison_table(out, rows, graph.origin());
  return kExitOk;
}

int cmd_export_dot(const std::string& graph_path, const std::string& edges_path,
                   const std::string& out_path) {
  const StochasticGraph graph = load_graph_file(graph_path);
  std::ifstream in(edges_path);
  if (!in) throw ReportError("cannot open " + edges_path);
  const auto samples = read_edge_samples(in, graph);
  std::ostringstream dot;
  write_dot(dot, graph, samples);
  write_file(out_path, dot.str());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online stochastic shortest-path learning (RTDP-UCB and baselines)", "sspucb"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Expand all help");

  NetworkParams gen;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Generate a random road network document");
  generate->add_option("--nodes", gen.nodes, "Number of intersections")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  generate->add_option("--connectivity", gen.connectivity, "Average out-degree")
      ->check(CLI::Range(1.0, 1e6));
  generate->add_option("--mean-min", gen.mean_min, "Smallest edge mean (s)")
      ->check(CLI::PositiveNumber);
  generate->add_option("--mean-max", gen.mean_max, "Largest edge mean (s)")
      ->check(CLI::PositiveNumber);
  generate->add_option("--variance", gen.variance, "Edge cost variance (s^2)")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_flag("--one-way", gen.one_way, "Orient every segment toward the destination");
  const std::map<std::string, Layout> layouts{{"scatter", Layout::scatter}, {"grid", Layout::grid}};
  generate->add_option("--layout", gen.layout, "Intersection layout (scatter or grid)")
      ->transform(CLI::CheckedTransformer(layouts, CLI::ignore_case));
  generate->add_option("--out", gen_out, "Output path")->required();

  std::string oracle_graph;
  bool oracle_full = false;
  auto* oracle = app.add_subcommand("oracle", "Report V* at the origin and the optimal path");
  oracle->add_option("--graph", oracle_graph, "Graph document")->required();
  oracle->add_flag("--full", oracle_full, "Also print V* for every node");

  SharedRunFlags run_flags;
  std::string algo_name;
  std::string out_dir;
  auto* run_cmd = app.add_subcommand("run", "Run one algorithm and write CSV results");
  run_flags.attach(run_cmd);
  run_cmd->add_option("--algo", algo_name, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"rtdp-ucb", "rtdp-standard", "rtdp-eps", "vi-ucb"}));
  run_cmd->add_option("--out-dir", out_dir, "Directory for episodes/edges/summary CSVs")->required();
  run_cmd->add_option("--threads", run_flags.threads, "Worker threads (1 = serial timing)")
      ->check(CLI::PositiveNumber);

  SharedRunFlags cmp_flags;
  std::string cmp_out;
  auto* compare = app.add_subcommand("compare", "Run all four algorithms on one graph");
  cmp_flags.attach(compare);
  compare->add_option("--out", cmp_out, "Combined summary CSV path")->required();

  std::string dot_graph, dot_edges, dot_out;
  auto* export_dot = app.add_subcommand("export-dot", "Graphviz export weighted by edge samples");
  export_dot->add_option("--graph", dot_graph, "Graph document")->required();
  export_dot->add_option("--edges", dot_edges, "edges.csv from a run")->required();
  export_dot->add_option("--out", dot_out, "Output .dot path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*generate) {
      if (gen.mean_max < gen.mean_min) {
        err << "error: --mean-max must be >= --mean-min\n";
        return kExitUsage;
      }
      return cmd_generate(gen, gen_out, out);
    }
    if (*oracle) return cmd_oracle(oracle_graph, oracle_full, out);
    if (*run_cmd) return cmd_run(run_flags, *parse_algorithm(algo_name), out_dir, out);
    if (*compare) return cmd_compare(cmp_flags, cmp_out, out);
    if (*export_dot) return cmd_export_dot(dot_graph, dot_edges, dot_out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sspucb::cli
