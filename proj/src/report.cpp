#include "sspucb/report.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string_view>

namespace sspucb {

std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

void write_episodes_csv(std::ostream& out, const std::vector<RunResult>& results) {
  out << kEpisodesHeader << '\n';
  for (const RunResult& r : results) {
    for (std::size_t t = 0; t < r.per_episode_regret.size(); ++t) {
      out << r.run_index << ',' << (t + 1) << ',' << format_fixed(r.per_episode_regret[t]) << ','
          << format_fixed(r.cumulative_regret[t]) << ',' << format_fixed(r.average_regret[t]) << ','
          << format_fixed(r.v_origin_series[t]) << ',' << r.steps[t] << ','
          << static_cast<int>(r.truncated[t]) << ',' << format_fixed(r.price_of_optimism[t]) << ','
          << format_fixed(r.bellman_error[t]) << '\n';
    }
  }
}

void write_edges_csv(std::ostream& out, const StochasticGraph& graph,
                     const std::vector<RunResult>& results) {
  out << kEdgesHeader << '\n';
  for (const RunResult& r : results) {
    for (const Edge& e : graph.edges()) {
      out << r.run_index << ',' << e.edge_index << ',' << e.source << ',' << e.target << ','
          << r.edge_sample_counts[e.edge_index] << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const SummaryRow& row : rows) {
    const AggregateResult& a = row.aggregate;
    out << algorithm_name(row.algorithm) << ',' << row.runs << ',' << row.episodes << ','
        << format_fixed(a.final_average_regret.mean) << ','
        << format_fixed(a.final_average_regret.std) << ',' << format_fixed(a.final_v_origin.mean)
        << ',' << format_fixed(a.wall_clock_seconds.mean) << '\n';
  }
}

void write_comparison_table(std::ostream& out, const std::vector<SummaryRow>& rows,
                            NodeId origin) {
  const std::string v_label = "Est. V(" + std::to_string(origin) + ")";
  out << std::left << std::setw(16) << "Algorithm" << std::right << std::setw(14) << "Time (s)"
      << std::setw(16) << v_label << std::setw(14) << "Avg. Regret" << '\n';
  for (const SummaryRow& row : rows) {
    const AggregateResult& a = row.aggregate;
    out << std::left << std::setw(16) << algorithm_name(row.algorithm) << std::right
        << std::setw(14) << format_fixed(a.wall_clock_seconds.mean) << std::setw(16)
        << format_fixed(a.final_v_origin.mean) << std::setw(14)
        << format_fixed(a.final_average_regret.mean) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::uint64_t parse_count(const std::string& cell, std::size_t line_no) {
  if (cell.empty() || cell.find_first_not_of("0123456789") != std::string::npos) {
    throw ReportError("edges.csv line " + std::to_string(line_no) + ": expected a count, got '" +
                      cell + "'");
  }
  return std::stoull(cell);
}

}  // namespace

std::vector<std::uint64_t> read_edge_samples(std::istream& in, const StochasticGraph& graph) {
  std::string line;
  if (!std::getline(in, line)) throw ReportError("edges.csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kEdgesHeader) throw ReportError("edges.csv header mismatch: '" + line + "'");

  std::vector<std::uint64_t> samples(graph.edge_count(), 0);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 5) {
      throw ReportError("edges.csv line " + std::to_string(line_no) + ": expected 5 columns");
    }
    const auto edge = parse_count(cells[1], line_no);
    const auto source = parse_count(cells[2], line_no);
    const auto target = parse_count(cells[3], line_no);
    const auto count = parse_count(cells[4], line_no);
    if (edge >= graph.edge_count()) {
      throw ReportError("edges.csv line " + std::to_string(line_no) + ": edge " +
                        std::to_string(edge) + " not in graph");
    }
    const Edge& e = graph.edge(static_cast<EdgeIndex>(edge));
    if (e.source != source || e.target != target) {
      throw ReportError("edges.csv line " + std::to_string(line_no) + ": edge " +
                        std::to_string(edge) + " endpoints do not match graph");
    }
    samples[edge] += count;
  }
  return samples;
}

double pen_width(std::uint64_t samples, std::uint64_t max_samples) {
  if (max_samples == 0) return kMinPenWidth;
  return kMinPenWidth + (kMaxPenWidth - kMinPenWidth) * static_cast<double>(samples) /
                            static_cast<double>(max_samples);
}

void write_dot(std::ostream& out, const StochasticGraph& graph,
               const std::vector<std::uint64_t>& samples) {
  const std::uint64_t peak = samples.empty() ? 0 : *std::max_element(samples.begin(), samples.end());
  out << "digraph network {\n";
  out << "  rankdir=LR;\n";
  for (NodeId s = 0; s < graph.node_count(); ++s) {
    out << "  " << s;
    if (s == graph.origin()) {
      out << " [shape=doublecircle, label=\"" << s << " (origin)\"]";
    } else if (s == graph.destination()) {
      out << " [shape=doublecircle, label=\"" << s << " (destination)\"]";
    }
    out << ";\n";
  }
  for (const Edge& e : graph.edges()) {
    char width[32];
    std::snprintf(width, sizeof(width), "%.3f", pen_width(samples[e.edge_index], peak));
    out << "  " << e.source << " -> " << e.target << " [penwidth=" << width
        << ", samples=" << samples[e.edge_index] << ", mean=" << format_fixed(graph.means()[e.edge_index])
        << "];\n";
  }
  out << "}\n";
}

void write_oracle_report(std::ostream& out, const StochasticGraph& graph,
                         const OptimalSolution& solution, bool full) {
  out << "V*=" << format_fixed(solution.optimal_cost) << ", path: ";
  for (std::size_t i = 0; i < solution.optimal_path.size(); ++i) {
    if (i) out << " -> ";
    out << solution.optimal_path[i];
  }
  out << '\n';
  if (!full) return;
  for (NodeId s = 0; s < graph.node_count(); ++s) {
    out << "V*(" << s << ")=";
    if (std::isfinite(solution.values[s])) {
      out << format_fixed(solution.values[s]);
    } else {
      out << "inf";
    }
    out << '\n';
  }
}

}  // namespace sspucb
