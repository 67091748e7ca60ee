#include "sspucb/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace sspucb {

namespace {

using json = nlohmann::json;

// Nodes reachable from start over the given adjacency lists.
std::vector<std::uint8_t> reach_from(NodeId start, std::size_t node_count,
                                     const std::vector<std::vector<NodeId>>& next) {
  std::vector<std::uint8_t> seen(node_count, 0);
  std::vector<NodeId> frontier{start};
  seen[start] = 1;
  while (!frontier.empty()) {
    const NodeId s = frontier.back();
    frontier.pop_back();
    for (NodeId t : next[s]) {
      if (!seen[t]) {
        seen[t] = 1;
        frontier.push_back(t);
      }
    }
  }
  return seen;
}

void validate_distribution(const CostDistribution& dist, EdgeIndex e) {
  if (const auto* g = std::get_if<Gaussian>(&dist)) {
    if (!std::isfinite(g->mean) || !(g->mean > 0.0)) {
      throw GraphValidationError("edge " + std::to_string(e) +
                                 ": Gaussian mean must be positive");
    }
    if (!std::isfinite(g->variance) || g->variance < 0.0) {
      throw GraphValidationError("edge " + std::to_string(e) +
                                 ": variance must be non-negative");
    }
  } else {
    const auto& d = std::get<Deterministic>(dist);
    if (!std::isfinite(d.value) || d.value < 0.0) {
      throw GraphValidationError("edge " + std::to_string(e) +
                                 ": deterministic value must be non-negative");
    }
  }
}

}  // namespace

double expected_cost(const CostDistribution& dist) {
  if (const auto* g = std::get_if<Gaussian>(&dist)) return g->mean;
  return std::get<Deterministic>(dist).value;
}

StochasticGraph::StochasticGraph(std::size_t node_count, NodeId origin, NodeId destination,
                                 std::vector<Edge> edges)
    : node_count_(node_count), origin_(origin), destination_(destination), edges_(std::move(edges)) {
  if (node_count_ < 2) throw GraphValidationError("graph needs at least 2 nodes");
  if (node_count_ > std::numeric_limits<NodeId>::max()) {
    throw GraphValidationError("node count exceeds index range");
  }
  if (origin_ >= node_count_) throw GraphValidationError("origin out of range");
  if (destination_ >= node_count_) throw GraphValidationError("destination out of range");
  if (origin_ == destination_) throw GraphValidationError("origin equals destination");

  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.edge_index < b.edge_index; });
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.edge_index != i) {
      throw GraphValidationError("edge indices must be unique and dense in [0, |E|)");
    }
    if (e.source >= node_count_ || e.target >= node_count_) {
      throw GraphValidationError("edge " + std::to_string(i) + ": endpoint out of range");
    }
    if (e.source == e.target) {
      throw GraphValidationError("edge " + std::to_string(i) + ": self-loop");
    }
    validate_distribution(e.distribution, e.edge_index);
  }

  offsets_.assign(node_count_ + 1, 0);
  for (const Edge& e : edges_) ++offsets_[e.source + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(edges_.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Edges are already in edge_index order, so each bucket comes out sorted.
  for (const Edge& e : edges_) adjacency_[cursor[e.source]++] = e.edge_index;
  for (std::size_t s = 0; s < node_count_; ++s) {
    max_out_degree_ = std::max(max_out_degree_, offsets_[s + 1] - offsets_[s]);
  }

  means_.reserve(edges_.size());
  for (const Edge& e : edges_) means_.push_back(expected_cost(e.distribution));

  std::vector<std::vector<NodeId>> forward(node_count_), backward(node_count_);
  for (const Edge& e : edges_) {
    // The destination is absorbing; its outgoing edges are never taken.
    if (e.source == destination_) continue;
    forward[e.source].push_back(e.target);
    backward[e.target].push_back(e.source);
  }
  relevant_mask_ = reach_from(origin_, node_count_, forward);
  const auto reaches_goal = reach_from(destination_, node_count_, backward);
  if (!relevant_mask_[destination_]) {
    throw GraphValidationError("destination unreachable from origin");
  }
  for (NodeId s = 0; s < node_count_; ++s) {
    if (relevant_mask_[s]) {
      if (!reaches_goal[s]) {
        throw GraphValidationError("destination unreachable from node " + std::to_string(s) +
                                   " (reachable from origin)");
      }
      relevant_.push_back(s);
    }
  }
}

std::size_t SampleStream::uniform_index(std::size_t bound) {
  std::uniform_int_distribution<std::size_t> pick(0, bound - 1);
  return pick(engine_);
}

double sample_cost(const StochasticGraph& graph, EdgeIndex edge, SampleStream& stream) {
  const auto& dist = graph.edge(edge).distribution;
  if (const auto* g = std::get_if<Gaussian>(&dist)) {
    const double draw = g->mean + std::sqrt(g->variance) * stream.standard_normal();
    return std::max(0.0, draw);
  }
  return std::get<Deterministic>(dist).value;
}

StochasticGraph load_graph(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& err) {
    throw GraphParseError(std::string("malformed graph document: ") + err.what());
  }

  auto require = [](const json& obj, const char* key, const std::string& where) -> const json& {
    if (!obj.is_object() || !obj.contains(key)) {
      throw GraphParseError(where + ": missing field '" + key + "'");
    }
    return obj.at(key);
  };
  auto as_index = [](const json& v, const std::string& what) -> std::uint64_t {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw GraphParseError(what + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  };
  auto as_number = [](const json& v, const std::string& what) -> double {
    if (!v.is_number()) throw GraphParseError(what + " must be a number");
    return v.get<double>();
  };

  if (!doc.is_object()) throw GraphParseError("graph document must be an object");
  const auto nodes = as_index(require(doc, "nodes", "graph"), "nodes");
  const auto origin = as_index(require(doc, "origin", "graph"), "origin");
  const auto destination = as_index(require(doc, "destination", "graph"), "destination");
  const json& edge_list = require(doc, "edges", "graph");
  if (!edge_list.is_array()) throw GraphParseError("edges must be a list");
  if (nodes > std::numeric_limits<NodeId>::max() || origin > nodes || destination > nodes) {
    throw GraphValidationError("node index out of range");
  }

  std::vector<Edge> edges;
  edges.reserve(edge_list.size());
  for (std::size_t i = 0; i < edge_list.size(); ++i) {
    const std::string where = "edge " + std::to_string(i);
    const json& rec = edge_list[i];
    const auto source = as_index(require(rec, "source", where), where + " source");
    const auto target = as_index(require(rec, "target", where), where + " target");
    if (source >= nodes || target >= nodes) {
      throw GraphValidationError(where + ": endpoint out of range");
    }
    const json& dist = require(rec, "dist", where);
    const json& kind = require(dist, "kind", where + " dist");
    if (!kind.is_string()) throw GraphParseError(where + ": dist kind must be a string");
    CostDistribution cd;
    if (kind == "gaussian") {
      cd = Gaussian{as_number(require(dist, "mean", where + " dist"), where + " mean"),
                    as_number(require(dist, "variance", where + " dist"), where + " variance")};
    } else if (kind == "deterministic") {
      cd = Deterministic{as_number(require(dist, "value", where + " dist"), where + " value")};
    } else {
      throw GraphParseError(where + ": unknown dist kind '" + kind.get<std::string>() + "'");
    }
    edges.push_back(Edge{static_cast<NodeId>(source), static_cast<NodeId>(target), cd,
                         static_cast<EdgeIndex>(i)});
  }
  return StochasticGraph(nodes, static_cast<NodeId>(origin), static_cast<NodeId>(destination),
                         std::move(edges));
}

StochasticGraph load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphParseError("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str());
}

std::string dump_graph(const StochasticGraph& graph) {
  // ordered_json keeps the schema's field order in the output.
  nlohmann::ordered_json doc;
  doc["nodes"] = graph.node_count();
  doc["origin"] = graph.origin();
  doc["destination"] = graph.destination();
  doc["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : graph.edges()) {
    nlohmann::ordered_json rec;
    rec["source"] = e.source;
    rec["target"] = e.target;
    nlohmann::ordered_json dist;
    if (const auto* g = std::get_if<Gaussian>(&e.distribution)) {
      dist["kind"] = "gaussian";
      dist["mean"] = g->mean;
      dist["variance"] = g->variance;
    } else {
      dist["kind"] = "deterministic";
      dist["value"] = std::get<Deterministic>(e.distribution).value;
    }
    rec["dist"] = std::move(dist);
    doc["edges"].push_back(std::move(rec));
  }
  return doc.dump(2) + "\n";
}

StochasticGraph generate_network(const NetworkParams& p) {
  if (p.nodes < 2) throw GenerationError("nodes must be at least 2");
  if (!(p.connectivity >= 1.0)) throw GenerationError("connectivity must be at least 1");
  if (!(p.mean_min > 0.0) || !(p.mean_max >= p.mean_min)) {
    throw GenerationError("mean range must be positive and ordered");
  }
  if (!(p.variance >= 0.0)) throw GenerationError("variance must be non-negative");

  const std::size_t n = p.nodes;
  const NodeId origin = 0;
  const NodeId destination = static_cast<NodeId>(n - 1);
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  struct Point {
    double x, y;
  };
  struct Segment {
    double length;
    NodeId a, b;
  };
  std::vector<Point> pos(n);
  std::vector<Segment> streets;  // always present (grid layout only)

  if (p.layout == Layout::grid) {
    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const std::size_t rows = (n + cols - 1) / cols;
    using Cell = std::pair<std::size_t, std::size_t>;
    const Cell from{cols / 4, rows / 4};
    const Cell to{cols - 1 - cols / 4, rows - 1 - rows / 4};
    std::vector<Cell> spare;
    for (std::size_t y = 0; y < rows; ++y)
      for (std::size_t x = 0; x < cols; ++x)
        if (Cell{x, y} != from && Cell{x, y} != to) spare.emplace_back(x, y);
    std::shuffle(spare.begin(), spare.end(), rng);
    spare.resize(n - 2);
    std::sort(spare.begin(), spare.end(),
              [](const Cell& a, const Cell& b) { return std::pair{a.second, a.first} < std::pair{b.second, b.first}; });

    std::vector<Cell> cell_of(n);
    cell_of[origin] = from;
    cell_of[destination] = to;
    for (std::size_t k = 0; k < spare.size(); ++k) cell_of[k + 1] = spare[k];
    for (NodeId v = 0; v < n; ++v) {
      pos[v] = {static_cast<double>(cell_of[v].first) + 0.3 * unit(rng) - 0.15,
                static_cast<double>(cell_of[v].second) + 0.3 * unit(rng) - 0.15};
    }
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        const auto dx = std::max(cell_of[a].first, cell_of[b].first) - std::min(cell_of[a].first, cell_of[b].first);
        const auto dy = std::max(cell_of[a].second, cell_of[b].second) - std::min(cell_of[a].second, cell_of[b].second);
        if (dx + dy == 1) streets.push_back({std::hypot(pos[a].x - pos[b].x, pos[a].y - pos[b].y), a, b});
      }
    }
  } else {
    for (auto& pt : pos) pt = {unit(rng), unit(rng)};
    // The trip crosses the middle of the area rather than corner to corner.
    pos[origin] = {0.2 + 0.1 * unit(rng), 0.2 + 0.1 * unit(rng)};
    pos[destination] = {0.7 + 0.1 * unit(rng), 0.7 + 0.1 * unit(rng)};
  }
  auto dist = [&](NodeId a, NodeId b) { return std::hypot(pos[a].x - pos[b].x, pos[a].y - pos[b].y); };

  // Extra segments, shortest first, until the directed edge budget
  // (connectivity * nodes) is spent. A node stops accepting extras once its
  // degree exceeds ceil(connectivity) so no hubs form.
  std::vector<Segment> candidates;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) candidates.push_back({dist(a, b), a, b});
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Segment& x, const Segment& y) { return x.length < y.length; });

  const auto budget = static_cast<std::size_t>(std::llround(p.connectivity * static_cast<double>(n)));
  const auto degree_cap = static_cast<std::size_t>(std::ceil(p.connectivity)) + 1;
  const std::size_t per_segment = p.one_way ? 1 : 2;
  std::vector<std::size_t> degree(n, 0);
  std::vector<Segment> roads = streets;
  std::vector<std::uint8_t> taken(n * n, 0);
  for (const Segment& r : roads) {
    ++degree[r.a];
    ++degree[r.b];
    taken[r.a * n + r.b] = 1;
  }
  std::size_t directed = roads.size() * per_segment;
  for (const Segment& c : candidates) {
    if (directed >= budget) break;
    if (taken[c.a * n + c.b]) continue;
    if (degree[c.a] >= degree_cap || degree[c.b] >= degree_cap) continue;
    roads.push_back(c);
    ++degree[c.a];
    ++degree[c.b];
    directed += per_segment;
  }

  // One-way networks run downhill in distance-to-destination; ties by node
  // id keep the orientation acyclic.
  auto downhill = [&](NodeId a, NodeId b) {
    const double da = dist(a, destination), db = dist(b, destination);
    return da > db || (da == db && a < b);
  };
  struct Link {
    NodeId from, to;
    double length;
  };
  std::vector<Link> links;
  for (const Segment& r : roads) {
    if (!p.one_way || downhill(r.a, r.b)) links.push_back({r.a, r.b, r.length});
    if (!p.one_way || downhill(r.b, r.a)) links.push_back({r.b, r.a, r.length});
  }

  // Repair: link every origin-reachable node that cannot reach the goal to
  // the nearest node that can (downhill only for one-way networks).
  constexpr int kMaxRepairRounds = 256;
  for (int round = 0;; ++round) {
    std::vector<std::vector<NodeId>> forward(n), backward(n);
    for (const Link& l : links) {
      if (l.from == destination) continue;
      forward[l.from].push_back(l.to);
      backward[l.to].push_back(l.from);
    }
    const auto from_origin = reach_from(origin, n, forward);
    const auto to_goal = reach_from(destination, n, backward);
    std::vector<NodeId> broken;
    for (NodeId v = 0; v < n; ++v)
      if (from_origin[v] && !to_goal[v]) broken.push_back(v);
    if (broken.empty()) break;
    if (round == kMaxRepairRounds) {
      throw GenerationError("could not repair network after " + std::to_string(kMaxRepairRounds) +
                            " rounds");
    }
    for (NodeId v : broken) {
      NodeId best = destination;
      double best_d = std::numeric_limits<double>::infinity();
      for (NodeId t = 0; t < n; ++t) {
        if (t == v || !to_goal[t] || (p.one_way && !downhill(v, t))) continue;
        if (dist(v, t) < best_d) {
          best_d = dist(v, t);
          best = t;
        }
      }
      links.push_back({v, best, dist(v, best)});
    }
  }

  double longest = 0.0;
  for (const Link& l : links) longest = std::max(longest, l.length);
  const double span = p.mean_max - p.mean_min;
  std::vector<Edge> edges;
  for (const Link& l : links) {
    // Each direction gets its own +-10% congestion factor.
    const double jitter = 0.9 + 0.2 * unit(rng);
    // The destination is absorbing, so its outgoing directions are dropped.
    if (l.from == destination) continue;
    const double raw = (p.mean_min + span * l.length / longest) * jitter;
    const double mean = std::round(std::clamp(raw, p.mean_min, p.mean_max) * 100.0) / 100.0;
    edges.push_back(Edge{l.from, l.to, Gaussian{mean, p.variance}, static_cast<EdgeIndex>(edges.size())});
  }
  return StochasticGraph(n, origin, destination, std::move(edges));
}

}  // namespace sspucb
