#include "oranits/road_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace oranits {

void StatusCoefficients::validate() const {
  if (values[0] != 1.0) throw std::invalid_argument("free-flow coefficient must be 1");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw std::invalid_argument("status coefficients must be strictly increasing");
  }
}

NoPathError::NoPathError(int src, int dst)
    : std::runtime_error("no path from node " + std::to_string(src) + " to node " + std::to_string(dst)) {}

RoadGraph::RoadGraph(std::vector<Point> nodes, StatusCoefficients coeffs)
    : nodes_(std::move(nodes)), adjacency_(nodes_.size()), coeffs_(coeffs) {
  coeffs_.validate();
}

int RoadGraph::add_edge(int a, int b, double length_m, TrafficStatus status) {
  if (a < 0 || b < 0 || a >= node_count() || b >= node_count()) throw std::out_of_range("edge endpoint out of range");
  if (a == b) throw std::invalid_argument("self-loop edges are not allowed");
  if (!(length_m > 0.0) || !std::isfinite(length_m)) throw std::invalid_argument("edge length must be positive");
  const int s = static_cast<int>(status);
  if (s < 0 || s >= kTrafficLevels) throw std::invalid_argument("invalid traffic status");

  RoadEdge e;
  e.id = edge_count();
  e.a = a;
  e.b = b;
  e.length_m = length_m;
  e.status = status;
  e.coefficient = coeffs_[status];
  edges_.push_back(e);
  adjacency_[static_cast<std::size_t>(a)].push_back(e.id);
  adjacency_[static_cast<std::size_t>(b)].push_back(e.id);
  return e.id;
}

void RoadGraph::set_status(int edge_id, TrafficStatus status) {
  auto& e = edges_.at(static_cast<std::size_t>(edge_id));
  e.status = status;
  e.coefficient = coeffs_[status];
}

double RoadGraph::extent() const {
  if (nodes_.empty()) return 1.0;
  Point lo = nodes_.front(), hi = nodes_.front();
  for (const auto& p : nodes_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double ext = (hi - lo).maxCoeff();
  return ext > 0.0 ? ext : 1.0;
}

namespace {

std::vector<double> distances_to(const RoadGraph& g, int dst) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(g.node_count()), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(dst)] = 0.0;
  pq.emplace(0.0, dst);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (int eid : g.incident(u)) {
      const auto& e = g.edge(eid);
      const int v = e.other(u);
      const double nd = d + traffic_adjusted_weight(e);
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        pq.emplace(nd, v);
      }
    }
  }
  return dist;
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Route shortest_route(const RoadGraph& graph, int src, int dst) {
  if (src < 0 || dst < 0 || src >= graph.node_count() || dst >= graph.node_count())
    throw std::out_of_range("route endpoint out of range");

  Route r;
  r.nodes.push_back(src);
  if (src == dst) return r;

  // Distances to dst, then walk forward from src always taking the
  // smallest-index neighbour that stays on some shortest path.
  const auto to_dst = distances_to(graph, dst);
  if (!std::isfinite(to_dst[static_cast<std::size_t>(src)])) throw NoPathError(src, dst);

  int u = src;
  while (u != dst) {
    int best_v = -1, best_e = -1;
    for (int eid : graph.incident(u)) {
      const auto& e = graph.edge(eid);
      const int v = e.other(u);
      const double via = traffic_adjusted_weight(e) + to_dst[static_cast<std::size_t>(v)];
      if (!nearly_equal(via, to_dst[static_cast<std::size_t>(u)])) continue;
      if (to_dst[static_cast<std::size_t>(v)] >= to_dst[static_cast<std::size_t>(u)]) continue;
      if (best_v < 0 || v < best_v || (v == best_v && traffic_adjusted_weight(e) < traffic_adjusted_weight(graph.edge(best_e)))) {
        best_v = v;
        best_e = eid;
      }
    }
    if (best_v < 0) throw NoPathError(src, dst);  // unreachable for positive weights
    const auto& e = graph.edge(best_e);
    r.edges.push_back(best_e);
    r.nodes.push_back(best_v);
    r.length_m += e.length_m;
    r.adjusted_cost += traffic_adjusted_weight(e);
    u = best_v;
  }
  return r;
}

RoadGraph generate_grid_map(const GridMapParams& p, Rng& rng, StatusCoefficients coeffs) {
  if (p.rows < 1 || p.cols < 1 || !(p.spacing_m > 0.0)) throw std::invalid_argument("invalid grid parameters");
  std::uniform_real_distribution<double> jitter(-p.jitter_m, p.jitter_m);
  std::vector<Point> nodes;
  nodes.reserve(static_cast<std::size_t>(p.rows * p.cols));
  for (int r = 0; r < p.rows; ++r)
    for (int c = 0; c < p.cols; ++c) nodes.emplace_back(c * p.spacing_m + jitter(rng), r * p.spacing_m + jitter(rng));

  RoadGraph g(std::move(nodes), coeffs);
  std::discrete_distribution<int> status(p.status_weights.begin(), p.status_weights.end());
  auto link = [&](int a, int b) {
    const double len = (g.node(a) - g.node(b)).norm();
    g.add_edge(a, b, std::max(len, 1.0), static_cast<TrafficStatus>(status(rng)));
  };
  auto idx = [&](int r, int c) { return r * p.cols + c; };
  for (int r = 0; r < p.rows; ++r) {
    for (int c = 0; c < p.cols; ++c) {
      if (c + 1 < p.cols) link(idx(r, c), idx(r, c + 1));
      if (r + 1 < p.rows) link(idx(r, c), idx(r + 1, c));
    }
  }
  std::bernoulli_distribution chord(p.chord_probability), flip(0.5);
  for (int r = 0; r + 1 < p.rows; ++r) {
    for (int c = 0; c + 1 < p.cols; ++c) {
      if (!chord(rng)) continue;
      if (flip(rng))
        link(idx(r, c), idx(r + 1, c + 1));
      else
        link(idx(r, c + 1), idx(r + 1, c));
    }
  }
  return g;
}

nlohmann::json map_to_json(const RoadGraph& g) {
  nlohmann::json j;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const auto& p : g.nodes()) nodes.push_back({p.x(), p.y()});
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges())
    edges.push_back({{"a", e.a}, {"b", e.b}, {"length", e.length_m}, {"status", static_cast<int>(e.status)}});
  return j;
}

RoadGraph map_from_json(const nlohmann::json& j, StatusCoefficients coeffs) {
  std::vector<Point> nodes;
  for (const auto& p : j.at("nodes")) nodes.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  RoadGraph g(std::move(nodes), coeffs);
  for (const auto& e : j.at("edges")) {
    const int s = e.at("status").get<int>();
    if (s < 0 || s >= kTrafficLevels) throw std::invalid_argument("map status must be an integer in 0..4");
    g.add_edge(e.at("a").get<int>(), e.at("b").get<int>(), e.at("length").get<double>(), static_cast<TrafficStatus>(s));
  }
  return g;
}

}  // namespace oranits
