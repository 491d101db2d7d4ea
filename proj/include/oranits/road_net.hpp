#pragma once

// Road network with per-edge traffic status and traffic-adjusted routing.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "oranits/rng.hpp"

namespace oranits {

using Point = Eigen::Vector2d;

enum class TrafficStatus : int { FreeFlow = 0, Stable = 1, Slow = 2, Congested = 3, Severe = 4 };

inline constexpr int kTrafficLevels = 5;

/// Multiplier per status level. Must be strictly increasing with coeff[FreeFlow] == 1.
struct StatusCoefficients {
  std::array<double, kTrafficLevels> values{1.0, 1.25, 1.75, 2.5, 4.0};

  double operator[](TrafficStatus s) const { return values[static_cast<std::size_t>(s)]; }
  void validate() const;
};

struct RoadEdge {
  int id = 0;
  int a = 0;
  int b = 0;
  double length_m = 0.0;
  TrafficStatus status = TrafficStatus::FreeFlow;
  double coefficient = 1.0;

  int other(int node) const { return node == a ? b : a; }
};

struct Route {
  std::vector<int> nodes;
  std::vector<int> edges;
  double length_m = 0.0;
  double adjusted_cost = 0.0;
};

class NoPathError : public std::runtime_error {
 public:
  NoPathError(int src, int dst);
};

class RoadGraph {
 public:
  RoadGraph() = default;
  explicit RoadGraph(std::vector<Point> nodes, StatusCoefficients coeffs = {});

  /// Adds an undirected edge; the coefficient is looked up from the status.
  int add_edge(int a, int b, double length_m, TrafficStatus status);
  /// Changes an edge's status and refreshes its coefficient.
  void set_status(int edge_id, TrafficStatus status);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const Point& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  const std::vector<RoadEdge>& edges() const { return edges_; }
  const RoadEdge& edge(int i) const { return edges_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& incident(int node) const { return adjacency_.at(static_cast<std::size_t>(node)); }
  const StatusCoefficients& coefficients() const { return coeffs_; }

  /// Axis-aligned extent (max - min over both axes); 1.0 for degenerate maps.
  double extent() const;

 private:
  std::vector<Point> nodes_;
  std::vector<RoadEdge> edges_;
  std::vector<std::vector<int>> adjacency_;
  StatusCoefficients coeffs_;
};

/// c_i * length_i.
inline double traffic_adjusted_weight(const RoadEdge& e) { return e.coefficient * e.length_m; }

/// Dijkstra over traffic-adjusted weights. Among equal-cost routes the
/// lexicographically smallest node sequence is returned.
Route shortest_route(const RoadGraph& graph, int src, int dst);

struct GridMapParams {
  int rows = 10;
  int cols = 10;
  double spacing_m = 550.0;
  double jitter_m = 60.0;
  double chord_probability = 0.2;
  /// Probability of each status level, FreeFlow..Severe.
  std::array<double, kTrafficLevels> status_weights{0.35, 0.25, 0.2, 0.12, 0.08};
};

/// Grid with jittered intersections plus random diagonal chords.
RoadGraph generate_grid_map(const GridMapParams& params, Rng& rng, StatusCoefficients coeffs = {});

nlohmann::json map_to_json(const RoadGraph& g);
RoadGraph map_from_json(const nlohmann::json& j, StatusCoefficients coeffs = {});

}  // namespace oranits
