#pragma once

// A complete problem instance: map, servers, radio units, vehicles and
// missions, plus deterministic generation and the JSON scenario file.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "oranits/missions.hpp"
#include "oranits/radio_mec.hpp"
#include "oranits/road_net.hpp"

namespace oranits {

struct ScenarioParams {
  MissionParams missions;
  int k_star = 5;
  GridMapParams map;
  StatusCoefficients coefficients;
  RadioParams radio;

  int num_mec = 20;
  std::pair<double, double> mec_capacity_hz{5.0e9, 30.0e9};
  double cloud_capacity_hz = 20.0e9;
  double mec_unit_cost = 1.0;
  double cloud_unit_cost = 0.5;

  int ru_antennas = 16;
  int ru_channels = 10;
  double ru_bandwidth_hz = 10.0e6;

  double v_max = 20.0;
  std::pair<double, double> v_avg_range{14.0, 20.0};
  double coverage_radius_m = 2000.0;
  double tx_power_w = 0.199526;
  std::pair<double, double> comm_benefit_range{50.0, 100.0};

  void validate() const;
};

nlohmann::json params_to_json(const ScenarioParams& p);
/// Overlays keys present in `j` onto `base`.
ScenarioParams params_from_json(const nlohmann::json& j, ScenarioParams base = {});

struct Scenario {
  std::uint64_t seed = 0;
  int z = 0;
  int k_star = 0;
  RoadGraph graph;
  RadioParams radio;
  std::vector<Server> servers;
  std::vector<RadioUnit> rus;
  std::vector<VehicleProfile> vehicles;
  std::vector<Mission> missions;

  int row_count() const { return z > 0 ? static_cast<int>((missions.size() + static_cast<std::size_t>(z) - 1) / static_cast<std::size_t>(z)) : 0; }
  /// Structural checks: dependencies, node references, exactly one cloud.
  void validate() const;
};

class InvalidScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic under `seed`. Deadlines are deadline_slack times the mean
/// isolated delay of the mission over the K* vehicles.
Scenario generate_scenario(std::uint64_t seed, const ScenarioParams& params);

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

void save_scenario(const Scenario& s, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

/// Seed of the channel-draw substream for one (mission, vehicle) pair.
std::uint64_t channel_stream_seed(std::uint64_t scenario_seed, int mission_id, int vehicle_id);

}  // namespace oranits
