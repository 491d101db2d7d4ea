#pragma once

// Missions, dependency DAG checks, and the row grouping of the mission matrix.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "oranits/rng.hpp"

namespace oranits {

struct OffloadTask {
  double alpha_bits = 0.0;   ///< input size
  double beta_cycles = 0.0;  ///< CPU cycles to process
};

struct Mission {
  int id = 0;
  int start_node = 0;
  int end_node = 0;
  double deadline_s = 0.0;
  double budget = 0.0;
  std::vector<int> preds;  ///< mission ids that must complete first
  std::vector<int> succs;  ///< mission ids waiting on this one
  std::vector<OffloadTask> tasks;
  double benefit_coeff = 0.0;
  bool padding = false;

  /// Filler slot for the last matrix row: no tasks, no dependencies, no benefit.
  static Mission make_padding(int id);
};

using MissionMatrix = std::vector<std::vector<Mission>>;

/// Row-major grouping into ceil(M/Z) rows of exactly Z slots; the last row
/// is padded. Throws std::invalid_argument when z < 1.
MissionMatrix group_missions(const std::vector<Mission>& missions, int z);

struct DependencyReport {
  std::vector<std::vector<int>> cycles;                  ///< each as a closed id sequence
  std::vector<std::pair<int, int>> mirror_mismatches;    ///< (pred, succ) links listed on one side only
  std::vector<int> self_or_overlap;                      ///< ids in their own sets or in preds and succs
  std::vector<std::pair<int, int>> unknown_refs;         ///< (mission, referenced id) not in the list

  bool ok() const {
    return cycles.empty() && mirror_mismatches.empty() && self_or_overlap.empty() && unknown_refs.empty();
  }
  std::string describe() const;
};

DependencyReport validate_dependencies(const std::vector<Mission>& missions);

/// Mission-level scenario knobs (the rest of the scenario lives in scenario.hpp).
struct MissionParams {
  int num_missions = 25;
  int z = 25;
  double dep_density = 0.1;
  std::pair<int, int> task_count_range{1, 4};
  std::pair<double, double> alpha_range{1.0e6, 8.0e6};
  std::pair<double, double> beta_range{2.0e8, 4.0e9};
  double deadline_slack = 3.0;
  std::pair<double, double> budget_range{0.5, 3.0};
  double min_route_m = 800.0;
  double benefit_per_meter = 0.025;

  void validate() const;
};

/// Samples dependency links only between missions of the same Z-row and
/// only from lower to higher id, so the result is acyclic.
void sample_dependencies(std::vector<Mission>& missions, int z, double density, Rng& rng);

nlohmann::json mission_to_json(const Mission& m);
Mission mission_from_json(const nlohmann::json& j);

}  // namespace oranits
