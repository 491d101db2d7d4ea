#pragma once

// Assignment model <vehicle, order>, constraint checks, delay aggregation,
// mission completion times and the scalar fitness.

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "oranits/missions.hpp"
#include "oranits/radio_mec.hpp"
#include "oranits/road_net.hpp"
#include "oranits/scenario.hpp"

namespace oranits {

/// One mission's slot in a row solution. Vehicle ids are 1-based; 0 means
/// unassigned. Orders are 1-based positions in the vehicle's queue.
struct Assignment {
  int vehicle = 0;
  int order = 0;
  bool operator==(const Assignment&) const = default;
};

struct AssignmentSolution {
  std::vector<Assignment> slots;

  AssignmentSolution() = default;
  explicit AssignmentSolution(std::size_t z) : slots(z) {}
  AssignmentSolution(std::initializer_list<Assignment> init) : slots(init) {}

  std::size_t size() const { return slots.size(); }
  Assignment& operator[](std::size_t i) { return slots[i]; }
  const Assignment& operator[](std::size_t i) const { return slots[i]; }
  bool operator==(const AssignmentSolution&) const = default;
};

struct VehicleSchedule {
  int vehicle = 0;
  std::vector<int> missions;  ///< row positions, ascending by order
};

class DuplicateOrder : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Partition by vehicle (ascending id), each sorted by order. Unassigned
/// slots are skipped. Throws DuplicateOrder when a vehicle repeats an order.
std::vector<VehicleSchedule> derive_vehicle_schedules(const AssignmentSolution& d);

enum class Constraint {
  VehicleQuota,      ///< K* vehicles with ceil(Z/K*) missions each, last block short
  SingleVehicle,     ///< every mission on exactly one vehicle in 1..K*
  SingleOrder,       ///< order within 1..|sigma_k|
  DistinctOrder,     ///< no two missions of a vehicle share an order
  Precedence,        ///< predecessors carry a lower order
};

struct Violation {
  Constraint constraint;
  std::vector<int> missions;  ///< row positions involved
  std::string detail;
};

/// Per-vehicle mission counts required by the quota reading: vehicle k
/// (1-based) gets min(q, max(0, Z - (k-1) q)) with q = ceil(Z/K*).
std::vector<int> vehicle_quotas(int z, int k_star);

/// Predecessor lists translated from mission ids to row positions; links to
/// missions outside the row are dropped.
std::vector<std::vector<int>> local_predecessors(const std::vector<Mission>& row);

std::vector<Violation> validate(const AssignmentSolution& d, const std::vector<std::vector<int>>& preds, int k_star);
std::vector<Violation> validate(const AssignmentSolution& d, const std::vector<Mission>& row, int k_star);

/// Structural subset (single vehicle, single order, distinct order).
bool structurally_valid(const AssignmentSolution& d, int k_star);

struct DelayBreakdown {
  double move_s = 0.0;
  double comm_s = 0.0;
  double comp_s = 0.0;
  double total_s = 0.0;
  double offload_cost = 0.0;  ///< sum of c_o (comm + comp) over the tasks
};

/// Delay of one mission run in isolation by one vehicle: traffic-adjusted
/// route cost over the average speed, plus greedy offloading of every task.
/// Task j of n is offloaded from route node floor((j + 0.5) * nodes / n).
DelayBreakdown isolated_delay(const Mission& mission, const Route& route, const RoadGraph& graph,
                              const VehicleProfile& vehicle, const std::vector<Server>& servers,
                              const std::vector<RadioUnit>& rus, const RadioParams& radio, Rng& rng);
DelayBreakdown isolated_delay(const Mission& mission, const RoadGraph& graph, const VehicleProfile& vehicle,
                              const std::vector<Server>& servers, const std::vector<RadioUnit>& rus,
                              const RadioParams& radio, Rng& rng);

inline constexpr double kNeverCompletes = std::numeric_limits<double>::infinity();

/// Completion-time bound used as the realized completion time:
/// own delay + earlier missions on the same vehicle + for each predecessor on
/// another vehicle, its delay and everything queued before it there.
/// Unassigned missions get kNeverCompletes.
std::vector<double> mct_bound(const AssignmentSolution& d, const std::vector<double>& delays,
                              const std::vector<std::vector<int>>& preds);

/// Event-driven alternative: a mission starts once its vehicle is free and
/// all predecessors finished. Missions stuck in circular waits (or waiting on
/// unassigned predecessors) get kNeverCompletes.
std::vector<double> mct_event_driven(const AssignmentSolution& d, const std::vector<double>& delays,
                                     const std::vector<std::vector<int>>& preds);

enum class MctMode { Bound, EventDriven };

struct EvalConfig {
  double gamma1 = 1.0;  ///< weight on benefit coefficients
  double gamma2 = 0.5;  ///< weight on remaining budget
  MctMode mct_mode = MctMode::Bound;
};

/// One row of the mission matrix with everything the evaluator needs
/// precomputed: delays[i][k] is mission i run by vehicle k+1.
struct RowProblem {
  int z = 0;
  int k_star = 0;
  std::vector<Mission> missions;
  std::vector<std::vector<int>> preds;
  std::vector<std::vector<DelayBreakdown>> delays;
  std::vector<double> comm_benefit;  ///< per vehicle
  std::vector<Route> routes;          ///< best route per mission
  EvalConfig config;
};

RowProblem build_row_problem(const Scenario& scenario, int row, const EvalConfig& config = {});

struct EvalReport {
  std::vector<double> mct_s;
  std::vector<bool> completed;  ///< padding slots are trivially complete
  std::vector<bool> precedence_ok;
  std::vector<double> cost;
  std::vector<double> remaining_budget;
  int completed_count = 0;  ///< completed non-padding missions
  double total_benefit = 0.0;
  double fitness = 0.0;
};

/// Completed iff assigned, mct <= deadline, remaining budget >= 0 and every
/// predecessor carries a lower order. Never throws on malformed solutions.
EvalReport evaluate(const AssignmentSolution& d, const RowProblem& problem);

struct Score {
  double fitness = 0.0;
  int completed = 0;
};

/// Allocation-light fitness for solver inner loops; same numbers as evaluate.
class FitnessEvaluator {
 public:
  explicit FitnessEvaluator(const RowProblem& problem);
  Score operator()(const AssignmentSolution& d);
  const RowProblem& problem() const { return *problem_; }

 private:
  const RowProblem* problem_;
  std::vector<double> d_;
  std::vector<double> mct_;
  std::vector<std::vector<int>> queue_;
  std::vector<double> prefix_;
};

}  // namespace oranits
