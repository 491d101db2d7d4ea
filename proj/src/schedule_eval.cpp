#include "oranits/schedule_eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace oranits {

std::vector<VehicleSchedule> derive_vehicle_schedules(const AssignmentSolution& d) {
  std::map<int, std::vector<int>> by_vehicle;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i].vehicle > 0) by_vehicle[d[i].vehicle].push_back(static_cast<int>(i));

  std::vector<VehicleSchedule> out;
  out.reserve(by_vehicle.size());
  for (auto& [vehicle, ms] : by_vehicle) {
    std::stable_sort(ms.begin(), ms.end(), [&](int a, int b) { return d[a].order < d[b].order; });
    for (std::size_t k = 1; k < ms.size(); ++k) {
      if (d[ms[k]].order == d[ms[k - 1]].order)
        throw DuplicateOrder("vehicle " + std::to_string(vehicle) + " has two missions with order " +
                             std::to_string(d[ms[k]].order));
    }
    out.push_back({vehicle, std::move(ms)});
  }
  return out;
}

std::vector<int> vehicle_quotas(int z, int k_star) {
  if (z < 0 || k_star < 1) throw std::invalid_argument("invalid Z or K*");
  const int q = (z + k_star - 1) / k_star;
  std::vector<int> out(static_cast<std::size_t>(k_star));
  for (int k = 0; k < k_star; ++k) out[static_cast<std::size_t>(k)] = std::min(q, std::max(0, z - k * q));
  return out;
}

std::vector<std::vector<int>> local_predecessors(const std::vector<Mission>& row) {
  std::map<int, int> pos;
  for (std::size_t i = 0; i < row.size(); ++i) pos[row[i].id] = static_cast<int>(i);
  std::vector<std::vector<int>> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i)
    for (int p : row[i].preds)
      if (auto it = pos.find(p); it != pos.end()) out[i].push_back(it->second);
  return out;
}

std::vector<Violation> validate(const AssignmentSolution& d, const std::vector<std::vector<int>>& preds, int k_star) {
  std::vector<Violation> out;
  const int z = static_cast<int>(d.size());

  std::vector<std::vector<int>> on(static_cast<std::size_t>(k_star) + 1);
  for (int i = 0; i < z; ++i) {
    const int v = d[i].vehicle;
    if (v < 1 || v > k_star) {
      out.push_back({Constraint::SingleVehicle, {i}, "mission not on a vehicle in 1..K*"});
      continue;
    }
    on[static_cast<std::size_t>(v)].push_back(i);
  }

  const auto quotas = vehicle_quotas(z, k_star);
  for (int k = 1; k <= k_star; ++k) {
    const auto& ms = on[static_cast<std::size_t>(k)];
    const int want = quotas[static_cast<std::size_t>(k - 1)];
    if (static_cast<int>(ms.size()) != want) {
      std::ostringstream os;
      os << "vehicle " << k << " has " << ms.size() << " missions, quota " << want;
      out.push_back({Constraint::VehicleQuota, ms, os.str()});
    }
    for (int i : ms) {
      if (d[i].order < 1 || d[i].order > static_cast<int>(ms.size()))
        out.push_back({Constraint::SingleOrder, {i}, "order outside 1..|sigma_k| on vehicle " + std::to_string(k)});
    }
    for (std::size_t a = 0; a < ms.size(); ++a)
      for (std::size_t b = a + 1; b < ms.size(); ++b)
        if (d[ms[a]].order == d[ms[b]].order)
          out.push_back({Constraint::DistinctOrder, {ms[a], ms[b]}, "shared order on vehicle " + std::to_string(k)});
  }

  for (int i = 0; i < z && i < static_cast<int>(preds.size()); ++i) {
    for (int p : preds[static_cast<std::size_t>(i)]) {
      if (p < 0 || p >= z) continue;
      if (d[p].vehicle < 1 || d[i].vehicle < 1 || !(d[p].order < d[i].order))
        out.push_back({Constraint::Precedence, {p, i}, "predecessor order not lower"});
    }
  }
  return out;
}

std::vector<Violation> validate(const AssignmentSolution& d, const std::vector<Mission>& row, int k_star) {
  return validate(d, local_predecessors(row), k_star);
}

bool structurally_valid(const AssignmentSolution& d, int k_star) {
  for (const auto& v : validate(d, std::vector<std::vector<int>>{}, k_star)) {
    if (v.constraint != Constraint::VehicleQuota) return false;
  }
  return true;
}

DelayBreakdown isolated_delay(const Mission& mission, const Route& route, const RoadGraph& graph,
                              const VehicleProfile& vehicle, const std::vector<Server>& servers,
                              const std::vector<RadioUnit>& rus, const RadioParams& radio, Rng& rng) {
  DelayBreakdown out;
  if (mission.padding) return out;
  out.move_s = route.adjusted_cost / vehicle.v_avg;
  const auto n = mission.tasks.size();
  const auto stops = route.nodes.empty() ? std::size_t{1} : route.nodes.size();
  VehicleProfile at = vehicle;
  for (std::size_t j = 0; j < n; ++j) {
    const auto stop = static_cast<std::size_t>((static_cast<double>(j) + 0.5) * static_cast<double>(stops) / static_cast<double>(n));
    const int node = route.nodes.empty() ? mission.start_node : route.nodes[std::min(stop, stops - 1)];
    at.position = graph.node(node);
    const auto o = greedy_offload(at, mission.tasks[j], servers, rus, radio, rng);
    out.comm_s += o.comm_s;
    out.comp_s += o.comp_s;
    out.offload_cost += o.cost;
  }
  out.total_s = out.move_s + out.comm_s + out.comp_s;
  return out;
}

DelayBreakdown isolated_delay(const Mission& mission, const RoadGraph& graph, const VehicleProfile& vehicle,
                              const std::vector<Server>& servers, const std::vector<RadioUnit>& rus,
                              const RadioParams& radio, Rng& rng) {
  if (mission.padding) return {};
  const auto route = shortest_route(graph, mission.start_node, mission.end_node);
  return isolated_delay(mission, route, graph, vehicle, servers, rus, radio, rng);
}

namespace {

// For each assigned mission, the sum of delays of missions with a strictly
// lower order on the same vehicle. Summed in ascending order.
void earlier_on_vehicle(const AssignmentSolution& d, const std::vector<double>& delays, int max_vehicle,
                        std::vector<std::vector<int>>& queue, std::vector<double>& prefix) {
  const std::size_t z = d.size();
  queue.assign(static_cast<std::size_t>(max_vehicle) + 1, {});
  prefix.assign(z, 0.0);
  for (std::size_t i = 0; i < z; ++i) {
    const int v = d[i].vehicle;
    if (v >= 1 && v <= max_vehicle) queue[static_cast<std::size_t>(v)].push_back(static_cast<int>(i));
  }
  for (auto& q : queue) {
    std::sort(q.begin(), q.end(), [&](int a, int b) { return d[a].order != d[b].order ? d[a].order < d[b].order : a < b; });
    double run = 0.0;
    std::size_t g = 0;
    while (g < q.size()) {
      std::size_t h = g;
      while (h < q.size() && d[q[h]].order == d[q[g]].order) ++h;
      double group = 0.0;
      for (std::size_t t = g; t < h; ++t) {
        prefix[static_cast<std::size_t>(q[t])] = run;
        group += delays[static_cast<std::size_t>(q[t])];
      }
      run += group;
      g = h;
    }
  }
}

void bound_from_prefix(const AssignmentSolution& d, const std::vector<double>& delays,
                       const std::vector<std::vector<int>>& preds, int max_vehicle, const std::vector<double>& prefix,
                       std::vector<double>& mct) {
  const std::size_t z = d.size();
  mct.assign(z, kNeverCompletes);
  for (std::size_t i = 0; i < z; ++i) {
    const int v = d[i].vehicle;
    if (v < 1 || v > max_vehicle) continue;
    double t = delays[i] + prefix[i];
    if (i < preds.size()) {
      for (int p : preds[i]) {
        const int pv = d[static_cast<std::size_t>(p)].vehicle;
        if (pv < 1 || pv > max_vehicle || pv == v) continue;
        t += delays[static_cast<std::size_t>(p)] + prefix[static_cast<std::size_t>(p)];
      }
    }
    mct[i] = t;
  }
}

int max_vehicle_id(const AssignmentSolution& d) {
  int m = 0;
  for (const auto& a : d.slots) m = std::max(m, a.vehicle);
  return m;
}

}  // namespace

std::vector<double> mct_bound(const AssignmentSolution& d, const std::vector<double>& delays,
                              const std::vector<std::vector<int>>& preds) {
  if (delays.size() != d.size()) throw std::invalid_argument("one delay per mission required");
  const int kmax = max_vehicle_id(d);
  std::vector<std::vector<int>> queue;
  std::vector<double> prefix, mct;
  earlier_on_vehicle(d, delays, kmax, queue, prefix);
  bound_from_prefix(d, delays, preds, kmax, prefix, mct);
  return mct;
}

std::vector<double> mct_event_driven(const AssignmentSolution& d, const std::vector<double>& delays,
                                     const std::vector<std::vector<int>>& preds) {
  if (delays.size() != d.size()) throw std::invalid_argument("one delay per mission required");
  const std::size_t z = d.size();
  std::vector<double> finish(z, kNeverCompletes);
  std::vector<VehicleSchedule> schedules;
  try {
    schedules = derive_vehicle_schedules(d);
  } catch (const DuplicateOrder&) {
    return finish;
  }
  // Each vehicle advances through its queue while the head's predecessors
  // are done; a full sweep without progress means the rest is deadlocked.
  std::vector<std::size_t> head(schedules.size(), 0);
  std::vector<double> free_at(schedules.size(), 0.0);
  std::vector<bool> done(z, false);
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t s = 0; s < schedules.size(); ++s) {
      while (head[s] < schedules[s].missions.size()) {
        const auto i = static_cast<std::size_t>(schedules[s].missions[head[s]]);
        double start = free_at[s];
        bool ready = true;
        if (i < preds.size()) {
          for (int p : preds[i]) {
            if (!done[static_cast<std::size_t>(p)]) {
              ready = false;
              break;
            }
            start = std::max(start, finish[static_cast<std::size_t>(p)]);
          }
        }
        if (!ready) break;
        finish[i] = start + delays[i];
        free_at[s] = finish[i];
        done[i] = true;
        ++head[s];
        progress = true;
      }
    }
  }
  return finish;
}

RowProblem build_row_problem(const Scenario& scenario, int row, const EvalConfig& config) {
  if (row < 0 || row >= scenario.row_count()) throw std::out_of_range("row index out of range");
  const auto z = static_cast<std::size_t>(scenario.z);
  std::vector<Mission> chunk(scenario.missions.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(row) * z),
                             scenario.missions.begin() + static_cast<std::ptrdiff_t>(std::min(scenario.missions.size(), (static_cast<std::size_t>(row) + 1) * z)));
  int next_id = 0;
  for (const auto& m : scenario.missions) next_id = std::max(next_id, m.id + 1);
  while (chunk.size() < z) chunk.push_back(Mission::make_padding(next_id++));

  RowProblem p;
  p.z = scenario.z;
  p.k_star = scenario.k_star;
  p.config = config;
  p.preds = local_predecessors(chunk);
  for (const auto& v : scenario.vehicles) p.comm_benefit.push_back(v.comm_benefit);
  p.routes.resize(z);
  p.delays.assign(z, std::vector<DelayBreakdown>(scenario.vehicles.size()));
  for (std::size_t i = 0; i < z; ++i) {
    const auto& m = chunk[i];
    if (m.padding) continue;
    p.routes[i] = shortest_route(scenario.graph, m.start_node, m.end_node);
    for (std::size_t k = 0; k < scenario.vehicles.size(); ++k) {
      const auto& v = scenario.vehicles[k];
      auto ch = Rng(channel_stream_seed(scenario.seed, m.id, v.id));
      p.delays[i][k] = isolated_delay(m, p.routes[i], scenario.graph, v, scenario.servers, scenario.rus, scenario.radio, ch);
    }
  }
  p.missions = std::move(chunk);
  return p;
}

namespace {

bool in_range(const Assignment& a, int k_star) { return a.vehicle >= 1 && a.vehicle <= k_star; }

bool precedence_satisfied(const AssignmentSolution& d, const std::vector<int>& preds, std::size_t i, int k_star) {
  for (int p : preds) {
    const auto& ap = d[static_cast<std::size_t>(p)];
    if (!in_range(ap, k_star) || !(ap.order < d[i].order)) return false;
  }
  return true;
}

}  // namespace

EvalReport evaluate(const AssignmentSolution& d, const RowProblem& problem) {
  const auto z = static_cast<std::size_t>(problem.z);
  EvalReport r;
  r.mct_s.assign(z, kNeverCompletes);
  r.completed.assign(z, false);
  r.precedence_ok.assign(z, false);
  r.cost.assign(z, 0.0);
  r.remaining_budget.assign(z, 0.0);
  if (d.size() != z) return r;

  std::vector<double> delays(z, 0.0);
  AssignmentSolution clean = d;
  for (std::size_t i = 0; i < z; ++i) {
    if (!in_range(d[i], problem.k_star)) {
      clean[i].vehicle = 0;
      continue;
    }
    const auto& db = problem.delays[i][static_cast<std::size_t>(d[i].vehicle - 1)];
    delays[i] = db.total_s;
    r.cost[i] = db.offload_cost;
  }
  if (problem.config.mct_mode == MctMode::Bound)
    r.mct_s = mct_bound(clean, delays, problem.preds);
  else
    r.mct_s = mct_event_driven(clean, delays, problem.preds);

  std::vector<bool> vehicle_used(static_cast<std::size_t>(problem.k_star), false);
  const auto& cfg = problem.config;
  for (std::size_t i = 0; i < z; ++i) {
    const auto& m = problem.missions[i];
    r.remaining_budget[i] = m.budget - r.cost[i];
    r.precedence_ok[i] = in_range(d[i], problem.k_star) && precedence_satisfied(clean, problem.preds[i], i, problem.k_star);
    if (m.padding) {
      r.mct_s[i] = 0.0;
      r.completed[i] = true;
      continue;
    }
    const bool ok = in_range(d[i], problem.k_star) && r.mct_s[i] <= m.deadline_s && r.remaining_budget[i] >= 0.0 &&
                    r.precedence_ok[i];
    if (!ok) continue;
    r.completed[i] = true;
    ++r.completed_count;
    r.total_benefit += m.benefit_coeff;
    r.fitness += cfg.gamma1 * m.benefit_coeff + cfg.gamma2 * r.remaining_budget[i];
    vehicle_used[static_cast<std::size_t>(d[i].vehicle - 1)] = true;
  }
  for (std::size_t k = 0; k < vehicle_used.size(); ++k)
    if (vehicle_used[k] && k < problem.comm_benefit.size()) r.total_benefit += problem.comm_benefit[k];
  return r;
}

FitnessEvaluator::FitnessEvaluator(const RowProblem& problem) : problem_(&problem) {}

Score FitnessEvaluator::operator()(const AssignmentSolution& d) {
  const auto& p = *problem_;
  const auto z = static_cast<std::size_t>(p.z);
  Score s;
  if (d.size() != z) return s;
  d_.assign(z, 0.0);
  for (std::size_t i = 0; i < z; ++i)
    if (in_range(d[i], p.k_star)) d_[i] = p.delays[i][static_cast<std::size_t>(d[i].vehicle - 1)].total_s;

  if (p.config.mct_mode == MctMode::Bound) {
    // Out-of-range vehicles are skipped inside the helpers via max_vehicle.
    earlier_on_vehicle(d, d_, p.k_star, queue_, prefix_);
    bound_from_prefix(d, d_, p.preds, p.k_star, prefix_, mct_);
  } else {
    AssignmentSolution clean = d;
    for (auto& a : clean.slots)
      if (!in_range(a, p.k_star)) a.vehicle = 0;
    mct_ = mct_event_driven(clean, d_, p.preds);
  }
  const auto& cfg = p.config;
  for (std::size_t i = 0; i < z; ++i) {
    const auto& m = p.missions[i];
    if (m.padding || !in_range(d[i], p.k_star)) continue;
    const double rema = m.budget - p.delays[i][static_cast<std::size_t>(d[i].vehicle - 1)].offload_cost;
    if (!(mct_[i] <= m.deadline_s) || rema < 0.0) continue;
    if (!precedence_satisfied(d, p.preds[i], i, p.k_star)) continue;
    ++s.completed;
    s.fitness += cfg.gamma1 * m.benefit_coeff + cfg.gamma2 * rema;
  }
  return s;
}

}  // namespace oranits
