#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Deliberately naive: no shared code with the library beyond types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "oranits/ma_ddqn.hpp"
#include "oranits/road_net.hpp"
#include "oranits/schedule_eval.hpp"

namespace oracle {

using namespace oranits;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Single-source distances by edge relaxation, |V| - 1 rounds.
inline std::vector<double> bellman_ford(const RoadGraph& g, int src) {
  std::vector<double> dist(static_cast<std::size_t>(g.node_count()), kInf);
  dist[static_cast<std::size_t>(src)] = 0.0;
  for (int round = 0; round + 1 < g.node_count(); ++round) {
    bool changed = false;
    for (const auto& e : g.edges()) {
      const double w = e.coefficient * e.length_m;
      auto& da = dist[static_cast<std::size_t>(e.a)];
      auto& db = dist[static_cast<std::size_t>(e.b)];
      if (da + w < db) { db = da + w; changed = true; }
      if (db + w < da) { da = db + w; changed = true; }
    }
    if (!changed) break;
  }
  return dist;
}

/// Cost of every simple path src -> dst, by depth-first enumeration.
inline std::vector<double> all_simple_path_costs(const RoadGraph& g, int src, int dst) {
  std::vector<double> out;
  std::vector<bool> on(static_cast<std::size_t>(g.node_count()), false);
  std::function<void(int, double)> walk = [&](int u, double cost) {
    if (u == dst) {
      out.push_back(cost);
      return;
    }
    on[static_cast<std::size_t>(u)] = true;
    for (int eid : g.incident(u)) {
      const auto& e = g.edge(eid);
      const int v = e.other(u);
      if (!on[static_cast<std::size_t>(v)]) walk(v, cost + e.coefficient * e.length_m);
    }
    on[static_cast<std::size_t>(u)] = false;
  };
  walk(src, 0.0);
  return out;
}

/// Random connected graph: a random spanning tree plus extra edges.
inline RoadGraph random_graph(int n, int extra, Rng& rng) {
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(coord(rng), coord(rng));
  RoadGraph g(pts);
  std::uniform_int_distribution<int> status(0, kTrafficLevels - 1);
  auto add = [&](int a, int b) {
    const double len = std::max(1.0, (pts[static_cast<std::size_t>(a)] - pts[static_cast<std::size_t>(b)]).norm());
    g.add_edge(a, b, len, static_cast<TrafficStatus>(status(rng)));
  };
  for (int i = 1; i < n; ++i) add(i, std::uniform_int_distribution<int>(0, i - 1)(rng));
  std::uniform_int_distribution<int> node(0, n - 1);
  for (int k = 0; k < extra; ++k) {
    const int a = node(rng), b = node(rng);
    if (a != b) add(a, b);
  }
  return g;
}

/// delta_i = d_i + sum over I1 + sum over I2 of (d_p + sum over I3), summed
/// term by term straight from the definition.
inline std::vector<double> mct_terms(const AssignmentSolution& d, const std::vector<double>& delay,
                                     const std::vector<std::vector<int>>& preds) {
  const std::size_t z = d.size();
  std::vector<double> out(z, kInf);
  auto earlier = [&](std::size_t m) {
    double s = 0.0;
    for (std::size_t j = 0; j < z; ++j)
      if (j != m && d[j].vehicle == d[m].vehicle && d[j].order < d[m].order) s += delay[j];
    return s;
  };
  for (std::size_t i = 0; i < z; ++i) {
    if (d[i].vehicle < 1) continue;
    double t = delay[i] + earlier(i);
    for (int p : preds[i]) {
      const auto pu = static_cast<std::size_t>(p);
      if (d[pu].vehicle < 1 || d[pu].vehicle == d[i].vehicle) continue;
      t += delay[pu] + earlier(pu);
    }
    out[i] = t;
  }
  return out;
}

struct Fitness {
  double fitness = 0.0;
  int completed = 0;
};

/// Objective from first principles: completion needs mct <= deadline,
/// non-negative remaining budget and lower-ordered predecessors.
inline Fitness row_fitness(const AssignmentSolution& d, const RowProblem& p) {
  std::vector<double> delay(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i].vehicle >= 1) delay[i] = p.delays[i][static_cast<std::size_t>(d[i].vehicle - 1)].total_s;
  const auto mct = mct_terms(d, delay, p.preds);
  Fitness f;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& m = p.missions[i];
    if (m.padding || d[i].vehicle < 1) continue;
    const double rem = m.budget - p.delays[i][static_cast<std::size_t>(d[i].vehicle - 1)].offload_cost;
    bool prec = true;
    for (int q : p.preds[i]) prec = prec && d[static_cast<std::size_t>(q)].vehicle >= 1 && d[static_cast<std::size_t>(q)].order < d[i].order;
    if (mct[i] <= m.deadline_s && rem >= 0.0 && prec) {
      f.fitness += p.config.gamma1 * m.benefit_coeff + p.config.gamma2 * rem;
      ++f.completed;
    }
  }
  return f;
}

/// Every assignment satisfying the quota reading and the structural
/// constraints: vehicle k gets exactly its quota, orders are a permutation
/// of 1..quota on each vehicle.
inline void for_each_valid_assignment(int z, int k_star, const std::function<void(const AssignmentSolution&)>& fn) {
  const int q = (z + k_star - 1) / k_star;
  std::vector<int> quota(static_cast<std::size_t>(k_star));
  for (int k = 0; k < k_star; ++k) quota[static_cast<std::size_t>(k)] = std::min(q, std::max(0, z - k * q));

  AssignmentSolution d(static_cast<std::size_t>(z));
  std::vector<int> count(static_cast<std::size_t>(k_star), 0);
  // Choose vehicle and order for each mission in turn; an order is free if
  // no earlier mission on that vehicle took it.
  std::function<void(int)> place = [&](int i) {
    if (i == z) {
      fn(d);
      return;
    }
    for (int k = 1; k <= k_star; ++k) {
      auto& c = count[static_cast<std::size_t>(k - 1)];
      if (c == quota[static_cast<std::size_t>(k - 1)]) continue;
      for (int o = 1; o <= quota[static_cast<std::size_t>(k - 1)]; ++o) {
        bool taken = false;
        for (int j = 0; j < i; ++j) taken = taken || (d[static_cast<std::size_t>(j)].vehicle == k && d[static_cast<std::size_t>(j)].order == o);
        if (taken) continue;
        d[static_cast<std::size_t>(i)] = {k, o};
        ++c;
        place(i + 1);
        --c;
      }
    }
    d[static_cast<std::size_t>(i)] = {};
  };
  place(0);
}

struct Optimum {
  double fitness = -kInf;
  int completed = 0;
  long count = 0;
};

inline Optimum enumerate_optimum(const RowProblem& p) {
  Optimum best;
  for_each_valid_assignment(p.z, p.k_star, [&](const AssignmentSolution& d) {
    const auto f = row_fitness(d, p);
    ++best.count;
    if (f.fitness > best.fitness) {
      best.fitness = f.fitness;
      best.completed = f.completed;
    }
  });
  return best;
}

// Hand-built row: uniform delay tables per mission, zero offloading cost
// unless overridden.
inline RowProblem synthetic_row(int z, int k_star, std::vector<double> delay, std::vector<double> deadline) {
  RowProblem p;
  p.z = z;
  p.k_star = k_star;
  p.preds.assign(static_cast<std::size_t>(z), {});
  p.comm_benefit.assign(static_cast<std::size_t>(k_star), 0.0);
  p.routes.resize(static_cast<std::size_t>(z));
  for (int i = 0; i < z; ++i) {
    Mission m;
    m.id = i + 1;
    m.deadline_s = deadline[static_cast<std::size_t>(i)];
    m.budget = 10.0;
    m.benefit_coeff = 20.0;
    p.missions.push_back(m);
    DelayBreakdown b;
    b.move_s = delay[static_cast<std::size_t>(i)];
    b.total_s = b.move_s;
    p.delays.emplace_back(static_cast<std::size_t>(k_star), b);
  }
  return p;
}

inline void add_dep(RowProblem& p, int pred, int succ) {
  p.preds[static_cast<std::size_t>(succ)].push_back(pred);
  p.missions[static_cast<std::size_t>(succ)].preds.push_back(pred + 1);
  p.missions[static_cast<std::size_t>(pred)].succs.push_back(succ + 1);
}

inline RowProblem random_row(int z, int k_star, Rng& rng) {
  std::uniform_real_distribution<double> u(1.0, 10.0);
  RowProblem p = synthetic_row(z, k_star, std::vector<double>(static_cast<std::size_t>(z), 0.0),
                           std::vector<double>(static_cast<std::size_t>(z), 0.0));
  for (int i = 0; i < z; ++i) {
    auto& m = p.missions[static_cast<std::size_t>(i)];
    m.deadline_s = 3.0 * u(rng);
    m.budget = u(rng) / 2.0;
    m.benefit_coeff = 10.0 * u(rng);
    for (int k = 0; k < k_star; ++k) {
      auto& b = p.delays[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      b.move_s = u(rng);
      b.total_s = b.move_s;
      b.offload_cost = u(rng) / 3.0;
    }
    for (int j = 0; j < i; ++j)
      if (std::bernoulli_distribution(0.2)(rng)) add_dep(p, j, i);
  }
  return p;
}

/// Optimal greedy action (1 = left, 2 = right) per interior state of the
/// five-state chain, by value iteration.
inline std::vector<int> chain_optimal_policy(double gamma) {
  constexpr int n = ChainEnv::kStates;
  std::vector<double> v(n, 0.0);
  auto reward = [](int s) { return s == 0 ? 0.5 : s == n - 1 ? 1.0 : 0.0; };
  auto q = [&](int s, int a) {
    const int t = s + (a == 1 ? -1 : 1);
    const bool term = t == 0 || t == n - 1;
    return reward(t) + (term ? 0.0 : gamma * v[static_cast<std::size_t>(t)]);
  };
  for (int it = 0; it < 1000; ++it)
    for (int s = 1; s < n - 1; ++s) v[static_cast<std::size_t>(s)] = std::max(q(s, 1), q(s, 2));
  std::vector<int> pi(n, 0);
  for (int s = 1; s < n - 1; ++s) pi[static_cast<std::size_t>(s)] = q(s, 2) > q(s, 1) ? 2 : 1;
  return pi;
}

}  // namespace oracle
