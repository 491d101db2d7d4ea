#include "oranits/missions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace oranits {

Mission Mission::make_padding(int id) {
  Mission m;
  m.id = id;
  m.padding = true;
  return m;
}

MissionMatrix group_missions(const std::vector<Mission>& missions, int z) {
  if (z < 1) throw std::invalid_argument("Z must be >= 1");
  MissionMatrix rows;
  const auto zz = static_cast<std::size_t>(z);
  const std::size_t n_rows = (missions.size() + zz - 1) / zz;
  rows.reserve(n_rows);
  int next_pad_id = 0;
  for (const auto& m : missions) next_pad_id = std::max(next_pad_id, m.id + 1);
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::vector<Mission> row;
    row.reserve(zz);
    for (std::size_t i = r * zz; i < std::min(missions.size(), (r + 1) * zz); ++i) row.push_back(missions[i]);
    while (row.size() < zz) row.push_back(Mission::make_padding(next_pad_id++));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string DependencyReport::describe() const {
  std::ostringstream os;
  for (const auto& c : cycles) {
    os << "cycle:";
    for (int id : c) os << ' ' << id;
    os << '\n';
  }
  for (auto [p, s] : mirror_mismatches) os << "mirror mismatch: " << p << " -> " << s << '\n';
  for (int id : self_or_overlap) os << "self reference or pred/succ overlap at mission " << id << '\n';
  for (auto [m, r] : unknown_refs) os << "mission " << m << " references unknown id " << r << '\n';
  return os.str();
}

DependencyReport validate_dependencies(const std::vector<Mission>& missions) {
  DependencyReport rep;
  std::map<int, const Mission*> by_id;
  for (const auto& m : missions) by_id[m.id] = &m;

  auto contains = [](const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); };

  std::set<std::pair<int, int>> edges;  // pred -> succ, union of both declarations
  for (const auto& m : missions) {
    bool bad = contains(m.preds, m.id) || contains(m.succs, m.id);
    for (int p : m.preds) bad = bad || contains(m.succs, p);
    if (bad) rep.self_or_overlap.push_back(m.id);

    for (int p : m.preds) {
      auto it = by_id.find(p);
      if (it == by_id.end()) {
        rep.unknown_refs.emplace_back(m.id, p);
        continue;
      }
      if (p != m.id) edges.emplace(p, m.id);
      if (!contains(it->second->succs, m.id)) rep.mirror_mismatches.emplace_back(p, m.id);
    }
    for (int s : m.succs) {
      auto it = by_id.find(s);
      if (it == by_id.end()) {
        rep.unknown_refs.emplace_back(m.id, s);
        continue;
      }
      if (s != m.id) edges.emplace(m.id, s);
      if (!contains(it->second->preds, m.id)) rep.mirror_mismatches.emplace_back(m.id, s);
    }
  }

  // DFS cycle search over the union graph; one report per back edge.
  std::map<int, std::vector<int>> adj;
  for (auto [a, b] : edges) adj[a].push_back(b);
  std::map<int, int> state;  // 0 new, 1 on stack, 2 done
  std::vector<int> stack;
  auto dfs = [&](auto&& self, int u) -> void {
    state[u] = 1;
    stack.push_back(u);
    for (int v : adj[u]) {
      if (state[v] == 1) {
        auto it = std::find(stack.begin(), stack.end(), v);
        std::vector<int> cyc(it, stack.end());
        cyc.push_back(v);
        rep.cycles.push_back(std::move(cyc));
      } else if (state[v] == 0) {
        self(self, v);
      }
    }
    stack.pop_back();
    state[u] = 2;
  };
  for (const auto& m : missions)
    if (state[m.id] == 0) dfs(dfs, m.id);
  return rep;
}

void MissionParams::validate() const {
  auto bad = [](const char* what) { throw std::invalid_argument(std::string("invalid mission params: ") + what); };
  if (num_missions < 0) bad("num_missions");
  if (z < 1) bad("Z");
  if (dep_density < 0.0 || dep_density >= 1.0) bad("dep_density");
  if (task_count_range.first < 0 || task_count_range.second < task_count_range.first) bad("task_count_range");
  if (!(alpha_range.first > 0.0) || alpha_range.second < alpha_range.first) bad("alpha_range");
  if (!(beta_range.first > 0.0) || beta_range.second < beta_range.first) bad("beta_range");
  if (!(deadline_slack > 0.0)) bad("deadline_slack");
  if (budget_range.first < 0.0 || budget_range.second < budget_range.first) bad("budget_range");
  if (min_route_m < 0.0) bad("min_route_m");
  if (!(benefit_per_meter > 0.0)) bad("benefit_per_meter");
}

void sample_dependencies(std::vector<Mission>& missions, int z, double density, Rng& rng) {
  if (z < 1) throw std::invalid_argument("Z must be >= 1");
  if (density < 0.0 || density >= 1.0) throw std::invalid_argument("dep_density must lie in [0, 1)");
  for (auto& m : missions) {
    m.preds.clear();
    m.succs.clear();
  }
  std::bernoulli_distribution link(density);
  const auto n = missions.size();
  const auto zz = static_cast<std::size_t>(z);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t row_end = std::min(n, (i / zz + 1) * zz);
    for (std::size_t j = i + 1; j < row_end; ++j) {
      if (missions[i].padding || missions[j].padding) continue;
      if (!link(rng)) continue;
      missions[j].preds.push_back(missions[i].id);
      missions[i].succs.push_back(missions[j].id);
    }
  }
}

nlohmann::json mission_to_json(const Mission& m) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : m.tasks) tasks.push_back({{"alpha", t.alpha_bits}, {"beta", t.beta_cycles}});
  return {{"id", m.id},         {"start", m.start_node}, {"end", m.end_node},          {"deadline", m.deadline_s},
          {"budget", m.budget}, {"preds", m.preds},      {"succs", m.succs},           {"tasks", tasks},
          {"benefit_coeff", m.benefit_coeff},            {"padding", m.padding}};
}

Mission mission_from_json(const nlohmann::json& j) {
  Mission m;
  m.id = j.at("id").get<int>();
  m.start_node = j.at("start").get<int>();
  m.end_node = j.at("end").get<int>();
  m.deadline_s = j.at("deadline").get<double>();
  m.budget = j.at("budget").get<double>();
  m.preds = j.at("preds").get<std::vector<int>>();
  m.succs = j.at("succs").get<std::vector<int>>();
  for (const auto& t : j.at("tasks")) m.tasks.push_back({t.at("alpha").get<double>(), t.at("beta").get<double>()});
  m.benefit_coeff = j.at("benefit_coeff").get<double>();
  m.padding = j.value("padding", false);
  return m;
}

}  // namespace oranits
