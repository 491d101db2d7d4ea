#include "oranits/scenario.hpp"

#include <fstream>
#include <sstream>

#include "oranits/schedule_eval.hpp"

namespace oranits {

namespace {

constexpr const char* kFormat = "oranits-scenario";
constexpr int kVersion = 1;

enum StreamTag : std::uint64_t { kMap = 1, kServers = 2, kVehicles = 3, kMissions = 4, kDeps = 5, kChannel = 6 };

template <class T>
void read_pair(const nlohmann::json& j, const char* key, std::pair<T, T>& out) {
  if (j.contains(key)) out = {j.at(key).at(0).get<T>(), j.at(key).at(1).get<T>()};
}

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::uint64_t channel_stream_seed(std::uint64_t scenario_seed, int mission_id, int vehicle_id) {
  return substream_seed(scenario_seed, {kChannel, static_cast<std::uint64_t>(mission_id), static_cast<std::uint64_t>(vehicle_id)});
}

void ScenarioParams::validate() const {
  missions.validate();
  coefficients.validate();
  if (k_star < 1) throw std::invalid_argument("K* must be >= 1");
  if (num_mec < 0) throw std::invalid_argument("num_mec must be >= 0");
  if (!(mec_capacity_hz.first > 0.0) || mec_capacity_hz.second < mec_capacity_hz.first)
    throw std::invalid_argument("invalid MEC capacity range");
  if (!(cloud_capacity_hz > 0.0)) throw std::invalid_argument("cloud capacity must be positive");
  if (mec_unit_cost < 0.0 || cloud_unit_cost < 0.0) throw std::invalid_argument("unit costs must be non-negative");
  if (ru_antennas < 1 || ru_channels < 1 || !(ru_bandwidth_hz > 0.0)) throw std::invalid_argument("invalid RU layout");
  if (!(v_avg_range.first > 0.0) || v_avg_range.second < v_avg_range.first || v_avg_range.second > v_max)
    throw std::invalid_argument("average speeds must lie in (0, v_max]");
  if (!(coverage_radius_m > 0.0) || !(tx_power_w > 0.0)) throw std::invalid_argument("invalid vehicle radio");
}

nlohmann::json params_to_json(const ScenarioParams& p) {
  const auto& m = p.missions;
  return {
      {"num_missions", m.num_missions},
      {"Z", m.z},
      {"K_star", p.k_star},
      {"dep_density", m.dep_density},
      {"task_count_range", {m.task_count_range.first, m.task_count_range.second}},
      {"alpha_range", {m.alpha_range.first, m.alpha_range.second}},
      {"beta_range", {m.beta_range.first, m.beta_range.second}},
      {"deadline_slack", m.deadline_slack},
      {"budget_range", {m.budget_range.first, m.budget_range.second}},
      {"min_route_m", m.min_route_m},
      {"benefit_per_meter", m.benefit_per_meter},
      {"grid_rows", p.map.rows},
      {"grid_cols", p.map.cols},
      {"grid_spacing_m", p.map.spacing_m},
      {"grid_jitter_m", p.map.jitter_m},
      {"chord_probability", p.map.chord_probability},
      {"status_weights", p.map.status_weights},
      {"status_coefficients", p.coefficients.values},
      {"noise_psd_w_per_hz", p.radio.noise_psd_w_per_hz},
      {"fiber_rate_bps", p.radio.fiber_rate_bps},
      {"path_loss_exponent", p.radio.path_loss_exponent},
      {"num_mec", p.num_mec},
      {"mec_capacity_hz", {p.mec_capacity_hz.first, p.mec_capacity_hz.second}},
      {"cloud_capacity_hz", p.cloud_capacity_hz},
      {"mec_unit_cost", p.mec_unit_cost},
      {"cloud_unit_cost", p.cloud_unit_cost},
      {"ru_antennas", p.ru_antennas},
      {"ru_channels", p.ru_channels},
      {"ru_bandwidth_hz", p.ru_bandwidth_hz},
      {"v_max", p.v_max},
      {"v_avg_range", {p.v_avg_range.first, p.v_avg_range.second}},
      {"coverage_radius_m", p.coverage_radius_m},
      {"tx_power_w", p.tx_power_w},
      {"comm_benefit_range", {p.comm_benefit_range.first, p.comm_benefit_range.second}},
  };
}

ScenarioParams params_from_json(const nlohmann::json& j, ScenarioParams p) {
  auto& m = p.missions;
  read(j, "num_missions", m.num_missions);
  read(j, "Z", m.z);
  read(j, "K_star", p.k_star);
  read(j, "dep_density", m.dep_density);
  read_pair(j, "task_count_range", m.task_count_range);
  read_pair(j, "alpha_range", m.alpha_range);
  read_pair(j, "beta_range", m.beta_range);
  read(j, "deadline_slack", m.deadline_slack);
  read_pair(j, "budget_range", m.budget_range);
  read(j, "min_route_m", m.min_route_m);
  read(j, "benefit_per_meter", m.benefit_per_meter);
  read(j, "grid_rows", p.map.rows);
  read(j, "grid_cols", p.map.cols);
  read(j, "grid_spacing_m", p.map.spacing_m);
  read(j, "grid_jitter_m", p.map.jitter_m);
  read(j, "chord_probability", p.map.chord_probability);
  read(j, "status_weights", p.map.status_weights);
  read(j, "status_coefficients", p.coefficients.values);
  read(j, "noise_psd_w_per_hz", p.radio.noise_psd_w_per_hz);
  read(j, "fiber_rate_bps", p.radio.fiber_rate_bps);
  read(j, "path_loss_exponent", p.radio.path_loss_exponent);
  read(j, "num_mec", p.num_mec);
  read_pair(j, "mec_capacity_hz", p.mec_capacity_hz);
  read(j, "cloud_capacity_hz", p.cloud_capacity_hz);
  read(j, "mec_unit_cost", p.mec_unit_cost);
  read(j, "cloud_unit_cost", p.cloud_unit_cost);
  read(j, "ru_antennas", p.ru_antennas);
  read(j, "ru_channels", p.ru_channels);
  read(j, "ru_bandwidth_hz", p.ru_bandwidth_hz);
  read(j, "v_max", p.v_max);
  read_pair(j, "v_avg_range", p.v_avg_range);
  read(j, "coverage_radius_m", p.coverage_radius_m);
  read(j, "tx_power_w", p.tx_power_w);
  read_pair(j, "comm_benefit_range", p.comm_benefit_range);
  return p;
}

void Scenario::validate() const {
  if (z < 1) throw InvalidScenario("Z must be >= 1");
  if (k_star < 1) throw InvalidScenario("K* must be >= 1");
  if (static_cast<int>(vehicles.size()) != k_star) throw InvalidScenario("scenario must list exactly K* vehicles");
  int clouds = 0;
  for (const auto& s : servers) {
    if (s.kind == ServerKind::Cloud) ++clouds;
    if (!(s.capacity_hz > 0.0)) throw InvalidScenario("server capacity must be positive");
  }
  if (clouds != 1) throw InvalidScenario("scenario must have exactly one cloud server");
  if (rus.empty()) throw InvalidScenario("scenario needs at least one radio unit");
  for (const auto& m : missions) {
    if (m.padding) continue;
    if (m.start_node < 0 || m.end_node < 0 || m.start_node >= graph.node_count() || m.end_node >= graph.node_count())
      throw InvalidScenario("mission " + std::to_string(m.id) + " references an unknown node");
    for (const auto& t : m.tasks)
      if (!(t.alpha_bits > 0.0) || !(t.beta_cycles > 0.0)) throw InvalidScenario("task sizes must be positive");
  }
  const auto rep = validate_dependencies(missions);
  if (!rep.ok()) throw InvalidScenario("invalid mission dependencies:\n" + rep.describe());
}

Scenario generate_scenario(std::uint64_t seed, const ScenarioParams& params) {
  params.validate();
  Scenario s;
  s.seed = seed;
  s.z = params.missions.z;
  s.k_star = params.k_star;
  s.radio = params.radio;

  auto map_rng = substream(seed, {kMap});
  s.graph = generate_grid_map(params.map, map_rng, params.coefficients);
  const auto& nodes = s.graph.nodes();
  Point lo = nodes.front(), hi = nodes.front();
  for (const auto& p : nodes) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }

  auto srv_rng = substream(seed, {kServers});
  std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y());
  std::uniform_real_distribution<double> cap(params.mec_capacity_hz.first, params.mec_capacity_hz.second);
  for (int i = 0; i < params.num_mec; ++i) {
    Server srv;
    srv.id = i;
    srv.kind = ServerKind::MEC;
    srv.position = Point(ux(srv_rng), uy(srv_rng));
    srv.capacity_hz = cap(srv_rng);
    srv.unit_cost = params.mec_unit_cost;
    s.servers.push_back(srv);
    s.rus.push_back({i, srv.position, params.ru_antennas, params.ru_channels, params.ru_bandwidth_hz});
  }
  Server cloud;
  cloud.id = params.num_mec;
  cloud.kind = ServerKind::Cloud;
  cloud.position = (lo + hi) / 2.0;
  cloud.capacity_hz = params.cloud_capacity_hz;
  cloud.unit_cost = params.cloud_unit_cost;
  s.servers.push_back(cloud);
  if (s.rus.empty()) s.rus.push_back({0, cloud.position, params.ru_antennas, params.ru_channels, params.ru_bandwidth_hz});

  auto veh_rng = substream(seed, {kVehicles});
  std::uniform_int_distribution<int> any_node(0, s.graph.node_count() - 1);
  std::uniform_real_distribution<double> vavg(params.v_avg_range.first, params.v_avg_range.second);
  std::uniform_real_distribution<double> comm(params.comm_benefit_range.first, params.comm_benefit_range.second);
  for (int k = 0; k < params.k_star; ++k) {
    VehicleProfile v;
    v.id = k + 1;
    v.position = s.graph.node(any_node(veh_rng));
    v.v_max = params.v_max;
    v.v_avg = vavg(veh_rng);
    v.coverage_radius_m = params.coverage_radius_m;
    v.tx_power_w = params.tx_power_w;
    v.comm_benefit = comm(veh_rng);
    s.vehicles.push_back(v);
  }

  const auto& mp = params.missions;
  auto mis_rng = substream(seed, {kMissions});
  std::uniform_int_distribution<int> ntasks(mp.task_count_range.first, mp.task_count_range.second);
  std::uniform_real_distribution<double> ualpha(mp.alpha_range.first, mp.alpha_range.second);
  std::uniform_real_distribution<double> ubeta(mp.beta_range.first, mp.beta_range.second);
  std::uniform_real_distribution<double> ubudget(mp.budget_range.first, mp.budget_range.second);
  std::vector<Route> routes;
  for (int i = 0; i < mp.num_missions; ++i) {
    Mission m;
    m.id = i + 1;
    Route best;
    for (int attempt = 0;; ++attempt) {
      m.start_node = any_node(mis_rng);
      m.end_node = any_node(mis_rng);
      if (m.start_node == m.end_node) continue;
      best = shortest_route(s.graph, m.start_node, m.end_node);
      if (best.length_m >= mp.min_route_m || attempt >= 64) break;
    }
    const int n = ntasks(mis_rng);
    for (int t = 0; t < n; ++t) m.tasks.push_back({ualpha(mis_rng), ubeta(mis_rng)});
    m.budget = ubudget(mis_rng);
    m.benefit_coeff = mp.benefit_per_meter * best.length_m;
    s.missions.push_back(std::move(m));
    routes.push_back(std::move(best));
  }

  auto dep_rng = substream(seed, {kDeps});
  sample_dependencies(s.missions, mp.z, mp.dep_density, dep_rng);

  for (std::size_t i = 0; i < s.missions.size(); ++i) {
    auto& m = s.missions[i];
    double mean = 0.0;
    for (const auto& v : s.vehicles) {
      auto ch = Rng(channel_stream_seed(seed, m.id, v.id));
      mean += isolated_delay(m, routes[i], s.graph, v, s.servers, s.rus, s.radio, ch).total_s;
    }
    m.deadline_s = mp.deadline_slack * mean / static_cast<double>(s.vehicles.size());
  }
  return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["seed"] = s.seed;
  j["Z"] = s.z;
  j["K_star"] = s.k_star;
  j["status_coefficients"] = s.graph.coefficients().values;
  j["radio"] = {{"noise_psd_w_per_hz", s.radio.noise_psd_w_per_hz},
                {"fiber_rate_bps", s.radio.fiber_rate_bps},
                {"path_loss_exponent", s.radio.path_loss_exponent},
                {"min_distance_m", s.radio.min_distance_m}};
  j["map"] = map_to_json(s.graph);
  auto& servers = j["servers"] = nlohmann::json::array();
  for (const auto& x : s.servers) servers.push_back(server_to_json(x));
  auto& rus = j["rus"] = nlohmann::json::array();
  for (const auto& x : s.rus) rus.push_back(ru_to_json(x));
  auto& vehicles = j["vehicles"] = nlohmann::json::array();
  for (const auto& x : s.vehicles) vehicles.push_back(vehicle_to_json(x));
  auto& missions = j["missions"] = nlohmann::json::array();
  for (const auto& x : s.missions) missions.push_back(mission_to_json(x));
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", std::string{}) != kFormat) throw InvalidScenario("not a scenario file");
    Scenario s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.z = j.at("Z").get<int>();
    s.k_star = j.at("K_star").get<int>();
    StatusCoefficients coeffs;
    if (j.contains("status_coefficients")) coeffs.values = j.at("status_coefficients").get<std::array<double, kTrafficLevels>>();
    s.graph = map_from_json(j.at("map"), coeffs);
    const auto& r = j.at("radio");
    s.radio.noise_psd_w_per_hz = r.at("noise_psd_w_per_hz").get<double>();
    s.radio.fiber_rate_bps = r.at("fiber_rate_bps").get<double>();
    s.radio.path_loss_exponent = r.value("path_loss_exponent", 3.0);
    s.radio.min_distance_m = r.value("min_distance_m", 1.0);
    for (const auto& x : j.at("servers")) s.servers.push_back(server_from_json(x));
    for (const auto& x : j.at("rus")) s.rus.push_back(ru_from_json(x));
    for (const auto& x : j.at("vehicles")) s.vehicles.push_back(vehicle_from_json(x));
    for (const auto& x : j.at("missions")) s.missions.push_back(mission_from_json(x));
    s.validate();
    return s;
  } catch (const InvalidScenario&) {
    throw;
  } catch (const std::exception& e) {
    throw InvalidScenario(std::string("malformed scenario: ") + e.what());
  }
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << scenario_to_json(s).dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidScenario(std::string("scenario is not valid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace oranits
