#include "oranits/radio_mec.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace oranits {

void VehicleProfile::validate() const {
  if (!(v_avg > 0.0) || v_avg > v_max) throw std::invalid_argument("vehicle speeds must satisfy 0 < v_avg <= v_max");
  if (!(coverage_radius_m > 0.0)) throw std::invalid_argument("coverage radius must be positive");
  if (!(tx_power_w > 0.0)) throw std::invalid_argument("transmit power must be positive");
}

double channel_gain_from_fading(double distance_m, std::span<const double> fading, double exponent) {
  if (!(distance_m > 0.0)) throw InvalidDistance();
  double sum = 0.0;
  for (double f : fading) sum += f;
  return std::pow(distance_m, -exponent) * sum;
}

double channel_gain(double distance_m, int antennas, Rng& rng, double exponent) {
  if (!(distance_m > 0.0)) throw InvalidDistance();
  if (antennas < 1) throw std::invalid_argument("antenna count must be >= 1");
  std::exponential_distribution<double> fade(1.0);
  double sum = 0.0;
  for (int e = 0; e < antennas; ++e) sum += fade(rng);
  return std::pow(distance_m, -exponent) * sum;
}

double uplink_throughput(double tx_power_w, double gain, double channel_bw_hz, double noise_psd) {
  const double snr = tx_power_w * gain / (channel_bw_hz * noise_psd);
  return channel_bw_hz * (std::log1p(snr) / std::numbers::ln2);
}

double comm_delay(const OffloadTask& task, const Server& server, double rate_bps, double fiber_rate_bps) {
  const double uplink = task.alpha_bits == 0.0 ? 0.0 : task.alpha_bits / rate_bps;
  if (server.kind == ServerKind::MEC) return uplink;
  return uplink + fiber_delay(task.alpha_bits, fiber_rate_bps);
}

int nearest_ru(const std::vector<RadioUnit>& rus, const Point& p) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rus.size(); ++i) {
    const double d = (rus[i].position - p).squaredNorm();
    if (d < best_d || (d == best_d && rus[i].id < rus[static_cast<std::size_t>(best)].id)) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<OffloadOption> offload_candidates(const VehicleProfile& vehicle, const OffloadTask& task,
                                              const std::vector<Server>& servers, const std::vector<RadioUnit>& rus,
                                              const RadioParams& params, Rng& rng) {
  if (rus.empty()) throw std::invalid_argument("at least one radio unit is required");
  std::vector<OffloadOption> out;
  auto option_via = [&](const Server& s, const RadioUnit& ru) {
    const double dist = std::max((ru.position - vehicle.position).norm(), params.min_distance_m);
    const double g = channel_gain(dist, ru.antennas, rng, params.path_loss_exponent);
    const double rate = uplink_throughput(vehicle.tx_power_w, g, ru.channel_bandwidth_hz(), params.noise_psd_w_per_hz);
    OffloadOption o;
    o.server_id = s.id;
    o.comm_s = comm_delay(task, s, rate, params.fiber_rate_bps);
    o.comp_s = comp_delay(task, s);
    o.total_s = o.comm_s + o.comp_s;
    o.cost = s.unit_cost * (o.comm_s + o.comp_s);
    return o;
  };

  const Server* cloud = nullptr;
  for (const auto& s : servers) {
    if (s.kind == ServerKind::Cloud) {
      cloud = &s;
      continue;
    }
    if (!s.available) continue;
    if ((s.position - vehicle.position).norm() > vehicle.coverage_radius_m) continue;
    out.push_back(option_via(s, rus[static_cast<std::size_t>(nearest_ru(rus, s.position))]));
  }
  if (cloud == nullptr) throw std::invalid_argument("scenario has no cloud server");
  out.push_back(option_via(*cloud, rus[static_cast<std::size_t>(nearest_ru(rus, vehicle.position))]));
  return out;
}

OffloadOption greedy_offload(const VehicleProfile& vehicle, const OffloadTask& task, const std::vector<Server>& servers,
                             const std::vector<RadioUnit>& rus, const RadioParams& params, Rng& rng) {
  const auto options = offload_candidates(vehicle, task, servers, rus, params, rng);
  // Best MEC first, then the cloud comparison; both steps use (latency, id) order.
  const OffloadOption* best = nullptr;
  for (const auto& o : options) {
    if (best == nullptr || o.total_s < best->total_s || (o.total_s == best->total_s && o.server_id < best->server_id))
      best = &o;
  }
  return *best;
}

void toggle_availability(std::vector<Server>& servers, double overload_probability, Rng& rng) {
  std::bernoulli_distribution overloaded(overload_probability);
  for (auto& s : servers) {
    if (s.kind == ServerKind::MEC) s.available = !overloaded(rng);
  }
}

nlohmann::json server_to_json(const Server& s) {
  return {{"id", s.id},
          {"kind", s.kind == ServerKind::MEC ? "mec" : "cloud"},
          {"pos", {s.position.x(), s.position.y()}},
          {"f", s.capacity_hz},
          {"c", s.unit_cost}};
}

Server server_from_json(const nlohmann::json& j) {
  Server s;
  s.id = j.at("id").get<int>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "mec")
    s.kind = ServerKind::MEC;
  else if (kind == "cloud")
    s.kind = ServerKind::Cloud;
  else
    throw std::invalid_argument("unknown server kind: " + kind);
  s.position = Point(j.at("pos").at(0).get<double>(), j.at("pos").at(1).get<double>());
  s.capacity_hz = j.at("f").get<double>();
  s.unit_cost = j.at("c").get<double>();
  if (!(s.capacity_hz > 0.0)) throw std::invalid_argument("server capacity must be positive");
  if (s.unit_cost < 0.0) throw std::invalid_argument("server unit cost must be non-negative");
  return s;
}

nlohmann::json ru_to_json(const RadioUnit& r) {
  return {{"id", r.id}, {"pos", {r.position.x(), r.position.y()}}, {"E", r.antennas}, {"U", r.channels}, {"W", r.bandwidth_hz}};
}

RadioUnit ru_from_json(const nlohmann::json& j) {
  RadioUnit r;
  r.id = j.at("id").get<int>();
  r.position = Point(j.at("pos").at(0).get<double>(), j.at("pos").at(1).get<double>());
  r.antennas = j.at("E").get<int>();
  r.channels = j.at("U").get<int>();
  r.bandwidth_hz = j.at("W").get<double>();
  if (r.antennas < 1 || r.channels < 1 || !(r.bandwidth_hz > 0.0)) throw std::invalid_argument("invalid radio unit");
  return r;
}

nlohmann::json vehicle_to_json(const VehicleProfile& v) {
  return {{"id", v.id},
          {"pos", {v.position.x(), v.position.y()}},
          {"v_max", v.v_max},
          {"v_avg", v.v_avg},
          {"radius", v.coverage_radius_m},
          {"p", v.tx_power_w},
          {"comm_benefit", v.comm_benefit}};
}

VehicleProfile vehicle_from_json(const nlohmann::json& j) {
  VehicleProfile v;
  v.id = j.at("id").get<int>();
  v.position = Point(j.at("pos").at(0).get<double>(), j.at("pos").at(1).get<double>());
  v.v_max = j.at("v_max").get<double>();
  v.v_avg = j.at("v_avg").get<double>();
  v.coverage_radius_m = j.at("radius").get<double>();
  v.tx_power_w = j.at("p").get<double>();
  v.comm_benefit = j.value("comm_benefit", 0.0);
  v.validate();
  return v;
}

}  // namespace oranits
