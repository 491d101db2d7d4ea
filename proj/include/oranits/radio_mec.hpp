#pragma once

// FDMA uplink, MEC/cloud servers, offloading delays/costs and the greedy
// offloading policy.

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "oranits/missions.hpp"
#include "oranits/rng.hpp"

namespace oranits {

using Point = Eigen::Vector2d;

enum class ServerKind { MEC, Cloud };

struct Server {
  int id = 0;
  ServerKind kind = ServerKind::MEC;
  Point position = Point::Zero();  ///< ignored for the cloud
  double capacity_hz = 1.0e10;
  double unit_cost = 1.0;  ///< currency per second of offloading
  bool available = true;
};

struct RadioUnit {
  int id = 0;
  Point position = Point::Zero();
  int antennas = 16;
  int channels = 10;
  double bandwidth_hz = 10.0e6;

  double channel_bandwidth_hz() const { return bandwidth_hz / channels; }
};

struct VehicleProfile {
  int id = 0;
  Point position = Point::Zero();
  double v_max = 20.0;
  double v_avg = 20.0;
  double coverage_radius_m = 1500.0;
  double tx_power_w = 0.199526;
  double comm_benefit = 0.0;  ///< per-vehicle communication benefit, counted once if it completes anything

  void validate() const;
};

struct RadioParams {
  double noise_psd_w_per_hz = 3.981071705534972e-21;  ///< -174 dBm/Hz
  double fiber_rate_bps = 150.0e9;
  double path_loss_exponent = 3.0;
  double min_distance_m = 1.0;  ///< vehicle-to-RU distance floor
};

class InvalidDistance : public std::domain_error {
 public:
  InvalidDistance() : std::domain_error("channel distance must be positive") {}
};

/// ||h||^2 = d^-3 * sum of per-antenna fading powers.
double channel_gain_from_fading(double distance_m, std::span<const double> fading, double exponent = 3.0);

/// Per-antenna exponential power fading with mean d^-3; sum over E antennas.
double channel_gain(double distance_m, int antennas, Rng& rng, double exponent = 3.0);

/// Shannon rate W_c log2(1 + p g / (W_c N0)) in bits/s.
double uplink_throughput(double tx_power_w, double gain, double channel_bw_hz, double noise_psd);

inline double fiber_delay(double alpha_bits, double fiber_rate_bps) { return alpha_bits / fiber_rate_bps; }

/// alpha/R, plus the fiber hop for the cloud.
double comm_delay(const OffloadTask& task, const Server& server, double rate_bps, double fiber_rate_bps);

inline double comp_delay(const OffloadTask& task, const Server& server) { return task.beta_cycles / server.capacity_hz; }

struct OffloadOption {
  int server_id = -1;
  double comm_s = 0.0;
  double comp_s = 0.0;
  double total_s = 0.0;
  double cost = 0.0;
};

/// RU used to reach a server: the RU nearest the MEC site, or for the cloud
/// the RU nearest the vehicle. Lowest id wins ties.
int nearest_ru(const std::vector<RadioUnit>& rus, const Point& p);

/// Latency/cost for every candidate the greedy policy considers: in-range
/// available MEC servers (in server order) followed by the cloud. One
/// channel draw per candidate, in that order.
std::vector<OffloadOption> offload_candidates(const VehicleProfile& vehicle, const OffloadTask& task,
                                              const std::vector<Server>& servers, const std::vector<RadioUnit>& rus,
                                              const RadioParams& params, Rng& rng);

/// Minimum-latency candidate; equal latency goes to the lower server id.
/// Throws std::invalid_argument when the cloud server is missing.
OffloadOption greedy_offload(const VehicleProfile& vehicle, const OffloadTask& task, const std::vector<Server>& servers,
                             const std::vector<RadioUnit>& rus, const RadioParams& params, Rng& rng);

/// Flips each MEC server to overloaded with the given probability.
void toggle_availability(std::vector<Server>& servers, double overload_probability, Rng& rng);

nlohmann::json server_to_json(const Server& s);
Server server_from_json(const nlohmann::json& j);
nlohmann::json ru_to_json(const RadioUnit& r);
RadioUnit ru_from_json(const nlohmann::json& j);
nlohmann::json vehicle_to_json(const VehicleProfile& v);
VehicleProfile vehicle_from_json(const nlohmann::json& j);

}  // namespace oranits
