#pragma once

// Multi-agent double DQN for sequential mission selection. One Q-network per
// vehicle agent, one shared replay buffer, round-robin turns, and episode-end
// reward write-back once schedule outcomes are known.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "oranits/mlp.hpp"
#include "oranits/rng.hpp"
#include "oranits/schedule_eval.hpp"

namespace oranits {

using QNetwork = Mlp<double>;

/// Actions are 1-based.
struct Transition {
  Eigen::VectorXf obs;
  int action = 1;
  double reward = 0.0;
  Eigen::VectorXf next_obs;
  bool terminal = false;
  int agent = 0;
  std::uint64_t seq = 0;  ///< insertion counter
};

class EmptyBuffer : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// FIFO ring; storage grows lazily up to the capacity.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// min(n, size()) distinct transitions, uniformly at random.
  std::vector<const Transition*> sample(std::size_t n, Rng& rng) const;
  /// Oldest first.
  std::vector<const Transition*> contents() const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  ///< oldest slot once full
  std::uint64_t next_seq_ = 0;
  std::vector<Transition> data_;
};

/// Multi-agent turn-based environment. Rewards may be delayed: they are read
/// once per episode from episode_rewards(), one per step in step order.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual int num_agents() const = 0;
  virtual int action_count() const = 0;
  virtual int observation_size() const = 0;
  virtual void reset(Rng& rng) = 0;
  virtual bool done() const = 0;
  /// True when the episode ended in a genuine terminal state, not a cutoff.
  virtual bool terminal() const { return done(); }
  virtual int current_agent() const = 0;
  virtual Eigen::VectorXd observe(int agent) const = 0;
  virtual void step(int action, Rng& rng) = 0;
  virtual std::vector<double> episode_rewards() const = 0;
  virtual bool action_allowed(int /*action*/) const { return true; }
  virtual double episode_benefit() const { return 0.0; }
  virtual int episode_completed() const { return 0; }
};

struct RewardWeights {
  double g1 = 1.0;  ///< benefit coefficient
  double g2 = 0.5;  ///< remaining budget
  double g3 = 1.0;  ///< dependency bonus
  double g4 = 1.0;  ///< repeat penalty on benefit coefficient
  double g5 = 0.5;  ///< repeat penalty on budget
};

struct StepOutcome {
  bool repeat = false;     ///< mission was already assigned
  bool completed = false;  ///< resolved outcome of the picked mission
  double benefit_coeff = 0.0;
  double remaining_budget = 0.0;
  double budget = 0.0;
  int successors = 0;
  int predecessors = 0;
};

struct RewardParts {
  double base = 0.0;     ///< G1 M + G2 B_rem
  double share = 0.0;    ///< r_share
  double dep = 0.0;      ///< G3 r_dep
  double penalty = 0.0;  ///< -(G4 M + G5 B), non-positive

  double total() const { return base + share + dep + penalty; }
};

/// r_dep = (steps_per_agent - step)(|succ| - |pred| + 1), step 1-based.
double dependency_bonus(int step, int steps_per_agent, int successors, int predecessors);

/// Composite reward. `share` is the agent's r_share for the episode.
RewardParts compute_reward(const StepOutcome& o, double share, int step, int steps_per_agent, const RewardWeights& w);

enum class RewardMode {
  Composite,  ///< delayed outcomes with r_share and r_dep
  Immediate,  ///< outcome guessed at pick time from the agent's own queue only
};

struct MissionEnvConfig {
  RewardMode reward = RewardMode::Composite;
  RewardWeights weights;
  int road_edges = 64;                ///< nearest edges to the map centre in R(s)
  double overload_probability = 0.0;  ///< per-step MEC availability flips
};

/// Mission selection over one row of the mission matrix. Agent k drives
/// vehicle k+1; episodes last ceil(Z/K*) rounds.
class MissionEnv final : public Environment {
 public:
  MissionEnv(const Scenario& scenario, int row, MissionEnvConfig config = {});
  MissionEnv(const Scenario& scenario, RowProblem problem, MissionEnvConfig config = {});

  int num_agents() const override { return problem_.k_star; }
  int action_count() const override { return problem_.z; }
  int observation_size() const override;
  void reset(Rng& rng) override;
  bool done() const override { return turn_ >= total_turns(); }
  int current_agent() const override { return turn_ % problem_.k_star; }
  Eigen::VectorXd observe(int agent) const override;
  void step(int action, Rng& rng) override;
  std::vector<double> episode_rewards() const override;
  bool action_allowed(int action) const override;
  double episode_benefit() const override;
  int episode_completed() const override;

  int steps_per_agent() const { return (problem_.z + problem_.k_star - 1) / problem_.k_star; }
  int total_turns() const { return steps_per_agent() * problem_.k_star; }
  bool any_unassigned() const;
  const std::vector<bool>& assigned() const { return assigned_; }
  int repeat_count() const;

  /// Vehicle = acting agent + 1, order = running count per vehicle.
  AssignmentSolution solution() const;
  EvalReport outcome() const;
  /// Reward terms per step of the finished episode.
  std::vector<RewardParts> reward_breakdown() const;

  const RowProblem& problem() const { return problem_; }
  const MissionEnvConfig& config() const { return config_; }

 private:
  struct StepRecord {
    int agent = 0;
    int action = 0;
    int step = 0;  ///< agent's own 1-based step index
    bool repeat = false;
    double immediate = 0.0;
  };

  void build_static_features(const Scenario& scenario);

  RowProblem problem_;
  MissionEnvConfig config_;
  std::vector<Server> servers_;
  std::vector<Point> vehicle_home_;
  std::vector<double> vehicle_vmax_;
  std::vector<int> road_edges_;
  std::vector<int> edge_server_;  ///< nearest MEC per observed edge
  std::vector<TrafficStatus> edge_status_;
  Eigen::VectorXd mission_block_;  ///< start, end, cost, |pred|, |succ| per mission
  std::vector<Point> mission_end_;
  Point origin_ = Point::Zero();
  double scale_ = 1.0;

  int turn_ = 0;
  std::vector<bool> assigned_;
  std::vector<std::vector<int>> queues_;
  std::vector<StepRecord> records_;
};

/// Five-state deterministic chain: ends 0 and 4 are terminal and pay 0.5 and
/// 1 on entry; actions 1 = left, 2 = right; starts uniformly in {1, 2, 3}.
class ChainEnv final : public Environment {
 public:
  explicit ChainEnv(int max_steps = 50) : max_steps_(max_steps) {}

  static constexpr int kStates = 5;

  int num_agents() const override { return 1; }
  int action_count() const override { return 2; }
  int observation_size() const override { return kStates; }
  void reset(Rng& rng) override;
  bool done() const override { return terminal() || steps_ >= max_steps_; }
  bool terminal() const override { return state_ == 0 || state_ == kStates - 1; }
  int current_agent() const override { return 0; }
  Eigen::VectorXd observe(int agent) const override;
  void step(int action, Rng& rng) override;
  std::vector<double> episode_rewards() const override { return rewards_; }
  double episode_benefit() const override;

  void set_state(int s) { state_ = s; steps_ = 0; rewards_.clear(); }
  int state() const { return state_; }

 private:
  int max_steps_;
  int state_ = 2;
  int steps_ = 0;
  std::vector<double> rewards_;
};

struct TrainConfig {
  double gamma = 0.95;
  double lr = 1e-5;
  double epsilon_init = 1.0;
  double epsilon_decay = 0.99;
  double epsilon_min = 0.05;
  int batch = 512;
  std::size_t buffer = 10'000'000;
  int target_sync = 1000;  ///< gradient steps per agent between target copies
  int episodes = 1000;
  int hidden = 256;
  bool double_q = true;
  GradientRule rule = GradientRule::Adam;
  double reward_scale = 1.0;  ///< applied to stored rewards only

  void validate() const;
};

nlohmann::json train_config_to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});

struct QAgent {
  QNetwork online;
  QNetwork target;
  GradientOptimizer<double> opt;
  int updates = 0;
};

/// 1-based action: uniform with probability epsilon, else argmax (lowest
/// index on ties).
int select_action(const QNetwork& q, const Eigen::VectorXd& obs, double epsilon, Rng& rng);
int greedy_action(const Eigen::VectorXd& q_values);

/// One gradient step on the mean squared TD error; returns the loss.
/// Syncs the target network every `target_sync` updates.
double ddqn_update(QAgent& agent, const std::vector<const Transition*>& batch, const TrainConfig& config);

/// Regression targets the update would use, for inspection.
Eigen::VectorXd ddqn_targets(const QAgent& agent, const std::vector<const Transition*>& batch, const TrainConfig& config);

struct Policy {
  std::vector<QNetwork> nets;  ///< one per agent
  int observation_size() const { return nets.empty() ? 0 : nets.front().input_size(); }
  int action_count() const { return nets.empty() ? 0 : nets.front().output_size(); }
};

struct TrainTraceRow {
  int episode = 0;
  double epsilon = 0.0;
  double mean_reward = 0.0;
  double total_benefit = 0.0;
  int completed = 0;
};

struct TrainResult {
  Policy policy;
  std::vector<TrainTraceRow> trace;
};

TrainResult train(Environment& env, const TrainConfig& config, std::uint64_t seed);

/// Greedy rollout. With `mask_assigned`, agents skip already-assigned
/// missions while any remain.
AssignmentSolution infer(const Policy& policy, MissionEnv& env, bool mask_assigned = true);

/// Greedy single-step decision for any environment.
int policy_action(const Policy& policy, const Environment& env, bool mask = false);

class MissingPolicy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json policy_to_json(const Policy& p);
Policy policy_from_json(const nlohmann::json& j);
void save_policy(const Policy& p, const std::filesystem::path& path);
/// Throws MissingPolicy when the file does not exist.
Policy load_policy(const std::filesystem::path& path);

}  // namespace oranits
