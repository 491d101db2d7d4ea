#include "oranits/ma_ddqn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_set>

namespace oranits {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  t.seq = next_seq_++;
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
    return;
  }
  data_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  const std::size_t size = data_.size();
  n = std::min(n, size);
  std::vector<const Transition*> out;
  out.reserve(n);
  std::unordered_set<std::size_t> chosen;
  chosen.reserve(2 * n);
  // Floyd's subset sampling: n distinct indices in O(n).
  for (std::size_t j = size - n; j < size; ++j) {
    std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    if (!chosen.insert(t).second) {
      t = j;
      chosen.insert(t);
    }
    out.push_back(&data_[t]);
  }
  return out;
}

std::vector<const Transition*> ReplayBuffer::contents() const {
  std::vector<const Transition*> out;
  out.reserve(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) out.push_back(&data_[(head_ + i) % data_.size()]);
  return out;
}

double dependency_bonus(int step, int steps_per_agent, int successors, int predecessors) {
  return static_cast<double>(steps_per_agent - step) * static_cast<double>(successors - predecessors + 1);
}

RewardParts compute_reward(const StepOutcome& o, double share, int step, int steps_per_agent, const RewardWeights& w) {
  RewardParts r;
  if (o.repeat) {
    r.penalty = -(w.g4 * o.benefit_coeff + w.g5 * o.budget);
    return r;
  }
  if (!o.completed) return r;
  r.base = w.g1 * o.benefit_coeff + w.g2 * o.remaining_budget;
  r.share = share;
  r.dep = w.g3 * dependency_bonus(step, steps_per_agent, o.successors, o.predecessors);
  return r;
}

MissionEnv::MissionEnv(const Scenario& scenario, int row, MissionEnvConfig config)
    : MissionEnv(scenario, build_row_problem(scenario, row), config) {}

MissionEnv::MissionEnv(const Scenario& scenario, RowProblem problem, MissionEnvConfig config)
    : problem_(std::move(problem)), config_(config) {
  if (config_.road_edges < 0) throw std::invalid_argument("road_edges must be >= 0");
  if (static_cast<int>(scenario.vehicles.size()) < problem_.k_star) throw InvalidScenario("fewer vehicles than K*");
  build_static_features(scenario);
  assigned_.assign(static_cast<std::size_t>(problem_.z), false);
  queues_.assign(static_cast<std::size_t>(problem_.k_star), {});
}

void MissionEnv::build_static_features(const Scenario& scenario) {
  const auto& g = scenario.graph;
  servers_ = scenario.servers;
  Point lo = Point::Constant(std::numeric_limits<double>::infinity());
  Point hi = -lo;
  for (const auto& p : g.nodes()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  if (g.node_count() == 0) lo = hi = Point::Zero();
  origin_ = lo;
  scale_ = g.extent();
  const Point centre = 0.5 * (lo + hi);
  auto norm = [&](const Point& p) -> Point { return (p - origin_) / scale_; };

  std::vector<std::pair<double, int>> by_dist;
  for (const auto& e : g.edges()) by_dist.emplace_back((0.5 * (g.node(e.a) + g.node(e.b)) - centre).norm(), e.id);
  std::sort(by_dist.begin(), by_dist.end());
  by_dist.resize(std::min(by_dist.size(), static_cast<std::size_t>(config_.road_edges)));
  for (const auto& [d, id] : by_dist) {
    road_edges_.push_back(id);
    edge_status_.push_back(g.edge(id).status);
    const auto& e = g.edge(id);
    const Point mid = 0.5 * (g.node(e.a) + g.node(e.b));
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < servers_.size(); ++s) {
      if (servers_[s].kind != ServerKind::MEC) continue;
      const double dd = (servers_[s].position - mid).norm();
      if (dd < best_d) {
        best_d = dd;
        best = static_cast<int>(s);
      }
    }
    edge_server_.push_back(best);
  }

  double vmax = 0.0;
  for (int k = 0; k < problem_.k_star; ++k) {
    vehicle_home_.push_back(norm(scenario.vehicles[static_cast<std::size_t>(k)].position));
    vmax = std::max(vmax, scenario.vehicles[static_cast<std::size_t>(k)].v_max);
  }
  for (int k = 0; k < problem_.k_star; ++k)
    vehicle_vmax_.push_back(vmax > 0.0 ? scenario.vehicles[static_cast<std::size_t>(k)].v_max / vmax : 0.0);

  const auto z = static_cast<std::size_t>(problem_.z);
  double max_cost = 0.0;
  for (const auto& r : problem_.routes) max_cost = std::max(max_cost, r.adjusted_cost);
  std::vector<int> succ(z, 0);
  for (std::size_t i = 0; i < z; ++i)
    for (int p : problem_.preds[i]) ++succ[static_cast<std::size_t>(p)];

  mission_block_.setZero(static_cast<Eigen::Index>(7 * z));
  mission_end_.assign(z, norm(centre));
  for (std::size_t i = 0; i < z; ++i) {
    const auto& m = problem_.missions[i];
    if (m.padding) continue;
    const Point s = norm(g.node(m.start_node));
    const Point e = norm(g.node(m.end_node));
    mission_end_[i] = e;
    auto blk = mission_block_.segment(static_cast<Eigen::Index>(7 * i), 7);
    blk << s.x(), s.y(), e.x(), e.y(), max_cost > 0.0 ? problem_.routes[i].adjusted_cost / max_cost : 0.0,
        static_cast<double>(problem_.preds[i].size()) / problem_.z, static_cast<double>(succ[i]) / problem_.z;
  }
}

int MissionEnv::observation_size() const {
  return problem_.z + 2 * static_cast<int>(road_edges_.size()) + 5 * problem_.k_star + 8 * problem_.z;
}

void MissionEnv::reset(Rng& /*rng*/) {
  turn_ = 0;
  std::fill(assigned_.begin(), assigned_.end(), false);
  for (auto& q : queues_) q.clear();
  records_.clear();
  for (auto& s : servers_) s.available = true;
}

Eigen::VectorXd MissionEnv::observe(int agent) const {
  if (agent < 0 || agent >= problem_.k_star) throw std::out_of_range("agent index out of range");
  const int z = problem_.z;
  Eigen::VectorXd o(observation_size());
  Eigen::Index at = 0;
  for (int i = 0; i < z; ++i) o[at++] = assigned_[static_cast<std::size_t>(i)] ? 1.0 : 0.0;

  for (std::size_t e = 0; e < road_edges_.size(); ++e) {
    o[at++] = static_cast<double>(edge_status_[e]) / (kTrafficLevels - 1);
    const int s = edge_server_[e];
    o[at++] = s >= 0 && servers_[static_cast<std::size_t>(s)].available ? 1.0 : 0.0;
  }

  for (int r = 0; r < problem_.k_star; ++r) {
    const auto k = static_cast<std::size_t>((agent + r) % problem_.k_star);
    const auto& q = queues_[k];
    const Point pos = q.empty() ? vehicle_home_[k] : mission_end_[static_cast<std::size_t>(q.back())];
    int blocked = 0;
    for (int m : q)
      for (int p : problem_.preds[static_cast<std::size_t>(m)])
        if (!assigned_[static_cast<std::size_t>(p)]) {
          ++blocked;
          break;
        }
    o[at++] = pos.x();
    o[at++] = pos.y();
    o[at++] = static_cast<double>(blocked) / z;
    o[at++] = static_cast<double>(q.size()) / z;
    o[at++] = vehicle_vmax_[k];
  }

  for (int i = 0; i < z; ++i) {
    o.segment(at, 7) = mission_block_.segment(7 * i, 7);
    at += 7;
    bool ready = true;
    for (int p : problem_.preds[static_cast<std::size_t>(i)]) ready = ready && assigned_[static_cast<std::size_t>(p)];
    o[at++] = ready ? 1.0 : 0.0;
  }
  return o;
}

void MissionEnv::step(int action, Rng& rng) {
  if (done()) throw std::logic_error("episode already finished");
  if (action < 1 || action > problem_.z) throw std::out_of_range("action out of range");
  const int k = current_agent();
  const auto a = static_cast<std::size_t>(action - 1);
  const auto& m = problem_.missions[a];
  const auto& w = config_.weights;

  StepRecord rec{k, action, turn_ / problem_.k_star + 1, assigned_[a], 0.0};
  if (rec.repeat) {
    rec.immediate = -(w.g4 * m.benefit_coeff + w.g5 * m.budget);
  } else {
    assigned_[a] = true;
    auto& q = queues_[static_cast<std::size_t>(k)];
    q.push_back(static_cast<int>(a));
    if (m.padding) {
      rec.immediate = 0.0;
    } else {
      double finish = 0.0;
      for (int i : q) finish += problem_.delays[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].total_s;
      const double rem = m.budget - problem_.delays[a][static_cast<std::size_t>(k)].offload_cost;
      if (finish <= m.deadline_s && rem >= 0.0) rec.immediate = w.g1 * m.benefit_coeff + w.g2 * rem;
    }
  }
  records_.push_back(rec);
  ++turn_;
  if (config_.overload_probability > 0.0) toggle_availability(servers_, config_.overload_probability, rng);
}

bool MissionEnv::action_allowed(int action) const {
  return action >= 1 && action <= problem_.z && !assigned_[static_cast<std::size_t>(action - 1)];
}

bool MissionEnv::any_unassigned() const { return std::find(assigned_.begin(), assigned_.end(), false) != assigned_.end(); }

int MissionEnv::repeat_count() const {
  return static_cast<int>(std::count_if(records_.begin(), records_.end(), [](const StepRecord& r) { return r.repeat; }));
}

AssignmentSolution MissionEnv::solution() const {
  AssignmentSolution d(static_cast<std::size_t>(problem_.z));
  for (std::size_t k = 0; k < queues_.size(); ++k)
    for (std::size_t j = 0; j < queues_[k].size(); ++j)
      d[static_cast<std::size_t>(queues_[k][j])] = {static_cast<int>(k) + 1, static_cast<int>(j) + 1};
  return d;
}

EvalReport MissionEnv::outcome() const { return evaluate(solution(), problem_); }

std::vector<RewardParts> MissionEnv::reward_breakdown() const {
  const auto rep = outcome();
  const auto& w = config_.weights;
  std::vector<double> share(queues_.size(), 0.0);
  for (std::size_t k = 0; k < queues_.size(); ++k) {
    if (queues_[k].empty()) continue;
    double sum = 0.0;
    for (int i : queues_[k]) {
      const auto u = static_cast<std::size_t>(i);
      if (rep.completed[u] && !problem_.missions[u].padding)
        sum += w.g1 * problem_.missions[u].benefit_coeff + w.g2 * rep.remaining_budget[u];
    }
    share[k] = sum / static_cast<double>(queues_[k].size());
  }

  std::vector<RewardParts> out;
  out.reserve(records_.size());
  for (const auto& r : records_) {
    const auto a = static_cast<std::size_t>(r.action - 1);
    const auto& m = problem_.missions[a];
    StepOutcome o;
    o.repeat = r.repeat;
    o.completed = !r.repeat && rep.completed[a];
    o.benefit_coeff = m.benefit_coeff;
    o.remaining_budget = m.padding ? 0.0 : rep.remaining_budget[a];
    o.budget = m.budget;
    o.predecessors = static_cast<int>(problem_.preds[a].size());
    o.successors = 0;
    for (const auto& p : problem_.preds)
      o.successors += static_cast<int>(std::count(p.begin(), p.end(), static_cast<int>(a)));
    out.push_back(compute_reward(o, share[static_cast<std::size_t>(r.agent)], r.step, steps_per_agent(), w));
  }
  return out;
}

std::vector<double> MissionEnv::episode_rewards() const {
  std::vector<double> out;
  out.reserve(records_.size());
  if (config_.reward == RewardMode::Immediate) {
    for (const auto& r : records_) out.push_back(r.immediate);
    return out;
  }
  for (const auto& p : reward_breakdown()) out.push_back(p.total());
  return out;
}

double MissionEnv::episode_benefit() const { return outcome().total_benefit; }
int MissionEnv::episode_completed() const { return outcome().completed_count; }

void ChainEnv::reset(Rng& rng) {
  state_ = std::uniform_int_distribution<int>(1, kStates - 2)(rng);
  steps_ = 0;
  rewards_.clear();
}

Eigen::VectorXd ChainEnv::observe(int /*agent*/) const {
  Eigen::VectorXd o = Eigen::VectorXd::Zero(kStates);
  o[state_] = 1.0;
  return o;
}

void ChainEnv::step(int action, Rng& /*rng*/) {
  if (done()) throw std::logic_error("episode already finished");
  if (action != 1 && action != 2) throw std::out_of_range("action out of range");
  state_ += action == 1 ? -1 : 1;
  ++steps_;
  rewards_.push_back(state_ == 0 ? 0.5 : state_ == kStates - 1 ? 1.0 : 0.0);
}

double ChainEnv::episode_benefit() const {
  double s = 0.0;
  for (double r : rewards_) s += r;
  return s;
}

void TrainConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(epsilon_min >= 0.0 && epsilon_min <= epsilon_init && epsilon_init <= 1.0))
    throw std::invalid_argument("epsilon must satisfy 0 <= min <= init <= 1");
  if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) throw std::invalid_argument("epsilon decay must lie in (0, 1]");
  if (batch < 1 || buffer < 1 || target_sync < 1 || episodes < 0 || hidden < 1)
    throw std::invalid_argument("batch, buffer, target_sync and hidden must be positive");
}

nlohmann::json train_config_to_json(const TrainConfig& c) {
  return {{"gamma", c.gamma},
          {"lr", c.lr},
          {"epsilon_init", c.epsilon_init},
          {"epsilon_decay", c.epsilon_decay},
          {"epsilon_min", c.epsilon_min},
          {"batch", c.batch},
          {"buffer", c.buffer},
          {"target_sync", c.target_sync},
          {"episodes", c.episodes},
          {"hidden", c.hidden},
          {"double_q", c.double_q},
          {"optimizer", c.rule == GradientRule::Adam ? "adam" : "sgd"},
          {"reward_scale", c.reward_scale}};
}

TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig c) {
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("gamma", c.gamma);
  get("lr", c.lr);
  get("epsilon_init", c.epsilon_init);
  get("epsilon_decay", c.epsilon_decay);
  get("epsilon_min", c.epsilon_min);
  get("batch", c.batch);
  get("buffer", c.buffer);
  get("target_sync", c.target_sync);
  get("episodes", c.episodes);
  get("hidden", c.hidden);
  get("double_q", c.double_q);
  get("reward_scale", c.reward_scale);
  if (j.contains("optimizer")) {
    const auto o = j.at("optimizer").get<std::string>();
    if (o == "adam") c.rule = GradientRule::Adam;
    else if (o == "sgd") c.rule = GradientRule::Sgd;
    else throw std::invalid_argument("unknown optimizer: " + o);
  }
  c.validate();
  return c;
}

int greedy_action(const Eigen::VectorXd& q) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < q.size(); ++i)
    if (q[i] > q[best]) best = i;
  return static_cast<int>(best) + 1;
}

int select_action(const QNetwork& q, const Eigen::VectorXd& obs, double epsilon, Rng& rng) {
  if (epsilon > 0.0 && uniform01(rng) < epsilon)
    return std::uniform_int_distribution<int>(1, q.output_size())(rng);
  return greedy_action(q.forward(obs));
}

namespace {

Eigen::MatrixXd stack(const std::vector<const Transition*>& batch, bool next) {
  const auto& first = next ? batch.front()->next_obs : batch.front()->obs;
  Eigen::MatrixXd x(first.size(), static_cast<Eigen::Index>(batch.size()));
  for (std::size_t j = 0; j < batch.size(); ++j)
    x.col(static_cast<Eigen::Index>(j)) = (next ? batch[j]->next_obs : batch[j]->obs).cast<double>();
  return x;
}

}  // namespace

Eigen::VectorXd ddqn_targets(const QAgent& agent, const std::vector<const Transition*>& batch, const TrainConfig& config) {
  const auto n = static_cast<Eigen::Index>(batch.size());
  Eigen::VectorXd y(n);
  for (Eigen::Index j = 0; j < n; ++j) y[j] = batch[static_cast<std::size_t>(j)]->reward;
  if (config.gamma == 0.0) return y;

  const auto x_next = stack(batch, true);
  const Eigen::MatrixXd q_target = agent.target.forward(x_next);
  Eigen::MatrixXd q_online;
  if (config.double_q) q_online = agent.online.forward(x_next);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (batch[static_cast<std::size_t>(j)]->terminal) continue;
    double boot;
    if (config.double_q) {
      boot = q_target(greedy_action(q_online.col(j)) - 1, j);
    } else {
      boot = q_target.col(j).maxCoeff();
    }
    y[j] += config.gamma * boot;
  }
  return y;
}

double ddqn_update(QAgent& agent, const std::vector<const Transition*>& batch, const TrainConfig& config) {
  if (batch.empty()) throw EmptyBuffer("cannot update from an empty batch");
  const auto y = ddqn_targets(agent, batch, config);
  const auto x = stack(batch, false);
  QNetwork::Cache cache;
  const Eigen::MatrixXd q = agent.online.forward(x, cache);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  Eigen::MatrixXd d_out = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  double loss = 0.0;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const int a = batch[static_cast<std::size_t>(j)]->action - 1;
    const double diff = q(a, j) - y[j];
    d_out(a, j) = 2.0 * diff * inv_n;
    loss += diff * diff * inv_n;
  }
  agent.opt.step(agent.online, agent.online.backward(x, cache, d_out));
  if (++agent.updates % config.target_sync == 0) agent.target = agent.online;
  return loss;
}

namespace {

enum StreamTag : std::uint64_t { kNetInit = 0x2001, kEpisode = 0x2002, kSample = 0x2003 };

}  // namespace

TrainResult train(Environment& env, const TrainConfig& config, std::uint64_t seed) {
  config.validate();
  const int agents_n = env.num_agents();
  const int obs_n = env.observation_size();
  const int act_n = env.action_count();

  std::vector<QAgent> agents;
  for (int k = 0; k < agents_n; ++k) {
    auto rng = substream(seed, {kNetInit, static_cast<std::uint64_t>(k)});
    QAgent a;
    a.online = QNetwork::lecun(obs_n, config.hidden, act_n, rng);
    a.target = a.online;
    a.opt = GradientOptimizer<double>(a.online, config.lr, config.rule);
    agents.push_back(std::move(a));
  }

  ReplayBuffer buffer(config.buffer);
  auto sample_rng = substream(seed, {kSample});
  TrainResult result;
  result.trace.reserve(static_cast<std::size_t>(config.episodes));
  double epsilon = config.epsilon_init;

  struct Pending {
    int agent;
    Eigen::VectorXf obs;
    int action;
    Eigen::VectorXf next_obs;
  };
  std::vector<Pending> steps;
  for (int e = 0; e < config.episodes; ++e) {
    auto rng = substream(seed, {kEpisode, static_cast<std::uint64_t>(e)});
    env.reset(rng);
    steps.clear();
    std::vector<int> last(static_cast<std::size_t>(agents_n), -1);
    while (!env.done()) {
      const int k = env.current_agent();
      const Eigen::VectorXd obs = env.observe(k);
      if (last[static_cast<std::size_t>(k)] >= 0)
        steps[static_cast<std::size_t>(last[static_cast<std::size_t>(k)])].next_obs = obs.cast<float>();
      const int a = select_action(agents[static_cast<std::size_t>(k)].online, obs, epsilon, rng);
      env.step(a, rng);
      last[static_cast<std::size_t>(k)] = static_cast<int>(steps.size());
      steps.push_back({k, obs.cast<float>(), a, {}});
    }
    for (int k = 0; k < agents_n; ++k)
      if (last[static_cast<std::size_t>(k)] >= 0)
        steps[static_cast<std::size_t>(last[static_cast<std::size_t>(k)])].next_obs = env.observe(k).cast<float>();

    const auto rewards = env.episode_rewards();
    if (rewards.size() != steps.size()) throw std::logic_error("environment returned the wrong number of rewards");
    for (std::size_t i = 0; i < steps.size(); ++i) {
      auto& s = steps[i];
      const bool final_turn = last[static_cast<std::size_t>(s.agent)] == static_cast<int>(i);
      buffer.push({s.obs, s.action, rewards[i] * config.reward_scale, s.next_obs, final_turn && env.terminal(), s.agent, 0});
    }
    for (const auto& s : steps)
      ddqn_update(agents[static_cast<std::size_t>(s.agent)], buffer.sample(static_cast<std::size_t>(config.batch), sample_rng), config);

    double mean = 0.0;
    for (double r : rewards) mean += r;
    if (!rewards.empty()) mean /= static_cast<double>(rewards.size());
    result.trace.push_back({e + 1, epsilon, mean, env.episode_benefit(), env.episode_completed()});
    epsilon = std::max(config.epsilon_min, epsilon * config.epsilon_decay);
  }

  for (auto& a : agents) result.policy.nets.push_back(std::move(a.online));
  return result;
}

int policy_action(const Policy& policy, const Environment& env, bool mask) {
  const int k = env.current_agent();
  const Eigen::VectorXd q = policy.nets.at(static_cast<std::size_t>(k)).forward(env.observe(k));
  if (!mask) return greedy_action(q);
  int best = 0;
  for (int a = 1; a <= static_cast<int>(q.size()); ++a)
    if (env.action_allowed(a) && (best == 0 || q[a - 1] > q[best - 1])) best = a;
  return best == 0 ? greedy_action(q) : best;
}

AssignmentSolution infer(const Policy& policy, MissionEnv& env, bool mask_assigned) {
  if (static_cast<int>(policy.nets.size()) != env.num_agents() || policy.observation_size() != env.observation_size() ||
      policy.action_count() != env.action_count())
    throw std::invalid_argument("policy shape does not match the environment");
  Rng rng(0);
  env.reset(rng);
  while (!env.done()) env.step(policy_action(policy, env, mask_assigned && env.any_unassigned()), rng);
  return env.solution();
}

nlohmann::json policy_to_json(const Policy& p) {
  if (p.nets.empty()) throw std::invalid_argument("empty policy");
  nlohmann::json params = nlohmann::json::array();
  for (const auto& n : p.nets) params.push_back(n.flat());
  return {{"format", "oranits-policy"},
          {"version", 1},
          {"agents", p.nets.size()},
          {"input", p.observation_size()},
          {"hidden", p.nets.front().hidden_size()},
          {"output", p.action_count()},
          {"activations", {"selu", "elu", "linear"}},
          {"params", params}};
}

Policy policy_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "oranits-policy") throw std::invalid_argument("not a policy checkpoint");
  if (j.at("version").get<int>() != 1) throw std::invalid_argument("unsupported policy version");
  const int agents = j.at("agents").get<int>();
  const int in = j.at("input").get<int>();
  const int hidden = j.at("hidden").get<int>();
  const int out = j.at("output").get<int>();
  const auto& params = j.at("params");
  if (static_cast<int>(params.size()) != agents) throw std::invalid_argument("agent count mismatch");
  Policy p;
  for (const auto& flat : params) {
    QNetwork n(in, hidden, out);
    n.set_flat(flat.get<std::vector<double>>());
    p.nets.push_back(std::move(n));
  }
  return p;
}

void save_policy(const Policy& p, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << policy_to_json(p).dump() << '\n';
}

Policy load_policy(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw MissingPolicy("policy checkpoint not found: " + path.string());
  std::ifstream f(path);
  return policy_from_json(nlohmann::json::parse(f));
}

}  // namespace oranits
