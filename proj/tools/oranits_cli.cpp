#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oranits/bench.hpp"

namespace fs = std::filesystem;
using namespace oranits;

namespace {

nlohmann::json read_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config " + path);
  return nlohmann::json::parse(f);
}

OptimizerConfig optimizer_config(const nlohmann::json& cfg) {
  OptimizerConfig c;
  if (cfg.contains("optimizer")) {
    const auto& o = cfg.at("optimizer");
    c.pop = o.value("pop", c.pop);
    c.iters = o.value("iters", c.iters);
    c.rho = o.value("rho", c.rho);
    c.threads = o.value("threads", c.threads);
  }
  return c;
}

std::string scenario_id(const std::string& path) { return fs::path(path).stem().string(); }

std::string solution_json(const std::vector<AssignmentSolution>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& d : rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& a : d.slots) r.push_back({{"vehicle", a.vehicle}, {"order", a.order}});
    j.push_back(r);
  }
  return j.dump(1) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mission assignment and task offloading benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON config with scenario/optimizer/train sections")->check(CLI::ExistingFile);

  std::uint64_t seed = 1;
  std::string out = ".";
  std::string scenario_path;
  std::string policy_path;

  auto* gen = app.add_subcommand("generate", "Generate a scenario file");
  int z = 0, k_star = 0, missions = 0;
  gen->add_option("--seed", seed, "Scenario seed");
  gen->add_option("--out", out, "Output scenario file")->required();
  gen->add_option("--z", z, "Missions per row (Z)");
  gen->add_option("--k-star", k_star, "Vehicles per row (K*)");
  gen->add_option("--missions", missions, "Total number of missions");

  auto* solve_cmd = app.add_subcommand("solve", "Run one solver on a scenario");
  std::string algo = "cgg-aro";
  std::optional<int> iters, pop;
  solve_cmd->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--algo", algo, "cgg-aro, aro or ddqn-infer");
  solve_cmd->add_option("--seed", seed, "Solver seed");
  solve_cmd->add_option("--iters", iters, "Generations");
  solve_cmd->add_option("--pop", pop, "Population size");
  solve_cmd->add_option("--policy", policy_path, "Policy checkpoint for ddqn-infer");
  solve_cmd->add_option("--out", out, "Output directory");

  auto* train_cmd = app.add_subcommand("train", "Train MA-DDQN agents on a scenario row");
  std::optional<int> episodes;
  int row = 0;
  std::string reward = "composite";
  train_cmd->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--seed", seed, "Training seed");
  train_cmd->add_option("--episodes", episodes, "Episode count");
  train_cmd->add_option("--row", row, "Mission matrix row");
  train_cmd->add_option("--reward", reward, "composite or immediate")->check(CLI::IsMember({"composite", "immediate"}));
  train_cmd->add_option("--out", out, "Output directory");

  auto* cmp = app.add_subcommand("compare", "Multi-seed comparison with summary tables");
  std::vector<std::string> algos;
  std::string seeds = "15";
  std::vector<std::string> results;
  cmp->add_option("--scenario", scenario_path, "Scenario file")->check(CLI::ExistingFile);
  cmp->add_option("--algo", algos, "Algorithms (repeat or comma-separated)")->delimiter(',');
  cmp->add_option("--seeds", seeds, "Seed count (15), range (3-7) or list (1,4,9)");
  cmp->add_option("--iters", iters, "Generations");
  cmp->add_option("--pop", pop, "Population size");
  cmp->add_option("--policy", policy_path, "Policy checkpoint for ddqn-infer");
  cmp->add_option("--results", results, "Summarize existing results.csv files instead of running")->check(CLI::ExistingFile);
  cmp->add_option("--out", out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = read_config(config_path);

    if (*gen) {
      const auto sc = cfg.value("scenario", nlohmann::json::object());
      auto params = params_from_json(sc);
      if (z > 0) params.missions.z = z;
      if (k_star > 0) params.k_star = k_star;
      if (missions > 0)
        params.missions.num_missions = missions;
      else if (!sc.contains("num_missions"))
        params.missions.num_missions = params.missions.z;
      const auto s = generate_scenario(seed, params);
      if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
      save_scenario(s, out);
      std::cout << "wrote " << out << ": " << s.missions.size() << " missions, " << s.vehicles.size() << " vehicles, "
                << s.servers.size() << " servers\n";
      return 0;
    }

    if (*solve_cmd) {
      const auto s = load_scenario(scenario_path);
      auto oc = optimizer_config(cfg);
      if (iters) oc.iters = *iters;
      if (pop) oc.pop = *pop;
      oc.seed = seed;
      std::optional<Policy> policy;
      if (algo == "ddqn-infer") {
        if (policy_path.empty()) throw MissingPolicy("ddqn-infer needs --policy");
        policy = load_policy(policy_path);
      }
      auto res = solve(s, scenario_id(scenario_path), algo, oc, policy);
      const fs::path dir(out);
      write_results_csv({res.row}, dir / "results.csv");
      if (!res.trace.empty()) write_trace_csv(res.trace, dir / ("trace_" + algo + "_" + std::to_string(seed) + ".csv"));
      write_file_atomic(dir / ("solution_" + algo + "_" + std::to_string(seed) + ".json"), solution_json(res.solutions));
      std::cout << algo << " seed " << seed << ": fitness " << res.row.fitness << ", completed " << res.row.completed
                << ", total benefit " << res.row.total_benefit << ", " << res.row.wall_ms << " ms\n";
      return 0;
    }

    if (*train_cmd) {
      const auto s = load_scenario(scenario_path);
      auto tc = train_config_from_json(cfg.value("train", nlohmann::json::object()));
      if (episodes) tc.episodes = *episodes;
      MissionEnvConfig ec;
      ec.reward = reward == "immediate" ? RewardMode::Immediate : RewardMode::Composite;
      MissionEnv env(s, row, ec);
      auto res = train(env, tc, seed);
      const fs::path dir(out);
      fs::create_directories(dir);
      save_policy(res.policy, dir / "policy.json");
      write_train_trace_csv(res.trace, dir / "train_trace.csv");
      const auto d = infer(res.policy, env);
      const auto rep = evaluate(d, env.problem());
      std::cout << "trained " << tc.episodes << " episodes; greedy rollout: fitness " << rep.fitness << ", completed "
                << rep.completed_count << ", total benefit " << rep.total_benefit << "\n";
      return 0;
    }

    if (*cmp) {
      const fs::path dir(out);
      if (!results.empty()) {
        std::vector<ResultRow> rows;
        for (const auto& r : results)
          for (auto& x : read_results_csv(r)) rows.push_back(std::move(x));
        const auto summary = summarize(rows);
        write_summary_csv(summary, dir / "summary.csv");
        write_winners_csv(winners(summary), dir / "winners.csv");
        std::cout << "summarized " << rows.size() << " rows into " << (dir / "summary.csv").string() << "\n";
        return 0;
      }
      if (scenario_path.empty()) throw std::invalid_argument("compare needs --scenario or --results");
      if (algos.size() < 2) throw std::invalid_argument("compare needs at least two algorithms");
      const auto s = load_scenario(scenario_path);
      ExperimentSpec spec;
      spec.scenario_id = scenario_id(scenario_path);
      spec.algos = algos;
      spec.seeds = parse_seeds(seeds);
      spec.optimizer = optimizer_config(cfg);
      if (iters) spec.optimizer.iters = *iters;
      if (pop) spec.optimizer.pop = *pop;
      if (!policy_path.empty()) spec.policy = load_policy(policy_path);
      spec.out_dir = dir;
      const auto res = run_experiment(s, spec);
      std::cout << "algo,runs,fitness_mean,fitness_std,completed_mean,total_benefit_mean\n";
      for (const auto& r : res.summary)
        std::cout << r.algo << ',' << r.runs << ',' << r.fitness_mean << ',' << r.fitness_std << ',' << r.completed_mean << ','
                  << r.benefit_mean << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
