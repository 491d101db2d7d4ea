#include "oranits/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace oranits {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.scenario, r.algo);
    if (!groups.contains(key)) keys.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<SummaryRow> out;
  for (const auto& key : keys) {
    const auto& g = groups[key];
    std::vector<double> f, c, b;
    for (const auto* r : g) {
      f.push_back(r->fitness);
      c.push_back(r->completed);
      b.push_back(r->total_benefit);
    }
    out.push_back({key.first, key.second, static_cast<int>(g.size()), mean_of(f), sample_std(f), mean_of(c), sample_std(c),
                   mean_of(b), sample_std(b)});
  }
  return out;
}

std::vector<WinnerRow> winners(const std::vector<SummaryRow>& summary) {
  std::vector<std::string> scenarios;
  for (const auto& s : summary)
    if (std::find(scenarios.begin(), scenarios.end(), s.scenario) == scenarios.end()) scenarios.push_back(s.scenario);

  struct Metric {
    const char* name;
    double SummaryRow::*field;
  };
  const Metric metrics[] = {{"fitness", &SummaryRow::fitness_mean},
                            {"completed", &SummaryRow::completed_mean},
                            {"total_benefit", &SummaryRow::benefit_mean}};
  std::vector<WinnerRow> out;
  for (const auto& sc : scenarios) {
    for (const auto& m : metrics) {
      WinnerRow w{sc, m.name, "", -std::numeric_limits<double>::infinity()};
      for (const auto& s : summary) {
        if (s.scenario != sc) continue;
        const double v = s.*(m.field);
        if (v > w.mean) {
          w.mean = v;
          w.algo = s.algo;
        } else if (v == w.mean) {
          w.algo += "+" + s.algo;
        }
      }
      out.push_back(w);
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

std::ostringstream csv_stream() {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10);
  return s;
}

void check_field(const std::string& s) {
  if (s.find_first_of(",\n\r\"") != std::string::npos) throw CsvError("field contains a delimiter: " + s);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

constexpr const char* kResultsHeader = "scenario,algo,seed,fitness,completed,total_benefit,wall_ms,generations";

}  // namespace

void write_results_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  auto s = csv_stream();
  s << kResultsHeader << '\n';
  for (const auto& r : rows) {
    check_field(r.scenario);
    check_field(r.algo);
    s << r.scenario << ',' << r.algo << ',' << r.seed << ',' << r.fitness << ',' << r.completed << ',' << r.total_benefit << ','
      << r.wall_ms << ',' << r.generations << '\n';
  }
  write_file_atomic(path, s.str());
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw CsvError("cannot read " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != kResultsHeader) throw CsvError("unexpected header in " + path.string());
  std::vector<ResultRow> rows;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 8) throw CsvError(path.string() + ":" + std::to_string(lineno) + ": expected 8 fields");
    try {
      rows.push_back({c[0], c[1], std::stoull(c[2]), std::stod(c[3]), std::stoi(c[4]), std::stod(c[5]), std::stod(c[6]),
                      std::stoi(c[7])});
    } catch (const std::logic_error&) {
      throw CsvError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  auto s = csv_stream();
  s << "scenario,algo,runs,fitness_mean,fitness_std,completed_mean,completed_std,total_benefit_mean,total_benefit_std\n";
  for (const auto& r : rows)
    s << r.scenario << ',' << r.algo << ',' << r.runs << ',' << r.fitness_mean << ',' << r.fitness_std << ',' << r.completed_mean
      << ',' << r.completed_std << ',' << r.benefit_mean << ',' << r.benefit_std << '\n';
  write_file_atomic(path, s.str());
}

void write_winners_csv(const std::vector<WinnerRow>& rows, const std::filesystem::path& path) {
  auto s = csv_stream();
  s << "scenario,metric,winner,mean\n";
  for (const auto& r : rows) s << r.scenario << ',' << r.metric << ',' << r.algo << ',' << r.mean << '\n';
  write_file_atomic(path, s.str());
}

void write_trace_csv(const std::vector<TraceRow>& trace, const std::filesystem::path& path) {
  auto s = csv_stream();
  s << "generation,best_fitness,mean_fitness,completed_at_best\n";
  for (const auto& t : trace) s << t.generation << ',' << t.best_fitness << ',' << t.mean_fitness << ',' << t.completed_at_best << '\n';
  write_file_atomic(path, s.str());
}

void write_train_trace_csv(const std::vector<TrainTraceRow>& trace, const std::filesystem::path& path) {
  auto s = csv_stream();
  s << "episode,epsilon,mean_reward,total_benefit,completed\n";
  for (const auto& t : trace)
    s << t.episode << ',' << t.epsilon << ',' << t.mean_reward << ',' << t.total_benefit << ',' << t.completed << '\n';
  write_file_atomic(path, s.str());
}

SolveOutput solve(const Scenario& scenario, const std::string& scenario_id, const std::string& algo,
                  const OptimizerConfig& config, const std::optional<Policy>& policy) {
  std::unique_ptr<Optimizer> opt;
  if (algo == "ddqn-infer") {
    if (!policy) throw MissingPolicy("ddqn-infer needs a policy checkpoint");
  } else {
    opt = make_optimizer(algo);
  }
  scenario.validate();

  SolveOutput out;
  out.row.scenario = scenario_id;
  out.row.algo = algo;
  out.row.seed = config.seed;
  out.row.generations = opt ? config.iters : 0;
  using clock = std::chrono::steady_clock;
  for (int r = 0; r < scenario.row_count(); ++r) {
    auto problem = build_row_problem(scenario, r);
    AssignmentSolution best;
    clock::duration elapsed{};
    if (opt) {
      auto cfg = config;
      if (r > 0) cfg.seed = substream_seed(config.seed, {static_cast<std::uint64_t>(r)});
      const auto t0 = clock::now();
      auto res = opt->run(problem, cfg);
      elapsed = clock::now() - t0;
      best = std::move(res.best);
      if (out.trace.empty()) out.trace.resize(res.trace.size());
      for (std::size_t g = 0; g < res.trace.size(); ++g) {
        out.trace[g].generation = res.trace[g].generation;
        out.trace[g].best_fitness += res.trace[g].best_fitness;
        out.trace[g].mean_fitness += res.trace[g].mean_fitness;
        out.trace[g].completed_at_best += res.trace[g].completed_at_best;
      }
    } else {
      MissionEnv env(scenario, problem);
      const auto t0 = clock::now();
      best = infer(*policy, env);
      elapsed = clock::now() - t0;
    }
    const auto rep = evaluate(best, problem);
    out.row.fitness += rep.fitness;
    out.row.completed += rep.completed_count;
    out.row.total_benefit += rep.total_benefit;
    out.row.wall_ms += std::chrono::duration<double, std::milli>(elapsed).count();
    out.solutions.push_back(std::move(best));
  }
  return out;
}

void ExperimentSpec::validate() const {
  if (algos.empty()) throw std::invalid_argument("at least one algorithm is required");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  optimizer.validate();
}

ExperimentOutput run_experiment(const Scenario& scenario, const ExperimentSpec& spec) {
  spec.validate();
  ExperimentOutput out;
  for (const auto& algo : spec.algos) {
    for (auto seed : spec.seeds) {
      auto cfg = spec.optimizer;
      cfg.seed = seed;
      auto res = solve(scenario, spec.scenario_id, algo, cfg, spec.policy);
      if (!spec.out_dir.empty() && !res.trace.empty())
        write_trace_csv(res.trace, spec.out_dir / ("trace_" + algo + "_" + std::to_string(seed) + ".csv"));
      out.rows.push_back(res.row);
    }
  }
  out.summary = summarize(out.rows);
  out.winners = winners(out.summary);
  if (!spec.out_dir.empty()) {
    write_results_csv(out.rows, spec.out_dir / "results.csv");
    write_summary_csv(out.summary, spec.out_dir / "summary.csv");
    write_winners_csv(out.winners, spec.out_dir / "winners.csv");
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  auto number = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad seed specification: " + text);
    return std::stoull(s);
  };
  std::vector<std::uint64_t> out;
  if (text.find(',') != std::string::npos) {
    for (const auto& part : split(text)) out.push_back(number(part));
    return out;
  }
  if (const auto dash = text.find('-'); dash != std::string::npos) {
    const auto lo = number(text.substr(0, dash));
    const auto hi = number(text.substr(dash + 1));
    if (hi < lo) throw std::invalid_argument("bad seed range: " + text);
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  const auto n = number(text);
  if (n == 0) throw std::invalid_argument("seed count must be positive");
  for (std::uint64_t s = 1; s <= n; ++s) out.push_back(s);
  return out;
}

}  // namespace oranits
