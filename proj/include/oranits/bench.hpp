#pragma once

// Benchmark harness: solver runs, result/summary/trace CSV files and
// multi-seed comparisons.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oranits/ma_ddqn.hpp"
#include "oranits/metaheuristics.hpp"

namespace oranits {

struct ResultRow {
  std::string scenario;
  std::string algo;
  std::uint64_t seed = 0;
  double fitness = 0.0;
  int completed = 0;
  double total_benefit = 0.0;
  double wall_ms = 0.0;
  int generations = 0;  ///< generations, or 0 for policy inference
};

struct SummaryRow {
  std::string scenario;
  std::string algo;
  int runs = 0;
  double fitness_mean = 0.0, fitness_std = 0.0;
  double completed_mean = 0.0, completed_std = 0.0;
  double benefit_mean = 0.0, benefit_std = 0.0;
};

struct WinnerRow {
  std::string scenario;
  std::string metric;  ///< fitness, completed or total_benefit
  std::string algo;    ///< ties joined with '+'
  double mean = 0.0;
};

/// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_std(const std::vector<double>& v);
double mean_of(const std::vector<double>& v);

/// Grouped by (scenario, algo) in order of first appearance.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
std::vector<WinnerRow> winners(const std::vector<SummaryRow>& summary);

void write_results_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);
void write_winners_csv(const std::vector<WinnerRow>& rows, const std::filesystem::path& path);
void write_trace_csv(const std::vector<TraceRow>& trace, const std::filesystem::path& path);
void write_train_trace_csv(const std::vector<TrainTraceRow>& trace, const std::filesystem::path& path);

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveOutput {
  ResultRow row;
  std::vector<TraceRow> trace;               ///< summed over matrix rows
  std::vector<AssignmentSolution> solutions;  ///< one per matrix row
};

/// Runs `algo` (cgg-aro, aro or ddqn-infer) on every row of the scenario and
/// sums fitness, completions and benefit. Wall time covers the solver only.
SolveOutput solve(const Scenario& scenario, const std::string& scenario_id, const std::string& algo,
                  const OptimizerConfig& config, const std::optional<Policy>& policy = std::nullopt);

struct ExperimentSpec {
  std::string scenario_id;
  std::vector<std::string> algos;
  std::vector<std::uint64_t> seeds;
  OptimizerConfig optimizer;
  std::optional<Policy> policy;
  std::filesystem::path out_dir;  ///< empty: nothing written

  void validate() const;
};

struct ExperimentOutput {
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;
  std::vector<WinnerRow> winners;
};

/// Every (algo, seed) cell; writes results.csv, summary.csv, winners.csv and
/// trace_<algo>_<seed>.csv when an output directory is given.
ExperimentOutput run_experiment(const Scenario& scenario, const ExperimentSpec& spec);

/// "15" -> 1..15, "3-7" -> 3..7, "1,4,9" -> that list.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

/// Write to a sibling temporary file, then rename over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace oranits
