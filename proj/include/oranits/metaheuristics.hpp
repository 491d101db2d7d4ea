#pragma once

// Population-based solvers over random-key genotypes: CGG-ARO and baseline
// ARO behind one optimizer interface.
//
// A genotype x has 2Z coordinates: Z mission keys in [1, Z] whose argsort is
// the processing permutation, then Z vehicle keys in [1, K*] whose ranks are
// cut into quota blocks of ceil(Z/K*) missions per vehicle.

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "oranits/rng.hpp"
#include "oranits/schedule_eval.hpp"

namespace oranits {

using Genotype = Eigen::VectorXd;
using PopulationMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;  ///< one member per row
using VecRef = Eigen::Ref<const Eigen::VectorXd>;

struct SearchBounds {
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;

  static SearchBounds for_row(int z, int k_star);
  Eigen::Index dim() const { return lb.size(); }
};

template <class Derived>
void clamp_to(Eigen::MatrixBase<Derived>& x, const SearchBounds& b) {
  x = x.cwiseMax(b.lb).cwiseMin(b.ub);
}

/// Random-key decoding. Missions are processed in ascending mission-key order
/// (ties by index); each mission's vehicle comes from the rank of its vehicle
/// key, cut into quota blocks; its order is the running count of that vehicle
/// in processing order. `vehicle_ids` maps rank blocks to ids (default 1..K*).
AssignmentSolution decode(const VecRef& x, int z, int k_star, std::span<const int> vehicle_ids = {});

/// Indices sorted ascending by value, ties by index.
std::vector<int> argsort(const VecRef& keys);

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Four-branch piecewise chaotic map on [0, 1).
double pcm_map(double x, double rho);

/// One PCM pass over every coordinate, after normalizing into [0, 1) by the
/// bounds; degenerate coordinates (lb == ub) are left alone.
void pcm_refine(Eigen::Ref<Eigen::VectorXd> x, const SearchBounds& b, double rho);

/// Coordinate-wise population standard deviation (divide by P).
Eigen::VectorXd population_std(const PopulationMatrix& pop);

/// x + mask .* N(0, sigma), clamped. Explicit draws for testing.
Genotype explore_gaussian(const VecRef& x, const VecRef& sigma, const Eigen::ArrayXd& mask, const Eigen::ArrayXd& std_normals,
                          const SearchBounds& b);
Genotype explore_gaussian(const VecRef& x, const VecRef& sigma, const SearchBounds& b, Rng& rng);

/// Three-case weight: 0 below 0.2, 1 below 0.8, otherwise a fresh uniform.
double opposition_weight(double r, Rng& rng);

/// x + mask .* [w (ub + lb - x) + (1 - w)(best - x)], clamped.
Genotype exploit_opposition(const VecRef& x, const VecRef& best, double w, const Eigen::ArrayXd& mask, const SearchBounds& b);
Genotype exploit_opposition(const VecRef& x, const VecRef& best, const SearchBounds& b, Rng& rng);

class IndexCollision : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// x_{p'} + (2U - 1) R .* (best - x_{p''}), clamped.
Genotype random_hiding(const VecRef& x_peer, const VecRef& x_other, const VecRef& best, double u, const VecRef& running,
                       const SearchBounds& b);
/// Draws U and the running characteristic; p, p', p'' must be pairwise distinct.
Genotype random_hiding(const PopulationMatrix& pop, int p, int p1, int p2, const VecRef& best, int generation, int g_max,
                       const SearchBounds& b, Rng& rng);

/// Energy factor 4 (1 - g/g_max) ln(1/u), g counted from 0.
double energy_factor(int generation, int g_max, Rng& rng);

/// Running characteristic R = L c: L = (e - exp(((t-1)/T)^2)) sin(2 pi r),
/// c a 0/1 vector with ceil(r' dim) ones at random positions.
Eigen::VectorXd running_characteristic(int generation, int g_max, Eigen::Index dim, Rng& rng);

/// Original ARO detour foraging from member p toward a random peer.
Genotype aro_detour_foraging(const PopulationMatrix& pop, int p, const VecRef& running, const SearchBounds& b, Rng& rng);
/// Original ARO random hiding around a randomly chosen burrow.
Genotype aro_random_hiding(const VecRef& x, const VecRef& running, int generation, int g_max, const SearchBounds& b,
                           Rng& rng);

struct OptimizerConfig {
  int pop = 30;
  int iters = 1000;
  double rho = 0.4;
  std::uint64_t seed = 1;
  int threads = 1;  ///< fitness fan-out; results do not depend on it

  void validate() const;
};

struct TraceRow {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  int completed_at_best = 0;
};

struct OptimizerResult {
  AssignmentSolution best;
  Genotype best_x;
  Score best_score;
  std::vector<TraceRow> trace;  ///< one row per generation
};

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual std::string name() const = 0;
  virtual OptimizerResult run(const RowProblem& problem, const OptimizerConfig& config) const = 0;
};

class CggAro final : public Optimizer {
 public:
  std::string name() const override { return "cgg-aro"; }
  OptimizerResult run(const RowProblem& problem, const OptimizerConfig& config) const override;
};

class Aro final : public Optimizer {
 public:
  std::string name() const override { return "aro"; }
  OptimizerResult run(const RowProblem& problem, const OptimizerConfig& config) const override;
};

class UnknownAlgo : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "cgg-aro" or "aro".
std::unique_ptr<Optimizer> make_optimizer(const std::string& name);

inline OptimizerResult run_cgg_aro(const RowProblem& problem, const OptimizerConfig& config) { return CggAro{}.run(problem, config); }
inline OptimizerResult run_aro(const RowProblem& problem, const OptimizerConfig& config) { return Aro{}.run(problem, config); }

}  // namespace oranits
