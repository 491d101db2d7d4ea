#include "oranits/metaheuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

namespace oranits {

SearchBounds SearchBounds::for_row(int z, int k_star) {
  if (z < 1 || k_star < 1) throw std::invalid_argument("Z and K* must be >= 1");
  SearchBounds b;
  b.lb = Eigen::VectorXd::Ones(2 * z);
  b.ub.resize(2 * z);
  b.ub.head(z).setConstant(z);
  b.ub.tail(z).setConstant(k_star);
  return b;
}

std::vector<int> argsort(const VecRef& keys) {
  std::vector<int> idx(static_cast<std::size_t>(keys.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  return idx;
}

AssignmentSolution decode(const VecRef& x, int z, int k_star, std::span<const int> vehicle_ids) {
  if (x.size() != 2 * z) throw std::invalid_argument("genotype length must be 2Z");
  if (!vehicle_ids.empty() && static_cast<int>(vehicle_ids.size()) != k_star)
    throw std::invalid_argument("need exactly K* vehicle ids");
  const int q = (z + k_star - 1) / k_star;

  AssignmentSolution d(static_cast<std::size_t>(z));
  const auto by_vehicle_key = argsort(x.tail(z));
  for (int r = 0; r < z; ++r) {
    const int block = r / q;
    d[static_cast<std::size_t>(by_vehicle_key[static_cast<std::size_t>(r)])].vehicle =
        vehicle_ids.empty() ? block + 1 : vehicle_ids[static_cast<std::size_t>(block)];
  }

  std::vector<int> seen;
  for (int m : argsort(x.head(z))) {
    const int v = d[static_cast<std::size_t>(m)].vehicle;
    if (static_cast<std::size_t>(v) >= seen.size()) seen.resize(static_cast<std::size_t>(v) + 1, 0);
    d[static_cast<std::size_t>(m)].order = ++seen[static_cast<std::size_t>(v)];
  }
  return d;
}

double pcm_map(double x, double rho) {
  if (!(rho > 0.0 && rho < 0.5)) throw DomainError("PCM parameter must lie in (0, 0.5)");
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("PCM input must lie in [0, 1)");
  if (x < rho) return x / rho;
  if (x < 0.5) return (x - rho) / (0.5 - rho);
  if (x < 1.0 - rho) return (1.0 - rho - x) / (0.5 - rho);
  return (1.0 - x) / rho;
}

void pcm_refine(Eigen::Ref<Eigen::VectorXd> x, const SearchBounds& b, double rho) {
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    const double span = b.ub[l] - b.lb[l];
    if (!(span > 0.0)) continue;
    double u = (x[l] - b.lb[l]) / span;
    u = std::clamp(u, 0.0, std::nextafter(1.0, 0.0));
    x[l] = b.lb[l] + span * pcm_map(u, rho);
  }
}

Eigen::VectorXd population_std(const PopulationMatrix& pop) {
  const Eigen::RowVectorXd mean = pop.colwise().mean();
  return ((pop.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(pop.rows())).sqrt().transpose();
}

namespace {

Eigen::ArrayXd bernoulli_mask(Eigen::Index n, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  Eigen::ArrayXd m(n);
  for (Eigen::Index i = 0; i < n; ++i) m[i] = coin(rng) ? 1.0 : 0.0;
  return m;
}

}  // namespace

Genotype explore_gaussian(const VecRef& x, const VecRef& sigma, const Eigen::ArrayXd& mask, const Eigen::ArrayXd& std_normals,
                          const SearchBounds& b) {
  Genotype out = x + (mask * std_normals * sigma.array()).matrix();
  clamp_to(out, b);
  return out;
}

Genotype explore_gaussian(const VecRef& x, const VecRef& sigma, const SearchBounds& b, Rng& rng) {
  const auto mask = bernoulli_mask(x.size(), rng);
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::ArrayXd z(x.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = n01(rng);
  return explore_gaussian(x, sigma, mask, z, b);
}

double opposition_weight(double r, Rng& rng) {
  if (r < 0.2) return 0.0;
  if (r < 0.8) return 1.0;
  return uniform01(rng);
}

Genotype exploit_opposition(const VecRef& x, const VecRef& best, double w, const Eigen::ArrayXd& mask, const SearchBounds& b) {
  const Eigen::VectorXd opposite = b.ub + b.lb - x;
  const Eigen::VectorXd toward_best = best - x;
  Genotype out = x + (mask * (w * opposite + (1.0 - w) * toward_best).array()).matrix();
  clamp_to(out, b);
  return out;
}

Genotype exploit_opposition(const VecRef& x, const VecRef& best, const SearchBounds& b, Rng& rng) {
  const double w = opposition_weight(uniform01(rng), rng);
  return exploit_opposition(x, best, w, bernoulli_mask(x.size(), rng), b);
}

Genotype random_hiding(const VecRef& x_peer, const VecRef& x_other, const VecRef& best, double u, const VecRef& running,
                       const SearchBounds& b) {
  Genotype out = x_peer + (2.0 * u - 1.0) * running.cwiseProduct(best - x_other);
  clamp_to(out, b);
  return out;
}

Eigen::VectorXd running_characteristic(int generation, int g_max, Eigen::Index dim, Rng& rng) {
  const double t = static_cast<double>(generation + 1);
  const double frac = (t - 1.0) / static_cast<double>(std::max(g_max, 1));
  const double len = (std::numbers::e - std::exp(frac * frac)) * std::sin(2.0 * std::numbers::pi * uniform01(rng));
  const auto ones = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil(uniform01(rng) * static_cast<double>(dim))));
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(dim));
  std::iota(pos.begin(), pos.end(), Eigen::Index{0});
  std::shuffle(pos.begin(), pos.end(), rng);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index i = 0; i < std::min(ones, dim); ++i) r[pos[static_cast<std::size_t>(i)]] = len;
  return r;
}

Genotype random_hiding(const PopulationMatrix& pop, int p, int p1, int p2, const VecRef& best, int generation, int g_max,
                       const SearchBounds& b, Rng& rng) {
  if (p == p1 || p == p2 || p1 == p2) throw IndexCollision("random hiding needs three distinct members");
  const double u = uniform01(rng);
  const auto r = running_characteristic(generation, g_max, pop.cols(), rng);
  return random_hiding(pop.row(p1).transpose(), pop.row(p2).transpose(), best, u, r, b);
}

double energy_factor(int generation, int g_max, Rng& rng) {
  const double t = static_cast<double>(generation);
  double u = uniform01(rng);
  while (u <= 0.0) u = uniform01(rng);
  return 4.0 * (1.0 - t / static_cast<double>(g_max)) * std::log(1.0 / u);
}

Genotype aro_detour_foraging(const PopulationMatrix& pop, int p, const VecRef& running, const SearchBounds& b, Rng& rng) {
  const int n = static_cast<int>(pop.rows());
  std::uniform_int_distribution<int> pick(0, n - 2);
  int j = pick(rng);
  if (j >= p) ++j;
  const double jump = std::round(0.5 * (0.05 + uniform01(rng))) * std::normal_distribution<double>(0.0, 1.0)(rng);
  const Eigen::VectorXd xj = pop.row(j).transpose();
  Genotype out = xj + running.cwiseProduct(pop.row(p).transpose() - xj);
  out.array() += jump;
  clamp_to(out, b);
  return out;
}

Genotype aro_random_hiding(const VecRef& x, const VecRef& running, int generation, int g_max, const SearchBounds& b,
                           Rng& rng) {
  const double t = static_cast<double>(generation + 1);
  const double h = (static_cast<double>(g_max) - t + 1.0) / static_cast<double>(g_max) * std::normal_distribution<double>(0.0, 1.0)(rng);
  std::uniform_int_distribution<Eigen::Index> dim(0, x.size() - 1);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  g[dim(rng)] = 1.0;
  const Eigen::VectorXd burrow = x + h * g.cwiseProduct(x);
  Genotype out = x + running.cwiseProduct(uniform01(rng) * burrow - x);
  clamp_to(out, b);
  return out;
}

void OptimizerConfig::validate() const {
  if (pop < 4) throw std::invalid_argument("population size must be >= 4");
  if (iters < 0) throw std::invalid_argument("iteration count must be >= 0");
  if (!(rho > 0.0 && rho < 0.5)) throw std::invalid_argument("rho must lie in (0, 0.5)");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

namespace {

enum class Variant { CggAro, Aro };

enum StreamTag : std::uint64_t { kInit = 0x1001, kStep = 0x1002 };

void score_all(const RowProblem& problem, const PopulationMatrix& pop, int threads, std::vector<Score>& out) {
  const int n = static_cast<int>(pop.rows());
  out.resize(static_cast<std::size_t>(n));
  auto work = [&](int lo, int hi) {
    FitnessEvaluator eval(problem);
    for (int i = lo; i < hi; ++i)
      out[static_cast<std::size_t>(i)] = eval(decode(pop.row(i).transpose(), problem.z, problem.k_star));
  };
  if (threads <= 1 || n < 2) {
    work(0, n);
    return;
  }
  const int t = std::min(threads, n);
  std::vector<std::jthread> pool;
  for (int k = 0; k < t; ++k) pool.emplace_back(work, n * k / t, n * (k + 1) / t);
}

int best_index(const std::vector<Score>& s) {
  int b = 0;
  for (int i = 1; i < static_cast<int>(s.size()); ++i)
    if (s[static_cast<std::size_t>(i)].fitness > s[static_cast<std::size_t>(b)].fitness) b = i;
  return b;
}

OptimizerResult run_population(const RowProblem& problem, const OptimizerConfig& cfg, Variant variant) {
  cfg.validate();
  const auto bounds = SearchBounds::for_row(problem.z, problem.k_star);
  const Eigen::Index dim = bounds.dim();
  const int n = cfg.pop;

  PopulationMatrix pop(n, dim);
  for (int p = 0; p < n; ++p) {
    auto rng = substream(cfg.seed, {kInit, static_cast<std::uint64_t>(p)});
    for (Eigen::Index l = 0; l < dim; ++l)
      pop(p, l) = std::uniform_real_distribution<double>(bounds.lb[l], bounds.ub[l])(rng);
    if (variant == Variant::CggAro) {
      Eigen::VectorXd row = pop.row(p).transpose();
      pcm_refine(row, bounds, cfg.rho);
      pop.row(p) = row.transpose();
    }
  }

  std::vector<Score> fit, cand_fit;
  score_all(problem, pop, cfg.threads, fit);
  int b = best_index(fit);
  Eigen::VectorXd best = pop.row(b).transpose();
  Score best_score = fit[static_cast<std::size_t>(b)];

  OptimizerResult res;
  res.trace.reserve(static_cast<std::size_t>(cfg.iters));
  PopulationMatrix cand(n, dim);
  for (int g = 0; g < cfg.iters; ++g) {
    const Eigen::VectorXd sigma = variant == Variant::CggAro ? population_std(pop) : Eigen::VectorXd();
    for (int p = 0; p < n; ++p) {
      auto rng = substream(cfg.seed, {kStep, static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(p)});
      const Eigen::VectorXd x = pop.row(p).transpose();
      const double a = energy_factor(g, cfg.iters, rng);
      const bool coin = uniform01(rng) > 0.5;
      Genotype next;
      if (variant == Variant::CggAro) {
        if (a > 1.0) {
          next = coin ? explore_gaussian(x, sigma, bounds, rng) : exploit_opposition(x, best, bounds, rng);
        } else if (coin) {
          std::uniform_int_distribution<int> pick(0, n - 1);
          int p1 = p, p2 = p;
          while (p1 == p) p1 = pick(rng);
          while (p2 == p || p2 == p1) p2 = pick(rng);
          next = random_hiding(pop, p, p1, p2, best, g, cfg.iters, bounds, rng);
        } else {
          const auto r = running_characteristic(g, cfg.iters, dim, rng);
          next = aro_random_hiding(x, r, g, cfg.iters, bounds, rng);
        }
      } else {
        const auto r = running_characteristic(g, cfg.iters, dim, rng);
        next = a > 1.0 ? aro_detour_foraging(pop, p, r, bounds, rng) : aro_random_hiding(x, r, g, cfg.iters, bounds, rng);
      }
      cand.row(p) = next.transpose();
    }

    score_all(problem, cand, cfg.threads, cand_fit);
    for (int p = 0; p < n; ++p) {
      // Ties go to the candidate so the search can drift across plateaus.
      if (cand_fit[static_cast<std::size_t>(p)].fitness >= fit[static_cast<std::size_t>(p)].fitness) {
        pop.row(p) = cand.row(p);
        fit[static_cast<std::size_t>(p)] = cand_fit[static_cast<std::size_t>(p)];
      }
    }
    b = best_index(fit);
    if (fit[static_cast<std::size_t>(b)].fitness > best_score.fitness) {
      best = pop.row(b).transpose();
      best_score = fit[static_cast<std::size_t>(b)];
    }
    double mean = 0.0;
    for (const auto& s : fit) mean += s.fitness;
    res.trace.push_back({g + 1, best_score.fitness, mean / n, best_score.completed});
  }

  res.best_x = best;
  res.best = decode(best, problem.z, problem.k_star);
  res.best_score = best_score;
  return res;
}

}  // namespace

OptimizerResult CggAro::run(const RowProblem& problem, const OptimizerConfig& config) const {
  return run_population(problem, config, Variant::CggAro);
}

OptimizerResult Aro::run(const RowProblem& problem, const OptimizerConfig& config) const {
  return run_population(problem, config, Variant::Aro);
}

std::unique_ptr<Optimizer> make_optimizer(const std::string& name) {
  if (name == "cgg-aro") return std::make_unique<CggAro>();
  if (name == "aro") return std::make_unique<Aro>();
  throw UnknownAlgo("unknown algorithm: " + name);
}

}  // namespace oranits
