#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coulomb/core_kernel.hpp"
#include "coulomb/parallel.hpp"
#include "coulomb/random.hpp"

namespace cgas {

enum class Scheme { MetropolisSingle, MALA };

struct SamplerConfig {
  Scheme scheme = Scheme::MetropolisSingle;
  double step = 0.1;
  bool adapt = true;
  double target_acceptance = 0.4;
  std::size_t burn_in = 10000;
  std::size_t thin = 1;
  std::uint64_t seed = 1;

  /// Throws InvalidParameter when a field is out of range.
  void validate() const;
};

struct ChainState {
  Configuration cfg;
  std::size_t step_count = 0;
  std::size_t accept_count = 0;
  double current_step_size = 0.1;
  /// Accepted moves since the cached energy was last recomputed.
  std::size_t accepted_since_refresh = 0;
  /// Largest relative drift seen at a refresh.
  double max_cache_drift = 0.0;
};

struct ChainOutput {
  std::vector<Configuration> samples;
  double acceptance_rate = 0.0;
  double final_step_size = 0.0;
  double max_cache_drift = 0.0;
  /// Per-sample traces of the cached energy and of sum_i |x_i|^2.
  std::vector<double> energy_trace;
  std::vector<double> sum_sq_trace;
};

/// Accepted moves between two full energy recomputations.
inline constexpr std::size_t kEnergyRefreshInterval = 10000;
/// Relative tolerance between the cached and recomputed energy.
inline constexpr double kEnergyCacheTolerance = 1e-9;

/// Metropolis acceptance probability min(1, exp(-beta*delta + log_q_ratio)).
double acceptance_probability(double beta, double energy_delta, double log_q_ratio = 0.0);

/// Metropolis accept/reject of a symmetric single-particle move of particle
/// i to x_new. Collisions are rejected. Returns whether the move happened.
bool accept_move(ChainState& state, std::size_t i, std::span<const double> x_new,
                 const GasParameters& p, Rng& rng);

/// One single-particle random-walk Metropolis step.
bool mh_step(ChainState& state, const GasParameters& p, const SamplerConfig& sc, Rng& rng);

/// Tamed drift D(x) = grad E / (1 + h |grad E| / n).
std::vector<double> tamed_drift(const PointCloud& points, const GasParameters& p, double step);

/// One Metropolis-adjusted Langevin step of the whole configuration.
bool mala_step(ChainState& state, const GasParameters& p, const SamplerConfig& sc, Rng& rng);

/// Initial configuration: i.i.d. from the matching equilibrium preset when
/// there is one, otherwise i.i.d. standard Gaussian points.
PointCloud initial_points(const GasParameters& p, Rng& rng);

ChainOutput run_chain(const GasParameters& p, const SamplerConfig& sc, std::size_t n_samples);
ChainOutput run_chain_from(PointCloud initial, const GasParameters& p, const SamplerConfig& sc,
                           std::size_t n_samples);

/// Chain k is run with seed sc.seed + k. The result is independent of
/// `exec` and of the number of threads.
std::vector<ChainOutput> run_parallel_chains(const GasParameters& p, const SamplerConfig& sc,
                                             std::size_t n_chains, std::size_t n_samples,
                                             Execution exec = Execution::Parallel);

double sum_of_squares(const PointCloud& points);
/// Coordinate-wise sum of the points.
std::vector<double> coordinate_sum(const PointCloud& points);

}  // namespace cgas
