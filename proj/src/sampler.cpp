#include "coulomb/sampler.hpp"

#include <cmath>
#include <numeric>

#include "coulomb/equilibrium.hpp"
#include "coulomb/error.hpp"

namespace cgas {

namespace {

// Number of coordinates a proposal may change for each particle.
int moving_coords(const GasParameters& p) {
  return p.support == Support::RealLine ? 1 : p.dim.value();
}

void refresh_cache_if_due(ChainState& state, const GasParameters& p) {
  if (state.accepted_since_refresh < kEnergyRefreshInterval) return;
  const double fresh = energy_total(state.cfg.points, p);
  const double drift = std::abs(state.cfg.cached_energy - fresh) / std::max(1.0, std::abs(fresh));
  state.max_cache_drift = std::max(state.max_cache_drift, drift);
  state.cfg.cached_energy = fresh;
  state.accepted_since_refresh = 0;
}

}  // namespace

void SamplerConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidParameter("step must be positive");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0)) {
    throw InvalidParameter("target_acceptance must lie in (0, 1)");
  }
  if (thin < 1) throw InvalidParameter("thin must be >= 1");
}

double acceptance_probability(double beta, double energy_delta, double log_q_ratio) {
  const double log_alpha = -beta * energy_delta + log_q_ratio;
  return log_alpha >= 0.0 ? 1.0 : std::exp(log_alpha);
}

bool accept_move(ChainState& state, std::size_t i, std::span<const double> x_new,
                 const GasParameters& p, Rng& rng) {
  ++state.step_count;
  double delta = 0.0;
  try {
    delta = energy_delta(state.cfg, i, x_new, p);
  } catch (const CollisionError&) {
    return false;
  }
  const double u = uniform01(rng);
  if (!(u < acceptance_probability(p.beta, delta))) return false;

  auto xi = state.cfg.points.point(i);
  std::copy(x_new.begin(), x_new.end(), xi.begin());
  state.cfg.cached_energy += delta;
  ++state.accept_count;
  ++state.accepted_since_refresh;
  refresh_cache_if_due(state, p);
  return true;
}

bool mh_step(ChainState& state, const GasParameters& p, const SamplerConfig& /*sc*/, Rng& rng) {
  const std::size_t n = state.cfg.points.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const std::size_t i = pick(rng);
  const auto xi = state.cfg.points.point(i);
  Point proposal(xi.begin(), xi.end());
  const int moving = moving_coords(p);
  for (int k = 0; k < moving; ++k) proposal[k] += state.current_step_size * standard_normal(rng);
  return accept_move(state, i, proposal, p, rng);
}

std::vector<double> tamed_drift(const PointCloud& points, const GasParameters& p, double step) {
  auto grad = gradient_energy(points, p);
  double norm2 = 0.0;
  for (double v : grad) norm2 += v * v;
  const double scale = 1.0 / (1.0 + step * std::sqrt(norm2) / static_cast<double>(p.n));
  for (auto& v : grad) v *= scale;
  return grad;
}

bool mala_step(ChainState& state, const GasParameters& p, const SamplerConfig& /*sc*/, Rng& rng) {
  ++state.step_count;
  const double h = state.current_step_size;
  const int d = p.dim.value();
  const int moving = moving_coords(p);
  const auto& x = state.cfg.points;
  const std::size_t n = x.size();

  const auto drift_x = tamed_drift(x, p, h);
  const double noise = std::sqrt(2.0 * h / p.beta);
  PointCloud y = x;
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < moving; ++k) {
      y.coords()[i * d + k] += -h * drift_x[i * d + k] + noise * standard_normal(rng);
    }
  }

  double energy_y = 0.0;
  std::vector<double> drift_y;
  try {
    energy_y = energy_total(y, p);
    drift_y = tamed_drift(y, p, h);
  } catch (const CollisionError&) {
    return false;
  }

  // Gaussian proposal log-densities up to the common normalization.
  double forward = 0.0;
  double backward = 0.0;
  for (std::size_t idx = 0; idx < x.coords().size(); ++idx) {
    const double f = y.coords()[idx] - x.coords()[idx] + h * drift_x[idx];
    const double b = x.coords()[idx] - y.coords()[idx] + h * drift_y[idx];
    forward += f * f;
    backward += b * b;
  }
  const double log_q_ratio = -p.beta * (backward - forward) / (4.0 * h);
  const double u = uniform01(rng);
  if (!(u < acceptance_probability(p.beta, energy_y - state.cfg.cached_energy, log_q_ratio))) {
    return false;
  }
  state.cfg.points = std::move(y);
  state.cfg.cached_energy = energy_y;
  ++state.accept_count;
  return true;
}

PointCloud initial_points(const GasParameters& p, Rng& rng) {
  const int d = p.dim.value();
  const auto& V = p.potential;
  if (p.support == Support::RealLine) {
    PointCloud cloud(d, p.n);
    if (V.kind() == Potential::Kind::Quadratic) {
      // V = gamma x^2 on the line has a semicircle law of radius 1/sqrt(gamma).
      const EquilibriumMeasure semicircle = equilibrium_for(Semicircle{});
      const double scale = 0.5 / std::sqrt(V.coefficient());
      for (std::size_t i = 0; i < p.n; ++i) cloud.point(i)[0] = scale * semicircle.quantile(uniform01(rng));
    } else {
      for (std::size_t i = 0; i < p.n; ++i) cloud.point(i)[0] = standard_normal(rng);
    }
    return cloud;
  }
  if (V.kind() == Potential::Kind::Quadratic) {
    const double radius = std::pow(2.0 * V.coefficient(), -1.0 / d);
    const MeasureLabel label = d == 2 ? MeasureLabel{UniformDisc{radius}} : MeasureLabel{UniformBall{d, radius}};
    return sample_equilibrium(equilibrium_for(label), p.n, rng);
  }
  if (V.kind() == Potential::Kind::SphericalLog && d == 2) {
    return sample_equilibrium(equilibrium_for(SphericalHeavyTail{}), p.n, rng);
  }
  PointCloud cloud(d, p.n);
  for (auto& v : cloud.coords()) v = standard_normal(rng);
  return cloud;
}

ChainOutput run_chain(const GasParameters& p, const SamplerConfig& sc, std::size_t n_samples) {
  Rng rng(sc.seed);
  auto initial = initial_points(p, rng);
  return run_chain_from(std::move(initial), p, sc, n_samples);
}

ChainOutput run_chain_from(PointCloud initial, const GasParameters& p, const SamplerConfig& sc,
                           std::size_t n_samples) {
  sc.validate();
  if (n_samples < 1) throw InvalidParameter("n_samples must be >= 1");
  if (initial.size() != p.n || initial.dim() != p.dim.value()) {
    throw InvalidParameter("initial configuration does not match the gas parameters");
  }
  // The move stream depends only on the seed, not on how the start was drawn.
  Rng rng(task_seed(sc.seed, 0));
  ChainState state{Configuration::create(std::move(initial), p), 0, 0, sc.step, 0, 0.0};

  auto step = [&]() {
    return sc.scheme == Scheme::MALA ? mala_step(state, p, sc, rng) : mh_step(state, p, sc, rng);
  };

  double recent = sc.target_acceptance;
  for (std::size_t t = 0; t < sc.burn_in; ++t) {
    const bool accepted = step();
    if (!sc.adapt) continue;
    recent = 0.99 * recent + 0.01 * (accepted ? 1.0 : 0.0);
    state.current_step_size *= recent > sc.target_acceptance ? 1.01 : 1.0 / 1.01;
  }

  const std::size_t steps_before = state.step_count;
  const std::size_t accepts_before = state.accept_count;
  ChainOutput out;
  out.samples.reserve(n_samples);
  out.energy_trace.reserve(n_samples);
  out.sum_sq_trace.reserve(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    if (k > 0) {
      for (std::size_t t = 0; t < sc.thin; ++t) step();
    }
    out.samples.push_back(state.cfg);
    out.energy_trace.push_back(state.cfg.cached_energy);
    out.sum_sq_trace.push_back(sum_of_squares(state.cfg.points));
  }
  const std::size_t steps = state.step_count - steps_before;
  out.acceptance_rate =
      steps == 0 ? 0.0 : static_cast<double>(state.accept_count - accepts_before) / static_cast<double>(steps);
  out.final_step_size = state.current_step_size;
  out.max_cache_drift = state.max_cache_drift;
  return out;
}

std::vector<ChainOutput> run_parallel_chains(const GasParameters& p, const SamplerConfig& sc,
                                             std::size_t n_chains, std::size_t n_samples,
                                             Execution exec) {
  if (n_chains < 1) throw InvalidParameter("n_chains must be >= 1");
  std::vector<ChainOutput> outputs(n_chains);
  for_each_task(n_chains, exec, [&](std::size_t k) {
    SamplerConfig chain_config = sc;
    chain_config.seed = sc.seed + k;
    outputs[k] = run_chain(p, chain_config, n_samples);
  });
  return outputs;
}

double sum_of_squares(const PointCloud& points) {
  return std::inner_product(points.coords().begin(), points.coords().end(), points.coords().begin(), 0.0);
}

std::vector<double> coordinate_sum(const PointCloud& points) {
  std::vector<double> sum(static_cast<std::size_t>(points.dim()), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto x = points.point(i);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += x[k];
  }
  return sum;
}

}  // namespace cgas
