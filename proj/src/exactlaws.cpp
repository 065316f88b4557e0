#include "coulomb/exactlaws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/exponential.hpp>
#include <boost/math/distributions/extreme_value.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/uniform.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "coulomb/error.hpp"

namespace cgas {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

namespace bm = boost::math;

// Boost parametrizes the Gamma law by scale, and the normal law by sd.
auto to_boost(const GammaLaw& g) { return bm::gamma_distribution<double>(g.shape, 1.0 / g.rate); }
auto to_boost(const NormalLaw& g) { return bm::normal_distribution<double>(g.mean, std::sqrt(g.variance)); }
auto to_boost(const GumbelLaw&) { return bm::extreme_value_distribution<double>(0.0, 1.0); }
auto to_boost(const ExponentialLaw& e) { return bm::exponential_distribution<double>(e.rate); }
auto to_boost(const UniformLaw& u) { return bm::uniform_distribution<double>(u.lower, u.upper); }

}  // namespace

DistributionSpec::DistributionSpec(Kind kind) : kind_(kind) {
  std::visit(Overloaded{
                 [](const GammaLaw& g) {
                   if (!(g.shape > 0.0 && g.rate > 0.0)) throw InvalidParameter("Gamma needs shape, rate > 0");
                 },
                 [](const NormalLaw& g) {
                   if (!(g.variance > 0.0)) throw InvalidParameter("Normal needs variance > 0");
                 },
                 [](const GumbelLaw&) {},
                 [](const ExponentialLaw& e) {
                   if (!(e.rate > 0.0)) throw InvalidParameter("Exponential needs rate > 0");
                 },
                 [](const UniformLaw& u) {
                   if (!(u.lower < u.upper)) throw InvalidParameter("Uniform needs lower < upper");
                 },
             },
             kind_);
}

double DistributionSpec::cdf(double x) const {
  return std::visit(
      [x](const auto& law) {
        const auto dist = to_boost(law);
        const auto range = bm::support(dist);
        if (x <= range.first) return 0.0;
        if (x >= range.second) return 1.0;
        return bm::cdf(dist, x);
      },
      kind_);
}

double DistributionSpec::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("quantile level must lie in [0, 1]");
  return std::visit([p](const auto& law) { return bm::quantile(to_boost(law), p); }, kind_);
}

double DistributionSpec::mean() const {
  return std::visit([](const auto& law) { return bm::mean(to_boost(law)); }, kind_);
}

double DistributionSpec::variance() const {
  return std::visit([](const auto& law) { return bm::variance(to_boost(law)); }, kind_);
}

double DistributionSpec::sample(Rng& rng) const {
  return std::visit(Overloaded{
                        [&rng](const GammaLaw& g) {
                          std::gamma_distribution<double> dist(g.shape, 1.0 / g.rate);
                          return dist(rng);
                        },
                        [&rng](const NormalLaw& g) {
                          std::normal_distribution<double> dist(g.mean, std::sqrt(g.variance));
                          return dist(rng);
                        },
                        [&rng](const GumbelLaw&) {
                          std::extreme_value_distribution<double> dist(0.0, 1.0);
                          return dist(rng);
                        },
                        [&rng](const ExponentialLaw& e) {
                          std::exponential_distribution<double> dist(e.rate);
                          return dist(rng);
                        },
                        [&rng](const UniformLaw& u) {
                          std::uniform_real_distribution<double> dist(u.lower, u.upper);
                          return dist(rng);
                        },
                    },
                    kind_);
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  os.precision(10);
  std::visit(Overloaded{
                 [&os](const GammaLaw& g) { os << "Gamma(" << g.shape << ", " << g.rate << ")"; },
                 [&os](const NormalLaw& g) { os << "Normal(" << g.mean << ", " << g.variance << ")"; },
                 [&os](const GumbelLaw&) { os << "Gumbel"; },
                 [&os](const ExponentialLaw& e) { os << "Exponential(" << e.rate << ")"; },
                 [&os](const UniformLaw& u) { os << "Uniform(" << u.lower << ", " << u.upper << ")"; },
             },
             kind_);
  return os.str();
}

DistributionSpec potential_sum_law(long n, int d, double a, double b) {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  if (d < 1) throw InvalidParameter("d must be >= 1");
  if (!(a > 0.0) || !(b >= 0.0)) throw InvalidParameter("homogeneity degrees need a > 0 and b >= 0");
  const double nd = static_cast<double>(n);
  return DistributionSpec::gamma(nd * d / a + nd * (nd - 1.0) * b / (2.0 * a), 1.0);
}

DistributionSpec sum_law_gaussian(double gamma_coeff, long n, int d) {
  if (!(gamma_coeff > 0.0)) throw InvalidParameter("gamma must be positive");
  if (n < 1 || d < 1) throw InvalidParameter("n and d must be >= 1");
  return DistributionSpec::normal(0.0, static_cast<double>(n) / (2.0 * gamma_coeff));
}

std::pair<DistributionSpec, DistributionSpec> beta_ginibre_laws(long n, double beta) {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  if (!(beta > 0.0)) throw InvalidParameter("beta must be positive");
  const double nd = static_cast<double>(n);
  return {DistributionSpec::normal(0.0, 1.0 / beta),
          DistributionSpec::gamma(nd + beta * nd * (nd - 1.0) / 4.0, beta * nd / 2.0)};
}

BetaGinibreMoments beta_ginibre_moments(long n, double beta) {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  if (!(beta > 0.0)) throw InvalidParameter("beta must be positive");
  return {2.0 / beta, 2.0 / beta + (static_cast<double>(n) - 1.0) / 2.0};
}

std::pair<DistributionSpec, DistributionSpec> hermite_laws(long n, double beta) {
  if (n < 2) throw InvalidParameter("Hermite laws need n >= 2");
  if (!(beta > 0.0)) throw InvalidParameter("beta must be positive");
  const double nd = static_cast<double>(n);
  return {DistributionSpec::normal(0.0, 2.0 / beta),
          DistributionSpec::gamma(nd / 2.0 + beta * nd * (nd - 1.0) / 4.0, beta * nd / 4.0)};
}

std::vector<double> kostlan_moduli(long n, Rng& rng) {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  std::vector<double> moduli(static_cast<std::size_t>(n));
  for (long k = 1; k <= n; ++k) {
    std::gamma_distribution<double> dist(static_cast<double>(k), 1.0);
    moduli[static_cast<std::size_t>(k - 1)] = std::sqrt(dist(rng));
  }
  std::shuffle(moduli.begin(), moduli.end(), rng);
  return moduli;
}

GumbelNormalization gumbel_normalization(long n) {
  if (n < 3) throw DomainError("Gumbel normalization needs n >= 3");
  const double nd = static_cast<double>(n);
  const double kappa = std::log(nd / (2.0 * std::numbers::pi)) - 2.0 * std::log(std::log(nd));
  if (!(kappa > 0.0)) {
    throw DomainError("kappa_n = " + std::to_string(kappa) + " <= 0 at n = " + std::to_string(n) +
                      "; the edge normalization needs n >= " + std::to_string(minimal_gumbel_n()));
  }
  return {kappa, 1.0 + std::sqrt(kappa / (4.0 * nd)), 1.0 / std::sqrt(4.0 * nd * kappa)};
}

long minimal_gumbel_n() {
  long n = 3;
  auto kappa = [](long m) {
    const double md = static_cast<double>(m);
    return std::log(md / (2.0 * std::numbers::pi)) - 2.0 * std::log(std::log(md));
  };
  // kappa is negative on a bounded range of small n and increasing afterwards
  while (!(kappa(n) > 0.0) || !(kappa(n + 1) > 0.0)) ++n;
  while (n > 3 && kappa(n - 1) > 0.0) --n;
  return n;
}

double spectral_radius_sample(long n, Rng& rng) {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  double largest = 0.0;
  for (long k = 1; k <= n; ++k) {
    std::gamma_distribution<double> dist(static_cast<double>(k), 1.0);
    largest = std::max(largest, dist(rng));
  }
  return std::sqrt(largest / static_cast<double>(n));
}

double spectral_radius_cdf(long n, double t) {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  if (!(t > 0.0)) return 0.0;
  const double x = static_cast<double>(n) * t * t;
  double log_cdf = 0.0;
  // factors with k far below x are 1 to double precision; walk down from the top
  for (long k = n; k >= 1; --k) {
    const double q = bm::gamma_q(static_cast<double>(k), x);
    if (q >= 1.0) return 0.0;
    log_cdf += std::log1p(-q);
    if (q < 1e-18 && static_cast<double>(k) < x) break;
  }
  return std::exp(log_cdf);
}

std::vector<double> spectral_radius_batch(long n, std::size_t draws, std::uint64_t seed, Execution exec) {
  std::vector<double> out(draws);
  for_each_task(draws, exec, [&](std::size_t k) {
    Rng rng(task_seed(seed, k));
    out[k] = spectral_radius_sample(n, rng);
  });
  return out;
}

std::vector<double> kostlan_radial_statistic_batch(long n, std::size_t draws, std::uint64_t seed,
                                                   Execution exec) {
  std::vector<double> out(draws);
  for_each_task(draws, exec, [&](std::size_t k) {
    Rng rng(task_seed(seed, k));
    double total = 0.0;
    for (double r : kostlan_moduli(n, rng)) total += r * r;
    out[k] = total / static_cast<double>(n);
  });
  return out;
}

}  // namespace cgas
