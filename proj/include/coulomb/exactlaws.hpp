#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "coulomb/parallel.hpp"
#include "coulomb/random.hpp"

namespace cgas {

struct GammaLaw {
  double shape;
  double rate;
};
struct NormalLaw {
  double mean;
  double variance;
};
/// Standard Gumbel law, CDF exp(-exp(-x)).
struct GumbelLaw {};
struct ExponentialLaw {
  double rate;
};
struct UniformLaw {
  double lower;
  double upper;
};

/// Analytic reference law used as a test oracle.
class DistributionSpec {
 public:
  using Kind = std::variant<GammaLaw, NormalLaw, GumbelLaw, ExponentialLaw, UniformLaw>;

  explicit DistributionSpec(Kind kind);

  static DistributionSpec gamma(double shape, double rate) { return DistributionSpec(GammaLaw{shape, rate}); }
  static DistributionSpec normal(double mean, double variance) {
    return DistributionSpec(NormalLaw{mean, variance});
  }
  static DistributionSpec gumbel() { return DistributionSpec(GumbelLaw{}); }
  static DistributionSpec exponential(double rate) { return DistributionSpec(ExponentialLaw{rate}); }
  static DistributionSpec uniform(double lower, double upper) {
    return DistributionSpec(UniformLaw{lower, upper});
  }

  [[nodiscard]] const Kind& kind() const { return kind_; }
  [[nodiscard]] double cdf(double x) const;
  [[nodiscard]] double quantile(double p) const;
  [[nodiscard]] double mean() const;
  [[nodiscard]] double variance() const;
  [[nodiscard]] double sample(Rng& rng) const;
  /// Short identity string, e.g. "Gamma(36, 8)".
  [[nodiscard]] std::string describe() const;

 private:
  Kind kind_;
};

/// Law of V(X_1)+...+V(X_n) for a gas whose confinement is a-homogeneous and
/// whose pair weight is b-homogeneous: Gamma(nd/a + n(n-1)b/(2a), 1).
DistributionSpec potential_sum_law(long n, int d, double a, double b);

/// Law of each coordinate of X_1+...+X_n when V = gamma_coeff |x|^2.
DistributionSpec sum_law_gaussian(double gamma_coeff, long n, int d);

/// beta-Ginibre gas, d = 2, V = |x|^2/2: (law of each coordinate of sum x_i,
/// law of sum |x_i|^2).
std::pair<DistributionSpec, DistributionSpec> beta_ginibre_laws(long n, double beta);

struct BetaGinibreMoments {
  double mean_sum_sq;  ///< E |sum x_i|^2
  double mean_radial;  ///< E sum |x_i|^2
};
BetaGinibreMoments beta_ginibre_moments(long n, double beta);

/// Real beta-Hermite gas: (law of sum x_i, law of sum x_i^2).
std::pair<DistributionSpec, DistributionSpec> hermite_laws(long n, double beta);

/// sqrt(G_1), ..., sqrt(G_n) with G_k ~ Gamma(k, 1) independent, randomly
/// permuted: the unordered moduli of the Ginibre eigenvalues.
std::vector<double> kostlan_moduli(long n, Rng& rng);

struct GumbelNormalization {
  double kappa;
  double center;
  double scale;
};
/// Centering and scale of the spectral radius; throws DomainError when
/// kappa_n <= 0 (the normalization is undefined there).
GumbelNormalization gumbel_normalization(long n);
/// Smallest n for which gumbel_normalization is defined.
long minimal_gumbel_n();

/// max_k sqrt(G_k / n), the Kostlan route to the scaled spectral radius.
double spectral_radius_sample(long n, Rng& rng);

/// Exact finite-n CDF of the scaled spectral radius, prod_k P(G_k <= n t^2).
double spectral_radius_cdf(long n, double t);

/// `draws` spectral radii, draw k seeded with task_seed(seed, k).
std::vector<double> spectral_radius_batch(long n, std::size_t draws, std::uint64_t seed,
                                          Execution exec = Execution::Parallel);

/// sum_k |lambda_k|^2 / n via the Kostlan route, `draws` times.
std::vector<double> kostlan_radial_statistic_batch(long n, std::size_t draws, std::uint64_t seed,
                                                   Execution exec = Execution::Parallel);

}  // namespace cgas
