#pragma once

#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "coulomb/core_kernel.hpp"
#include "coulomb/random.hpp"

namespace cgas {

// Presets of equilibrium measures. Radial presets live in R^d (R^2 unless
// stated); Semicircle and Arcsine live on a segment of the real line.
struct UniformBall {
  int d = 3;
  double radius = 1.0;
};
struct UniformDisc {
  double radius = 1.0;
};
struct SphericalHeavyTail {};
/// Limit of truncated Haar unitaries with n/m -> alpha.
struct TruncationLimit {
  double alpha = 0.5;
};
/// Limit of products of m Ginibre matrices.
struct ProductLimit {
  int m = 1;
};
struct Semicircle {};
struct Arcsine {
  double a = -1.0;
  double b = 1.0;
};

using MeasureLabel = std::variant<UniformBall, UniformDisc, SphericalHeavyTail, TruncationLimit,
                                  ProductLimit, Semicircle, Arcsine>;

class EquilibriumMeasure {
 public:
  explicit EquilibriumMeasure(MeasureLabel label);

  [[nodiscard]] const MeasureLabel& label() const { return label_; }
  /// Ambient dimension of the points (1 for the line presets).
  [[nodiscard]] int dim() const;
  [[nodiscard]] bool is_radial() const;

  /// Density at a point of modulus r (radial presets) or at s (line presets).
  [[nodiscard]] double density(double r) const;
  /// mu(|x| <= r) for radial presets, mu((-inf, s]) for line presets.
  [[nodiscard]] double radial_cdf(double r) const;
  /// d/dr radial_cdf: density(r) times the area of the sphere of radius r.
  [[nodiscard]] double radial_marginal_density(double r) const;
  /// Inverse of radial_cdf by bisection to 1e-12.
  [[nodiscard]] double quantile(double u) const;

  /// Lower and upper end of the radial (or line) support; upper may be +inf.
  [[nodiscard]] double support_lower() const;
  [[nodiscard]] double support_upper() const;
  [[nodiscard]] double support_radius() const { return support_upper(); }

 private:
  MeasureLabel label_;
};

/// Validates the label parameters and builds the measure.
EquilibriumMeasure equilibrium_for(MeasureLabel label);

/// Closed-form radial CDF of every preset.
double radial_cdf_closed(const MeasureLabel& label, double r);

/// Potential of the uniform law on the circle of radius r (d = 2).
double potential_uniform_circle(double r, std::span<const double> x);
/// Potential of the uniform law on the disc of radius R (d = 2).
double potential_uniform_disc(double R, std::span<const double> x);

struct UniformCircleMeasure {
  double r = 1.0;
};
struct UniformDiscMeasure {
  double R = 1.0;
};
/// Tabulated energies: -log(r)/2 for the circle, 1/4 - log(R) for the disc.
/// The circle value is (1/2) int U dmu; the disc value is the full double
/// integral int U dmu, i.e. twice the half-normalized energy.
double energy_uniform_closed(std::variant<UniformCircleMeasure, UniformDiscMeasure> which);

/// U_mu(x) = int g(x - y) dmu(y) for a radial preset. Closed form for
/// UniformDisc and UniformBall, otherwise shell decomposition plus adaptive
/// quadrature (throws QuadratureError if it does not converge).
double coulomb_potential(const EquilibriumMeasure& m, std::span<const double> x);

/// Density predicted by the Laplacian of V: Delta V(x) / c_d.
double density_from_laplacian(const Potential& V, std::span<const double> x, Dimension dim);

/// U_m(x) + V(x) at every grid point.
std::vector<double> euler_lagrange_values(const Potential& V, const EquilibriumMeasure& m,
                                          const PointCloud& grid);
/// max over the grid of |U_m + V - c|, c the grid median of U_m + V.
double euler_lagrange_residual(const Potential& V, const EquilibriumMeasure& m,
                               const PointCloud& grid);

/// n i.i.d. points from a radial preset: inverse-CDF radius, uniform direction.
PointCloud sample_equilibrium(const EquilibriumMeasure& m, std::size_t n, Rng& rng);

}  // namespace cgas
