#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cgas {

/// Ambient dimension d of the gas, always >= 2.
class Dimension {
 public:
  explicit Dimension(int d);
  [[nodiscard]] int value() const { return d_; }
  friend bool operator==(Dimension, Dimension) = default;

 private:
  int d_;
};

/// A position in R^d.
using Point = std::vector<double>;

/// n points in R^d stored contiguously, point i at coords[i*dim, (i+1)*dim).
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(int dim, std::size_t count);
  PointCloud(int dim, std::vector<double> coords);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return coords_.size() / static_cast<std::size_t>(dim_); }
  [[nodiscard]] std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  [[nodiscard]] std::span<double> point(std::size_t i) {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  [[nodiscard]] const std::vector<double>& coords() const { return coords_; }
  [[nodiscard]] std::vector<double>& coords() { return coords_; }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  int dim_ = 2;
  std::vector<double> coords_;
};

/// Confining potential V with value, gradient and Laplacian.
class Potential {
 public:
  enum class Kind { Quadratic, SphericalLog, RadialCustom };

  /// Radial profile h with V(x) = h(|x|); derivatives are with respect to r.
  struct RadialProfile {
    std::function<double(double)> value;
    std::function<double(double)> first;
    std::function<double(double)> second;
  };

  /// V(x) = gamma |x|^2.
  static Potential quadratic(double gamma);
  /// V(x) = prefactor * log(1 + |x|^2). The gas binds the n-dependent
  /// prefactor, see GasParameters::spherical.
  static Potential spherical_log(double prefactor);
  /// V(x) = h(|x|). The caller is responsible for integrability.
  static Potential radial(RadialProfile profile);

  [[nodiscard]] Kind kind() const { return kind_; }
  /// gamma for Quadratic, prefactor for SphericalLog, 0 otherwise.
  [[nodiscard]] double coefficient() const { return coefficient_; }

  [[nodiscard]] double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;
  [[nodiscard]] double laplacian(std::span<const double> x) const;

 private:
  Potential(Kind kind, double coefficient, RadialProfile profile);

  // Radial derivative h'(r) and h''(r), used by gradient and Laplacian.
  [[nodiscard]] double radial_first(double r) const;
  [[nodiscard]] double radial_second(double r) const;

  Kind kind_;
  double coefficient_;
  RadialProfile profile_;
};

/// Proposal geometry. `RealLine` keeps every particle on the first axis,
/// which realizes the one-dimensional log-gas as a d = 2 gas with V = +inf
/// off the line.
enum class Support { Full, RealLine };

/// (d, n, beta, V): everything that determines the Boltzmann-Gibbs law.
struct GasParameters {
  GasParameters(Dimension dim, std::size_t n, double beta, Potential potential,
                Support support = Support::Full);

  /// beta-Ginibre gas: d = 2, V = |x|^2 / 2.
  static GasParameters beta_ginibre(std::size_t n, double beta);
  /// Spherical ensemble gas: d = 2, V = (n+1)/(2n) log(1 + |x|^2).
  static GasParameters spherical(std::size_t n, double beta);
  /// Real beta-Hermite gas: points on the real line, V = x^2 / 4.
  static GasParameters hermite(std::size_t n, double beta);

  Dimension dim;
  std::size_t n;
  double beta;
  Potential potential;
  Support support;
};

/// One state of the gas with its cached energy E_n.
struct Configuration {
  PointCloud points;
  double cached_energy = 0.0;

  /// Builds a configuration and computes its energy from scratch.
  static Configuration create(PointCloud points, const GasParameters& p);
};

/// Coulomb kernel: -log|x| for d = 2, 1/((d-2)|x|^(d-2)) otherwise.
double coulomb_g(Dimension dim, std::span<const double> x);
/// Gradient of the Coulomb kernel, -x/|x|^d.
Point coulomb_grad(Dimension dim, std::span<const double> x);
/// Kernel as a function of the squared distance; throws CollisionError at 0.
double coulomb_g_r2(int d, double r2);

/// Normalizing constant of -Laplacian g = c_d delta_0, equal to d * |unit ball|.
double c_d(Dimension dim);
/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// E_n = n sum_i V(x_i) + sum_{i<j} g(x_i - x_j).
double energy_total(const PointCloud& points, const GasParameters& p);
double energy_total(const Configuration& cfg, const GasParameters& p);

/// E_n after moving particle i to x_new, minus E_n before. O(n).
double energy_delta(const Configuration& cfg, std::size_t i,
                    std::span<const double> x_new, const GasParameters& p);

/// Gradient of E_n with respect to every coordinate, same layout as points.
std::vector<double> gradient_energy(const PointCloud& points, const GasParameters& p);
std::vector<double> gradient_energy(const Configuration& cfg, const GasParameters& p);

}  // namespace cgas
