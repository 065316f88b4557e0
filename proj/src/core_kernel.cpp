#include "coulomb/core_kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "coulomb/error.hpp"

namespace cgas {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void require_same_dim(int d, std::span<const double> x) {
  if (static_cast<int>(x.size()) != d) {
    throw InvalidParameter("point has " + std::to_string(x.size()) +
                           " coordinates, expected " + std::to_string(d));
  }
}

}  // namespace

Dimension::Dimension(int d) : d_(d) {
  if (d < 2) throw InvalidParameter("dimension must be >= 2, got " + std::to_string(d));
}

PointCloud::PointCloud(int dim, std::size_t count)
    : dim_(dim), coords_(count * static_cast<std::size_t>(dim), 0.0) {
  if (dim < 1) throw InvalidParameter("point cloud dimension must be >= 1");
}

PointCloud::PointCloud(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim < 1) throw InvalidParameter("point cloud dimension must be >= 1");
  if (coords_.size() % static_cast<std::size_t>(dim) != 0) {
    throw InvalidParameter("coordinate count is not a multiple of the dimension");
  }
}

// ---------------------------------------------------------------------------
// Potential

Potential::Potential(Kind kind, double coefficient, RadialProfile profile)
    : kind_(kind), coefficient_(coefficient), profile_(std::move(profile)) {}

Potential Potential::quadratic(double gamma) {
  if (!(gamma > 0.0)) throw InvalidParameter("quadratic potential needs gamma > 0");
  return Potential(Kind::Quadratic, gamma, {});
}

Potential Potential::spherical_log(double prefactor) {
  if (!(prefactor > 0.0)) throw InvalidParameter("spherical potential needs a positive prefactor");
  return Potential(Kind::SphericalLog, prefactor, {});
}

Potential Potential::radial(RadialProfile profile) {
  if (!profile.value || !profile.first || !profile.second) {
    throw InvalidParameter("radial potential needs value, first and second derivative");
  }
  return Potential(Kind::RadialCustom, 0.0, std::move(profile));
}

double Potential::value(std::span<const double> x) const {
  const double r2 = norm2(x);
  switch (kind_) {
    case Kind::Quadratic:
      return coefficient_ * r2;
    case Kind::SphericalLog:
      return coefficient_ * std::log1p(r2);
    case Kind::RadialCustom:
      return profile_.value(std::sqrt(r2));
  }
  return 0.0;
}

double Potential::radial_first(double r) const {
  switch (kind_) {
    case Kind::Quadratic:
      return 2.0 * coefficient_ * r;
    case Kind::SphericalLog:
      return 2.0 * coefficient_ * r / (1.0 + r * r);
    case Kind::RadialCustom:
      return profile_.first(r);
  }
  return 0.0;
}

double Potential::radial_second(double r) const {
  switch (kind_) {
    case Kind::Quadratic:
      return 2.0 * coefficient_;
    case Kind::SphericalLog: {
      const double s = 1.0 + r * r;
      return 2.0 * coefficient_ * (1.0 - r * r) / (s * s);
    }
    case Kind::RadialCustom:
      return profile_.second(r);
  }
  return 0.0;
}

void Potential::gradient(std::span<const double> x, std::span<double> out) const {
  if (kind_ == Kind::Quadratic) {
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = 2.0 * coefficient_ * x[k];
    return;
  }
  if (kind_ == Kind::SphericalLog) {
    const double f = 2.0 * coefficient_ / (1.0 + norm2(x));
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = f * x[k];
    return;
  }
  const double r = std::sqrt(norm2(x));
  if (r == 0.0) {
    for (auto& v : out) v = 0.0;
    return;
  }
  const double f = radial_first(r) / r;
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = f * x[k];
}

double Potential::laplacian(std::span<const double> x) const {
  const auto d = static_cast<double>(x.size());
  if (kind_ == Kind::Quadratic) return 2.0 * coefficient_ * d;
  const double r = std::sqrt(norm2(x));
  if (r == 0.0) {
    // h'(r)/r -> h''(0) for a smooth radial profile
    return d * radial_second(0.0);
  }
  return radial_second(r) + (d - 1.0) * radial_first(r) / r;
}

// ---------------------------------------------------------------------------
// Gas parameters and configurations

GasParameters::GasParameters(Dimension dim_, std::size_t n_, double beta_, Potential potential_,
                             Support support_)
    : dim(dim_), n(n_), beta(beta_), potential(std::move(potential_)), support(support_) {
  if (n == 0) throw InvalidParameter("n must be >= 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidParameter("beta must be positive and finite");
  if (support == Support::RealLine && dim.value() != 2) {
    throw InvalidParameter("real-line support requires d = 2");
  }
}

GasParameters GasParameters::beta_ginibre(std::size_t n, double beta) {
  return {Dimension(2), n, beta, Potential::quadratic(0.5)};
}

GasParameters GasParameters::spherical(std::size_t n, double beta) {
  if (n == 0) throw InvalidParameter("n must be >= 1");
  const double prefactor = 0.5 * static_cast<double>(n + 1) / static_cast<double>(n);
  return {Dimension(2), n, beta, Potential::spherical_log(prefactor)};
}

GasParameters GasParameters::hermite(std::size_t n, double beta) {
  return {Dimension(2), n, beta, Potential::quadratic(0.25), Support::RealLine};
}

Configuration Configuration::create(PointCloud points, const GasParameters& p) {
  Configuration cfg{std::move(points), 0.0};
  cfg.cached_energy = energy_total(cfg.points, p);
  return cfg;
}

// ---------------------------------------------------------------------------
// Kernel

double coulomb_g_r2(int d, double r2) {
  if (r2 == 0.0) throw CollisionError("Coulomb kernel evaluated at coincident points");
  if (d == 2) return -0.5 * std::log(r2);
  if (d == 3) return 1.0 / std::sqrt(r2);
  const double s = d - 2.0;
  return 1.0 / (s * std::pow(r2, 0.5 * s));
}

double coulomb_g(Dimension dim, std::span<const double> x) {
  require_same_dim(dim.value(), x);
  const double r2 = norm2(x);
  if (r2 == 0.0) throw DomainError("Coulomb kernel is infinite at the origin");
  return coulomb_g_r2(dim.value(), r2);
}

Point coulomb_grad(Dimension dim, std::span<const double> x) {
  require_same_dim(dim.value(), x);
  const double r2 = norm2(x);
  if (r2 == 0.0) throw DomainError("Coulomb kernel gradient is undefined at the origin");
  const double scale = -1.0 / std::pow(r2, 0.5 * dim.value());
  Point out(x.begin(), x.end());
  for (auto& v : out) v *= scale;
  return out;
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double c_d(Dimension dim) {
  const double d = dim.value();
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

// ---------------------------------------------------------------------------
// Energy

double energy_total(const PointCloud& points, const GasParameters& p) {
  const int d = p.dim.value();
  if (points.dim() != d) throw InvalidParameter("configuration dimension does not match the gas");
  const std::size_t n = points.size();
  const double nd = static_cast<double>(p.n);
  double confinement = 0.0;
  double pair = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = points.point(i);
    confinement += p.potential.value(xi);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = points.point(j);
      double r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = xi[k] - xj[k];
        r2 += diff * diff;
      }
      pair += coulomb_g_r2(d, r2);
    }
  }
  return nd * confinement + pair;
}

double energy_total(const Configuration& cfg, const GasParameters& p) {
  return energy_total(cfg.points, p);
}

double energy_delta(const Configuration& cfg, std::size_t i, std::span<const double> x_new,
                    const GasParameters& p) {
  const int d = p.dim.value();
  require_same_dim(d, x_new);
  const auto& pts = cfg.points;
  const auto xi = pts.point(i);
  const std::size_t n = pts.size();
  double delta = static_cast<double>(p.n) * (p.potential.value(x_new) - p.potential.value(xi));
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const auto xj = pts.point(j);
    double r2_new = 0.0;
    double r2_old = 0.0;
    for (int k = 0; k < d; ++k) {
      const double a = x_new[k] - xj[k];
      const double b = xi[k] - xj[k];
      r2_new += a * a;
      r2_old += b * b;
    }
    if (r2_new == 0.0) throw CollisionError("proposed position collides with another particle");
    if (r2_new == r2_old) continue;
    if (d == 2) {
      delta -= 0.5 * std::log(r2_new / r2_old);
    } else {
      delta += coulomb_g_r2(d, r2_new) - coulomb_g_r2(d, r2_old);
    }
  }
  return delta;
}

std::vector<double> gradient_energy(const PointCloud& points, const GasParameters& p) {
  const int d = p.dim.value();
  if (points.dim() != d) throw InvalidParameter("configuration dimension does not match the gas");
  const std::size_t n = points.size();
  const double nd = static_cast<double>(p.n);
  std::vector<double> grad(points.coords().size(), 0.0);
  std::vector<double> vgrad(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = points.point(i);
    p.potential.gradient(xi, vgrad);
    for (int k = 0; k < d; ++k) grad[i * d + k] += nd * vgrad[k];
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = points.point(j);
      double r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = xi[k] - xj[k];
        r2 += diff * diff;
      }
      if (r2 == 0.0) throw CollisionError("gradient evaluated at coincident points");
      // grad_x g(x - y) = -(x - y)/|x - y|^d
      const double scale = -1.0 / std::pow(r2, 0.5 * d);
      for (int k = 0; k < d; ++k) {
        const double f = scale * (xi[k] - xj[k]);
        grad[i * d + k] += f;
        grad[j * d + k] -= f;
      }
    }
  }
  return grad;
}

std::vector<double> gradient_energy(const Configuration& cfg, const GasParameters& p) {
  return gradient_energy(cfg.points, p);
}

}  // namespace cgas
