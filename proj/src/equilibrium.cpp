#include "coulomb/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "coulomb/error.hpp"

namespace cgas {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void validate(const MeasureLabel& label) {
  std::visit(Overloaded{
                 [](const UniformBall& b) {
                   if (b.d < 2) throw InvalidParameter("uniform ball needs d >= 2");
                   if (!(b.radius > 0.0)) throw InvalidParameter("uniform ball needs radius > 0");
                 },
                 [](const UniformDisc& disc) {
                   if (!(disc.radius > 0.0)) throw InvalidParameter("uniform disc needs radius > 0");
                 },
                 [](const SphericalHeavyTail&) {},
                 [](const TruncationLimit& t) {
                   if (!(t.alpha > 0.0 && t.alpha < 1.0)) {
                     throw InvalidParameter("truncation limit needs alpha in (0, 1)");
                   }
                 },
                 [](const ProductLimit& p) {
                   if (p.m < 1) throw InvalidParameter("product limit needs m >= 1");
                 },
                 [](const Semicircle&) {},
                 [](const Arcsine& a) {
                   if (!(a.a < a.b)) throw InvalidParameter("arcsine law needs a < b");
                 },
             },
             label);
}

// Kernel as a function of the distance only, for shell decompositions.
double radial_kernel(int d, double t) {
  if (d == 2) return -std::log(t);
  return 1.0 / ((d - 2.0) * std::pow(t, d - 2.0));
}

}  // namespace

EquilibriumMeasure::EquilibriumMeasure(MeasureLabel label) : label_(std::move(label)) {
  validate(label_);
}

EquilibriumMeasure equilibrium_for(MeasureLabel label) { return EquilibriumMeasure(std::move(label)); }

int EquilibriumMeasure::dim() const {
  return std::visit(Overloaded{
                        [](const UniformBall& b) { return b.d; },
                        [](const Semicircle&) { return 1; },
                        [](const Arcsine&) { return 1; },
                        [](const auto&) { return 2; },
                    },
                    label_);
}

bool EquilibriumMeasure::is_radial() const { return dim() >= 2; }

double EquilibriumMeasure::density(double r) const {
  return std::visit(
      Overloaded{
          [r](const UniformBall& b) {
            return std::abs(r) <= b.radius ? 1.0 / (unit_ball_volume(b.d) * std::pow(b.radius, b.d)) : 0.0;
          },
          [r](const UniformDisc& disc) {
            return std::abs(r) <= disc.radius ? 1.0 / (kPi * disc.radius * disc.radius) : 0.0;
          },
          [r](const SphericalHeavyTail&) {
            const double s = 1.0 + r * r;
            return 1.0 / (kPi * s * s);
          },
          [r](const TruncationLimit& t) {
            if (r * r > t.alpha) return 0.0;
            const double s = 1.0 - r * r;
            return (1.0 - t.alpha) / (kPi * t.alpha * s * s);
          },
          [r](const ProductLimit& p) {
            if (std::abs(r) > 1.0) return 0.0;
            return std::pow(std::abs(r), 2.0 / p.m - 2.0) / (p.m * kPi);
          },
          [r](const Semicircle&) { return std::abs(r) <= 2.0 ? std::sqrt(4.0 - r * r) / (2.0 * kPi) : 0.0; },
          [r](const Arcsine& a) {
            if (r <= a.a || r >= a.b) return 0.0;
            return 1.0 / (kPi * std::sqrt((r - a.a) * (a.b - r)));
          },
      },
      label_);
}

double EquilibriumMeasure::radial_cdf(double r) const { return radial_cdf_closed(label_, r); }

double EquilibriumMeasure::radial_marginal_density(double r) const {
  const int d = dim();
  if (d == 1) return density(r);
  if (r < 0.0) return 0.0;
  return density(r) * c_d(Dimension(d)) * std::pow(r, d - 1);
}

double EquilibriumMeasure::support_lower() const {
  return std::visit(Overloaded{
                        [](const Semicircle&) { return -2.0; },
                        [](const Arcsine& a) { return a.a; },
                        [](const auto&) { return 0.0; },
                    },
                    label_);
}

double EquilibriumMeasure::support_upper() const {
  return std::visit(Overloaded{
                        [](const UniformBall& b) { return b.radius; },
                        [](const UniformDisc& disc) { return disc.radius; },
                        [](const SphericalHeavyTail&) { return kInf; },
                        [](const TruncationLimit& t) { return std::sqrt(t.alpha); },
                        [](const ProductLimit&) { return 1.0; },
                        [](const Semicircle&) { return 2.0; },
                        [](const Arcsine& a) { return a.b; },
                    },
                    label_);
}

double EquilibriumMeasure::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw InvalidParameter("quantile level must lie in [0, 1]");
  double lo = support_lower();
  double hi = support_upper();
  if (u == 0.0) return lo;
  if (std::isinf(hi)) {
    hi = 1.0;
    while (radial_cdf(hi) < u) hi *= 2.0;
  }
  if (u == 1.0) return hi;
  for (int it = 0; it < 400 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (radial_cdf(mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double radial_cdf_closed(const MeasureLabel& label, double r) {
  return std::visit(
      Overloaded{
          [r](const UniformBall& b) {
            if (r <= 0.0) return 0.0;
            return r >= b.radius ? 1.0 : std::pow(r / b.radius, b.d);
          },
          [r](const UniformDisc& disc) {
            if (r <= 0.0) return 0.0;
            return r >= disc.radius ? 1.0 : (r * r) / (disc.radius * disc.radius);
          },
          [r](const SphericalHeavyTail&) {
            if (r <= 0.0) return 0.0;
            return r * r / (1.0 + r * r);
          },
          [r](const TruncationLimit& t) {
            if (r <= 0.0) return 0.0;
            if (r * r >= t.alpha) return 1.0;
            return std::min(1.0, (1.0 - t.alpha) / t.alpha * r * r / (1.0 - r * r));
          },
          [r](const ProductLimit& p) {
            if (r <= 0.0) return 0.0;
            return r >= 1.0 ? 1.0 : std::pow(r, 2.0 / p.m);
          },
          [r](const Semicircle&) {
            if (r <= -2.0) return 0.0;
            if (r >= 2.0) return 1.0;
            return 0.5 + r * std::sqrt(4.0 - r * r) / (4.0 * kPi) + std::asin(0.5 * r) / kPi;
          },
          [r](const Arcsine& a) {
            if (r <= a.a) return 0.0;
            if (r >= a.b) return 1.0;
            return 2.0 / kPi * std::asin(std::sqrt((r - a.a) / (a.b - a.a)));
          },
      },
      label);
}

double potential_uniform_circle(double r, std::span<const double> x) {
  if (!(r > 0.0)) throw InvalidParameter("circle radius must be positive");
  const double ax = norm(x);
  return ax <= r ? -std::log(r) : -std::log(ax);
}

double potential_uniform_disc(double R, std::span<const double> x) {
  if (!(R > 0.0)) throw InvalidParameter("disc radius must be positive");
  const double ax = norm(x);
  if (ax <= R) return -0.5 * (ax * ax / (R * R) - 1.0 + 2.0 * std::log(R));
  return -std::log(ax);
}

double energy_uniform_closed(std::variant<UniformCircleMeasure, UniformDiscMeasure> which) {
  return std::visit(Overloaded{
                        [](const UniformCircleMeasure& c) {
                          if (!(c.r > 0.0)) throw InvalidParameter("circle radius must be positive");
                          return -std::log(c.r) / 2.0;
                        },
                        [](const UniformDiscMeasure& disc) {
                          if (!(disc.R > 0.0)) throw InvalidParameter("disc radius must be positive");
                          return 0.25 - std::log(disc.R);
                        },
                    },
                    which);
}

double coulomb_potential(const EquilibriumMeasure& m, std::span<const double> x) {
  if (!m.is_radial()) throw InvalidParameter("potential is only available for radial presets");
  const int d = m.dim();
  if (static_cast<int>(x.size()) != d) throw InvalidParameter("point dimension does not match the measure");
  if (const auto* disc = std::get_if<UniformDisc>(&m.label())) return potential_uniform_disc(disc->radius, x);

  // Shell decomposition: a uniform sphere of radius s has potential
  // g(max(s, |x|)) at x, so U(x) = g(rho) F(rho) + int_rho^inf g(s) dF(s).
  const double rho = norm(x);
  const double upper = m.support_upper();
  double inner = 0.0;
  if (rho > 0.0) inner = radial_kernel(d, rho) * m.radial_cdf(rho);
  if (rho >= upper) return inner;

  auto integrand = [&](double s) { return radial_kernel(d, s) * m.radial_marginal_density(s); };
  double error = 0.0;
  double l1 = 0.0;
  double outer = 0.0;
  constexpr double tol = 1e-12;
  if (std::isinf(upper)) {
    boost::math::quadrature::exp_sinh<double> integrator;
    outer = integrator.integrate(integrand, rho, kInf, tol, &error, &l1);
  } else {
    boost::math::quadrature::tanh_sinh<double> integrator;
    outer = integrator.integrate(integrand, rho, upper, tol, &error, &l1);
  }
  if (!std::isfinite(outer) || error > 1e-9 * (1.0 + l1)) {
    throw QuadratureError("potential quadrature did not converge (error estimate " +
                          std::to_string(error) + ")");
  }
  return inner + outer;
}

double density_from_laplacian(const Potential& V, std::span<const double> x, Dimension dim) {
  if (static_cast<int>(x.size()) != dim.value()) throw InvalidParameter("point dimension mismatch");
  return V.laplacian(x) / c_d(dim);
}

std::vector<double> euler_lagrange_values(const Potential& V, const EquilibriumMeasure& m,
                                          const PointCloud& grid) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.point(i);
    values[i] = coulomb_potential(m, x) + V.value(x);
  }
  return values;
}

double euler_lagrange_residual(const Potential& V, const EquilibriumMeasure& m, const PointCloud& grid) {
  if (grid.size() == 0) throw InvalidParameter("Euler-Lagrange grid is empty");
  const auto values = euler_lagrange_values(V, m, grid);
  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = sorted.size();
  const double c = k % 2 == 1 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  double residual = 0.0;
  for (double v : values) residual = std::max(residual, std::abs(v - c));
  return residual;
}

PointCloud sample_equilibrium(const EquilibriumMeasure& m, std::size_t n, Rng& rng) {
  if (!m.is_radial()) throw InvalidParameter("sampling is only available for radial presets");
  const int d = m.dim();
  PointCloud cloud(d, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = m.quantile(uniform01(rng));
    auto p = cloud.point(i);
    if (d == 2) {
      const double theta = 2.0 * kPi * uniform01(rng);
      p[0] = r * std::cos(theta);
      p[1] = r * std::sin(theta);
      continue;
    }
    double s = 0.0;
    for (auto& v : p) {
      v = standard_normal(rng);
      s += v * v;
    }
    const double scale = r / std::sqrt(s);
    for (auto& v : p) v *= scale;
  }
  return cloud;
}

}  // namespace cgas
