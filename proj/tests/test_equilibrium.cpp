#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "coulomb/equilibrium.hpp"
#include "coulomb/error.hpp"
#include "coulomb/exactlaws.hpp"
#include "coulomb/stats.hpp"

using namespace cgas;

namespace {

constexpr double kPi = std::numbers::pi;

// Mass of the radial density on [0, r], independent of radial_cdf.
double radial_mass(const EquilibriumMeasure& m, double lo, double r) {
  auto integrand = [&](double s) {
    double v = 0.0;
    if (m.dim() == 1) {
      v = m.density(s);
    } else if (m.dim() == 2) {
      v = 2.0 * kPi * s * m.density(s);
    } else {
      v = m.dim() * unit_ball_volume(m.dim()) * std::pow(s, m.dim() - 1) * m.density(s);
    }
    // integrable endpoint singularities: the abscissa may round onto them
    return std::isfinite(v) ? v : 0.0;
  };
  if (!std::isfinite(r)) {
    boost::math::quadrature::exp_sinh<double> q;
    return q.integrate([&](double t) { return integrand(lo + t); });
  }
  if (r <= lo) return 0.0;
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(integrand, lo, r);
}

std::vector<MeasureLabel> presets() {
  return {UniformBall{3, 1.0}, UniformBall{5, 1.0}, UniformDisc{}, UniformDisc{2.0}, SphericalHeavyTail{},
          TruncationLimit{0.5}, TruncationLimit{0.25}, ProductLimit{1}, ProductLimit{2}, ProductLimit{3},
          Semicircle{},         Arcsine{-1.0, 2.0}};
}

}  // namespace

TEST_CASE("table densities") {
  CHECK(EquilibriumMeasure(UniformDisc{}).density(0.0) == doctest::Approx(1.0 / kPi));
  CHECK(EquilibriumMeasure(SphericalHeavyTail{}).density(0.0) == doctest::Approx(1.0 / kPi));
  CHECK(EquilibriumMeasure(UniformBall{3, 1.0}).density(0.2) == doctest::Approx(3.0 / (4.0 * kPi)));
  const EquilibriumMeasure p1(ProductLimit{1});
  const EquilibriumMeasure disc(UniformDisc{});
  for (double r = 0.05; r < 1.0; r += 0.1) CHECK(p1.density(r) == doctest::Approx(disc.density(r)));
  CHECK(EquilibriumMeasure(Semicircle{}).density(0.0) == doctest::Approx(1.0 / kPi));
  CHECK(EquilibriumMeasure(UniformDisc{}).density(1.5) == 0.0);
}

TEST_CASE("invalid labels are rejected") {
  CHECK_THROWS_AS(EquilibriumMeasure(TruncationLimit{1.0}), InvalidParameter);
  CHECK_THROWS_AS(EquilibriumMeasure(TruncationLimit{0.0}), InvalidParameter);
  CHECK_THROWS_AS(EquilibriumMeasure(ProductLimit{0}), InvalidParameter);
  CHECK_THROWS_AS(EquilibriumMeasure(Arcsine{1.0, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(EquilibriumMeasure(UniformBall{1, 1.0}), InvalidParameter);
}

TEST_CASE("radial CDF closed forms") {
  CHECK(radial_cdf_closed(UniformDisc{}, 1.0) == doctest::Approx(1.0));
  CHECK(radial_cdf_closed(ProductLimit{2}, 0.25) == doctest::Approx(0.25));
  CHECK(radial_mass(EquilibriumMeasure(ProductLimit{2}), 0.0, 0.25) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(radial_cdf_closed(SphericalHeavyTail{}, 1.0) == doctest::Approx(0.5));
  CHECK(radial_mass(EquilibriumMeasure(SphericalHeavyTail{}), 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("every preset integrates to one and its CDF matches quadrature") {
  for (const auto& label : presets()) {
    const EquilibriumMeasure m(label);
    const double lo = m.support_lower();
    const double hi = m.support_upper();
    CHECK(radial_mass(m, lo, hi) == doctest::Approx(1.0).epsilon(1e-8));
    const double top = std::isfinite(hi) ? hi : 20.0;
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
      const double r = lo + (top - lo) * i / 50.0;
      const double cdf = radial_cdf_closed(label, r);
      CHECK(cdf >= prev);
      prev = cdf;
      CHECK(std::abs(cdf - radial_mass(m, lo, r)) <= 1e-8);
      CHECK(m.radial_cdf(r) == doctest::Approx(cdf).epsilon(1e-12));
    }
    if (std::isfinite(hi)) CHECK(radial_cdf_closed(label, hi) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("quantile inverts the radial CDF") {
  for (const auto& label : presets()) {
    const EquilibriumMeasure m(label);
    for (double u : {0.01, 0.2, 0.5, 0.77, 0.99}) CHECK(m.radial_cdf(m.quantile(u)) == doctest::Approx(u).epsilon(1e-10));
  }
}

TEST_CASE("uniform circle potential") {
  CHECK(potential_uniform_circle(1.0, std::vector<double>{0.5, 0.0}) == doctest::Approx(0.0));
  CHECK(potential_uniform_circle(2.0, std::vector<double>{3.0, 0.0}) == doctest::Approx(-std::log(3.0)));
  const double inside = potential_uniform_circle(2.0, std::vector<double>{2.0 - 1e-15, 0.0});
  const double outside = potential_uniform_circle(2.0, std::vector<double>{2.0 + 1e-15, 0.0});
  CHECK(std::abs(inside - outside) <= 1e-12);
  CHECK(inside == doctest::Approx(-std::log(2.0)));
}

TEST_CASE("uniform disc potential") {
  CHECK(potential_uniform_disc(1.0, std::vector<double>{0.0, 0.0}) == doctest::Approx(0.5));
  CHECK(std::abs(potential_uniform_disc(1.0, std::vector<double>{1.0, 0.0})) <= 1e-15);
  for (double R : {0.5, 1.0, 3.0}) {
    const double a = potential_uniform_disc(R, std::vector<double>{R * (1 - 1e-15), 0.0});
    const double b = potential_uniform_disc(R, std::vector<double>{R * (1 + 1e-15), 0.0});
    CHECK(std::abs(a - b) <= 1e-12);
  }
  // Monte-Carlo average of g(x - Y), Y uniform on the disc
  Rng rng(99);
  const std::size_t N = 1000000;
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double r = std::sqrt(uniform01(rng));
    const double t = 2.0 * kPi * uniform01(rng);
    const double g = -std::log(std::hypot(0.3 - r * std::cos(t), r * std::sin(t)));
    s += g;
    s2 += g * g;
  }
  const double mean = s / N;
  const double se = std::sqrt((s2 / N - mean * mean) / N);
  CHECK(std::abs(mean - potential_uniform_disc(1.0, std::vector<double>{0.3, 0.0})) <= 3.0 * se);
}

TEST_CASE("energies of uniform measures") {
  CHECK(energy_uniform_closed(UniformCircleMeasure{1.0}) == 0.0);
  CHECK(energy_uniform_closed(UniformCircleMeasure{2.0}) == doctest::Approx(-std::log(2.0) / 2));
  CHECK(energy_uniform_closed(UniformDiscMeasure{1.0}) == doctest::Approx(0.25));
  CHECK(energy_uniform_closed(UniformDiscMeasure{2.0}) == doctest::Approx(0.25 - std::log(2.0)));
  // radial quadrature of int U dmu for both laws
  boost::math::quadrature::tanh_sinh<double> q;
  for (double R : {1.0, 2.0}) {
    const double full = q.integrate(
        [R](double r) { return 2.0 * r / (R * R) * potential_uniform_disc(R, std::vector<double>{r, 0.0}); }, 0.0, R);
    CHECK(std::abs(full - energy_uniform_closed(UniformDiscMeasure{R})) <= 1e-6);
  }
  for (double r : {0.5, 1.0, 3.0}) {
    // U of the circle law is constant on its support
    const double half = 0.5 * potential_uniform_circle(r, std::vector<double>{r, 0.0});
    CHECK(std::abs(half - energy_uniform_closed(UniformCircleMeasure{r})) <= 1e-12);
  }
}

TEST_CASE("coulomb potential by quadrature agrees with closed forms") {
  const EquilibriumMeasure disc(UniformDisc{});
  for (double r : {0.0, 0.3, 0.9, 1.5}) {
    const std::vector<double> x{r, 0.0};
    CHECK(coulomb_potential(disc, x) == doctest::Approx(potential_uniform_disc(1.0, x)).epsilon(1e-12));
  }
  // product m = 1 is the disc but goes through the generic shell route
  const EquilibriumMeasure p1(ProductLimit{1});
  for (double r : {0.2, 0.7, 2.0}) {
    const std::vector<double> x{r, 0.0};
    CHECK(coulomb_potential(p1, x) == doctest::Approx(potential_uniform_disc(1.0, x)).epsilon(1e-9));
  }
  // the 3-ball: U(x) = (3 - |x|^2) / 2 inside for g = 1/|x|
  const EquilibriumMeasure ball(UniformBall{3, 1.0});
  CHECK(coulomb_potential(ball, std::vector<double>{0.5, 0.0, 0.0}) == doctest::Approx((3.0 - 0.25) / 2.0).epsilon(1e-9));
  CHECK(coulomb_potential(ball, std::vector<double>{2.0, 0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("density from the Laplacian") {
  CHECK(density_from_laplacian(Potential::quadratic(0.5), std::vector<double>{0.1, 0.2}, Dimension(2)) ==
        doctest::Approx(1.0 / kPi));
  CHECK(density_from_laplacian(Potential::quadratic(0.5), std::vector<double>{0.1, 0.2, 0.0}, Dimension(3)) ==
        doctest::Approx(3.0 / (4.0 * kPi)));
  CHECK(density_from_laplacian(Potential::spherical_log(0.5), std::vector<double>{0.0, 0.0}, Dimension(2)) ==
        doctest::Approx(1.0 / kPi));
  // finite-difference Laplacian of the spherical potential as the oracle
  const auto V = Potential::spherical_log(0.5);
  const double h = 1e-4;
  const std::vector<double> x{0.4, 0.3};
  double lap = 0.0;
  for (int k = 0; k < 2; ++k) {
    auto xp = x;
    auto xm = x;
    xp[k] += h;
    xm[k] -= h;
    lap += (V.value(xp) - 2 * V.value(x) + V.value(xm)) / (h * h);
  }
  CHECK(density_from_laplacian(V, x, Dimension(2)) == doctest::Approx(lap / (2 * kPi)).epsilon(1e-6));
  CHECK(density_from_laplacian(V, x, Dimension(2)) ==
        doctest::Approx(EquilibriumMeasure(SphericalHeavyTail{}).density(0.5)).epsilon(1e-12));
  const EquilibriumMeasure disc(UniformDisc{});
  for (double r = 0.0; r < 1.0; r += 0.1) {
    CHECK(density_from_laplacian(Potential::quadratic(0.5), std::vector<double>{r, 0.0}, Dimension(2)) ==
          disc.density(r));
  }
}

TEST_CASE("Euler-Lagrange conditions for the Ginibre preset") {
  const auto V = Potential::quadratic(0.5);
  const EquilibriumMeasure disc(UniformDisc{});
  PointCloud inside(2, 100);
  for (std::size_t i = 0; i < 100; ++i) {
    const double r = std::sqrt((i + 0.5) / 100.0);
    const double t = 2.399963 * i;
    inside.point(i)[0] = r * std::cos(t);
    inside.point(i)[1] = r * std::sin(t);
  }
  CHECK(euler_lagrange_residual(V, disc, inside) <= 1e-12);
  const double c = euler_lagrange_values(V, disc, inside)[0];
  CHECK(c == doctest::Approx(0.5));

  PointCloud outside(2, 50);
  for (std::size_t i = 0; i < 50; ++i) {
    const double r = 1.0 + 3.0 * (i + 1) / 50.0;
    outside.point(i)[0] = r * std::cos(0.7 * i);
    outside.point(i)[1] = r * std::sin(0.7 * i);
  }
  for (double v : euler_lagrange_values(V, disc, outside)) CHECK(v - c >= 0.0);
  const auto at2 = euler_lagrange_values(V, disc, PointCloud(2, std::vector<double>{2.0, 0.0}));
  CHECK(at2[0] - c == doctest::Approx(-std::log(2.0) + 2.0 - 0.5));

  // a wrong support radius is detected
  CHECK(euler_lagrange_residual(V, EquilibriumMeasure(UniformDisc{2.0}), inside) >= 0.1);
}

TEST_CASE("sampling from equilibrium measures") {
  Rng rng(4);
  const auto disc = sample_equilibrium(EquilibriumMeasure(UniformDisc{}), 10000, rng);
  std::vector<double> r2;
  for (std::size_t i = 0; i < disc.size(); ++i) r2.push_back(std::pow(disc.point(i)[0], 2) + std::pow(disc.point(i)[1], 2));
  CHECK(ks_test(r2, DistributionSpec::uniform(0.0, 1.0)).p_value.value() > 0.01);

  const auto heavy = sample_equilibrium(EquilibriumMeasure(SphericalHeavyTail{}), 10000, rng);
  const auto radii = EmpiricalMeasure(heavy).radii();
  CHECK(ks_test(radii, [](double r) { return r * r / (1 + r * r); }, "r^2/(1+r^2)").p_value.value() > 0.01);

  Rng a(77);
  Rng b(77);
  CHECK(sample_equilibrium(EquilibriumMeasure(TruncationLimit{0.5}), 50, a) ==
        sample_equilibrium(EquilibriumMeasure(TruncationLimit{0.5}), 50, b));
  CHECK_THROWS_AS(sample_equilibrium(EquilibriumMeasure(Semicircle{}), 5, rng), InvalidParameter);

  const auto ball = sample_equilibrium(EquilibriumMeasure(UniformBall{3, 1.0}), 5000, rng);
  std::vector<double> r3;
  for (double r : EmpiricalMeasure(ball).radii()) r3.push_back(r * r * r);
  CHECK(ks_test(r3, DistributionSpec::uniform(0.0, 1.0)).p_value.value() > 0.01);
}
