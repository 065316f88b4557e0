#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "coulomb/detkernel.hpp"
#include "coulomb/error.hpp"
#include "coulomb/random.hpp"
#include "coulomb/stats.hpp"

using namespace cgas;
using C = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
using Big = boost::multiprecision::cpp_bin_float_50;

// |e_n(w) - e^w 1_{inside}| in 50-digit arithmetic.
double big_gap(long n, C w, bool inside) {
  Big re = 0;
  Big im = 0;
  Big tr = 1;
  Big ti = 0;
  const Big wr = w.real();
  const Big wi = w.imag();
  for (long l = 0; l < n; ++l) {
    re += tr;
    im += ti;
    const Big nr = (tr * wr - ti * wi) / (l + 1);
    const Big ni = (tr * wi + ti * wr) / (l + 1);
    tr = nr;
    ti = ni;
  }
  if (inside) {
    const Big m = exp(wr);
    re -= m * cos(wi);
    im -= m * sin(wi);
  }
  return static_cast<double>(sqrt(re * re + im * im));
}

double gamma_weight(C u) { return std::exp(-std::norm(u)) / kPi; }

// phi_n(z_1..z_n) from the product formula.
double product_formula(const std::vector<C>& z) {
  const std::size_t n = z.size();
  double v = 1.0;
  for (std::size_t k = 0; k < n; ++k) v *= gamma_weight(z[k]) / std::tgamma(static_cast<double>(k) + 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) v *= std::norm(z[i] - z[j]);
  }
  return v;
}

// int over C of f by radial Gauss-Kronrod and an angular trapezoid rule.
template <class F>
double plane_integral(F f, double radius = 9.0, int angles = 96) {
  auto ring = [&](double r) {
    double s = 0.0;
    for (int j = 0; j < angles; ++j) s += f(std::polar(r, 2.0 * kPi * j / angles));
    return r * s * 2.0 * kPi / angles;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(ring, 0.0, radius, 10, 1e-12);
}

}  // namespace

TEST_CASE("truncated exponential examples") {
  for (C z : {C(0, 0), C(3, 1), C(-50, 2)}) CHECK(truncated_exp(1, z) == C(1.0, 0.0));
  CHECK(truncated_exp(2, 3.0).real() == doctest::Approx(4.0));
  const double viaq = std::exp(10.0) * boost::math::gamma_q(50.0, 10.0);
  CHECK(truncated_exp(50, 10.0).real() == doctest::Approx(viaq).epsilon(1e-10));
  CHECK(std::exp(log_truncated_exp(50, 10.0)) == doctest::Approx(viaq).epsilon(1e-10));
  // far beyond double range only the log form survives
  const double big = log_truncated_exp(400, 1000.0);
  CHECK(std::isfinite(big));
  CHECK(big == doctest::Approx(399.0 * std::log(1000.0) - std::lgamma(400.0) + std::log(1.0 / (1.0 - 0.399))).epsilon(1e-3));
  CHECK_THROWS_AS(truncated_exp(0, 1.0), InvalidParameter);
}

TEST_CASE("remainder bound") {
  for (long n : {1L, 5L, 40L}) CHECK(remainder_bound(n, 0.0) == 0.0);
  const double expected = 10.0 + 10.0 * std::log(0.5) - 0.5 * std::log(2.0 * kPi * 10.0) + std::log(11.0 / 6.0);
  CHECK(log_remainder_bound(10, 0.5) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(std::isfinite(remainder_bound(10, 0.5)));
}

TEST_CASE("accurate truncation error agrees with 50-digit arithmetic") {
  for (long n : {2L, 5L, 10L, 30L}) {
    for (double rho : {0.05, 0.4, 0.9, 1.0, 1.1, 1.7}) {
      for (double t : {0.0, 1.3, 3.1}) {
        const C z = std::polar(rho, t);
        const double oracle = big_gap(n, static_cast<double>(n) * z, rho <= 1.0);
        CHECK(truncation_error(n, z) == doctest::Approx(oracle).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("remainder bound holds on the grid") {
  long violations = 0;
  for (long n : {2L, 5L, 10L, 30L}) {
    for (int i = 0; i < 40; ++i) {
      for (int j = 0; j < 40; ++j) {
        const C z = std::polar(2.0 * i / 39.0, 2.0 * kPi * j / 40.0);
        const double lhs = big_gap(n, static_cast<double>(n) * z, std::abs(z) <= 1.0);
        if (lhs > remainder_bound(n, z)) ++violations;
      }
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("kernel basics") {
  for (long n : {1L, 3L, 17L}) {
    const KernelContext ctx(n);
    CHECK(kernel_K(ctx, 0.0, 0.0).real() == doctest::Approx(1.0 / kPi));
  }
  CHECK_THROWS_AS(KernelContext(0), InvalidParameter);
  const KernelContext ctx(6);
  const C a(0.3, -0.2);
  const C b(-0.5, 0.7);
  CHECK(std::abs(kernel_K(ctx, a, b) - std::conj(kernel_K(ctx, b, a))) <= 1e-15);
}

TEST_CASE("kernel integrates to n and reproduces itself") {
  for (long n : {1L, 2L, 5L}) {
    const KernelContext ctx(n);
    const double mass = plane_integral([&](C z) { return kernel_K(ctx, z, z).real(); });
    CHECK(std::abs(mass - static_cast<double>(n)) <= 1e-6);
  }
  const KernelContext ctx(5);
  const C x(0.3, 0.0);
  const C z(0.1, -0.2);
  const double re = plane_integral([&](C y) { return (kernel_K(ctx, x, y) * kernel_K(ctx, y, z)).real(); });
  const double im = plane_integral([&](C y) { return (kernel_K(ctx, x, y) * kernel_K(ctx, y, z)).imag(); });
  CHECK(std::abs(C(re, im) - kernel_K(ctx, x, z)) <= 1e-6);
}

TEST_CASE("k-point densities") {
  const KernelContext ctx(7);
  const std::vector<C> origin{0.0};
  CHECK(density_kpoint(ctx, origin) == doctest::Approx(1.0 / (7.0 * kPi)));
  const std::vector<C> twice{C(0.4, 0.1), C(0.4, 0.1)};
  CHECK(std::abs(density_kpoint(ctx, twice)) <= 1e-15);

  const KernelContext two(2);
  const std::vector<C> pair{0.0, 1.0};
  CHECK(density_kpoint(two, pair) == doctest::Approx(std::exp(-1.0) / (2.0 * kPi * kPi)).epsilon(1e-12));

  Rng rng(1);
  for (long n : {2L, 3L}) {
    const KernelContext ctx_n(n);
    for (int t = 0; t < 50; ++t) {
      std::vector<C> z(static_cast<std::size_t>(n));
      for (auto& v : z) v = C(standard_normal(rng), standard_normal(rng));
      CHECK(density_kpoint(ctx_n, z) == doctest::Approx(product_formula(z)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(density_kpoint(ctx, std::vector<C>{}), InvalidParameter);
  CHECK_THROWS_AS(density_kpoint(two, std::vector<C>{0.0, 1.0, 2.0}), InvalidParameter);
}

TEST_CASE("k-point densities are nonnegative and exchangeable") {
  Rng rng(2);
  std::uniform_int_distribution<long> pick_n(1, 20);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const long n = pick_n(rng);
    const long k = std::min<long>(n, 1 + t % 4);
    std::vector<C> z(static_cast<std::size_t>(k));
    for (auto& v : z) v = C(1.5 * standard_normal(rng), 1.5 * standard_normal(rng));
    const KernelContext ctx(n);
    const double d = density_kpoint(ctx, z);
    worst = std::min(worst, d);
    if (k >= 2 && t % 10 == 0) {
      auto perm = z;
      std::reverse(perm.begin(), perm.end());
      CHECK(density_kpoint(ctx, perm) == doctest::Approx(d).epsilon(1e-12));
    }
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("two-point marginal integrates to the one-point density") {
  for (long n : {2L, 5L}) {
    const KernelContext ctx(n);
    for (C z1 : {C(0.0, 0.0), C(0.7, -0.4)}) {
      const double m = plane_integral([&](C z2) {
        const std::vector<C> pts{z1, z2};
        return density_kpoint(ctx, pts);
      });
      const std::vector<C> one{z1};
      CHECK(std::abs(m - density_kpoint(ctx, one)) <= 1e-6);
    }
  }
}

TEST_CASE("scaled one-point density") {
  CHECK(scaled_one_point(KernelContext(1), 0.0) == doctest::Approx(1.0 / kPi));
  const KernelContext big(1000);
  CHECK(std::abs(scaled_one_point(big, 0.8) - 1.0 / kPi) <= 1e-6);
  CHECK(scaled_one_point(big, 1.3) <= 1e-6);
  // the remainder bound controls the bulk and outer errors
  for (double r : {0.3, 0.8}) {
    const double bound = std::exp(-1000.0 * r * r) * remainder_bound(1000, r * r) / kPi;
    CHECK(std::abs(scaled_one_point(big, r) - 1.0 / kPi) <= bound + 1e-16);
  }
  CHECK(std::log(scaled_one_point(big, 1.3)) <= -1000.0 * 1.69 + log_remainder_bound(1000, 1.69) - std::log(kPi));

  // agrees with the unscaled one-point density
  const KernelContext ctx(12);
  const C z(0.45, -0.3);
  const std::vector<C> scaled{std::sqrt(12.0) * z};
  CHECK(scaled_one_point(ctx, z) == doctest::Approx(12.0 * density_kpoint(ctx, scaled)).epsilon(1e-12));

  for (long n : {1L, 7L, 20L, 50L}) {
    const KernelContext c(n);
    boost::math::quadrature::gauss_kronrod<double, 61> q;
    const double mass =
        q.integrate([&](double r) { return 2.0 * kPi * r * scaled_one_point(c, r); }, 0.0, 6.0, 15, 1e-12);
    CHECK(std::abs(mass - 1.0) <= 1e-6);
  }
}

TEST_CASE("Poisson view of the one-point density") {
  Rng rng(3);
  const long n = 20;
  for (double r : {0.8, 1.2}) {
    std::poisson_distribution<long> pois(static_cast<double>(n) * r * r);
    const int N = 100000;
    int hits = 0;
    for (int t = 0; t < N; ++t) hits += pois(rng) < n ? 1 : 0;
    const double p = static_cast<double>(hits) / N;
    const double se = std::sqrt(p * (1.0 - p) / N);
    CHECK(std::abs(kPi * scaled_one_point(KernelContext(n), r) - p) <= 3.0 * se);
  }
}

TEST_CASE("two-point defect") {
  const KernelContext ctx(15);
  Rng rng(4);
  for (int t = 0; t < 500; ++t) {
    const C z1(0.8 * standard_normal(rng), 0.8 * standard_normal(rng));
    const C z2(0.8 * standard_normal(rng), 0.8 * standard_normal(rng));
    const double prod = scaled_one_point(ctx, z1) * scaled_one_point(ctx, z2);
    const double d = two_point_defect(ctx, z1, z2);
    CHECK(d >= -prod - 1e-15);
    CHECK(d <= prod / 14.0 + 1e-15);
    // independent route through the 2x2 determinant
    const std::vector<C> pts{std::sqrt(15.0) * z1, std::sqrt(15.0) * z2};
    const double direct = 225.0 * density_kpoint(ctx, pts) - prod;
    CHECK(std::abs(d - direct) <= 1e-12 * (1.0 + prod));
  }
  const C z(0.3, 0.2);
  CHECK(two_point_defect(ctx, z, z) == doctest::Approx(-std::pow(scaled_one_point(ctx, z), 2)).epsilon(1e-12));
  CHECK_THROWS_AS(two_point_defect(KernelContext(1), 0.0, 0.5), InvalidParameter);
}

TEST_CASE("bulk defect decreases with n") {
  std::vector<double> sup;
  for (long n : {10L, 20L, 40L}) {
    const KernelContext ctx(n);
    double worst = 0.0;
    for (int a = 0; a < 12; ++a) {
      for (int b = 0; b < 12; ++b) {
        const C z1 = std::polar(0.8 * a / 11.0, 0.0);
        const C z2 = std::polar(0.8 * b / 11.0, 2.0);
        if (std::abs(z1 - z2) < 0.3) continue;
        worst = std::max(worst, std::abs(two_point_defect(ctx, z1, z2)));
      }
    }
    sup.push_back(worst);
  }
  CHECK(is_strictly_decreasing(sup));
}

TEST_CASE("Gamma-Poisson identity") {
  const auto [a1, b1] = gamma_poisson_tail(1, 2.0);
  CHECK(a1 == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(b1 == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  const auto [a3, b3] = gamma_poisson_tail(3, 1.0);
  CHECK(b3 == doctest::Approx(2.5 * std::exp(-1.0)).epsilon(1e-14));
  boost::math::quadrature::exp_sinh<double> q;
  const double integral = q.integrate([](double t) { return (1.0 + t) * (1.0 + t) * std::exp(-(1.0 + t)); }) / 2.0;
  CHECK(a3 == doctest::Approx(integral).epsilon(1e-12));
  for (long n = 1; n <= 30; ++n) {
    for (double r : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const auto [x, y] = gamma_poisson_tail(n, r);
      CHECK(std::abs(x - y) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(gamma_poisson_tail(3, 0.0), InvalidParameter);
}
