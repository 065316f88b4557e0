#include "coulomb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "coulomb/error.hpp"

namespace cgas {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_samples(std::size_t n) {
  if (n < kMinKsSamples) {
    throw InvalidParameter("KS test needs at least " + std::to_string(kMinKsSamples) + " samples, got " +
                           std::to_string(n));
  }
}

// Fixed Gauss-Legendre on short sub-pieces: the CDFs are smooth between
// sample points, and adaptive error estimates only chase roundoff there.
double integrate_cdf(const std::function<double(double)>& cdf, double a, double b) {
  if (!(b > a)) return 0.0;
  constexpr double kMaxPiece = 0.05;
  const auto pieces = static_cast<long>(std::ceil((b - a) / kMaxPiece));
  const double h = (b - a) / static_cast<double>(pieces);
  double total = 0.0;
  for (long k = 0; k < pieces; ++k) {
    const double lo = a + h * static_cast<double>(k);
    const double hi = k + 1 == pieces ? b : lo + h;
    total += boost::math::quadrature::gauss<double, 20>::integrate(cdf, lo, hi);
  }
  return total;
}

// int_a^b |c - F(r)| dr for monotone F.
double abs_gap_integral(const std::function<double(double)>& cdf, double c, double a, double b) {
  if (!(b > a)) return 0.0;
  const double fa = cdf(a);
  const double fb = cdf(b);
  double split = a;
  if (fa >= c) {
    split = a;
  } else if (fb <= c) {
    split = b;
  } else {
    double lo = a;
    double hi = b;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) < c ? lo : hi) = mid;
    }
    split = 0.5 * (lo + hi);
  }
  const double below = c * (split - a) - integrate_cdf(cdf, a, split);
  const double above = integrate_cdf(cdf, split, b) - c * (b - split);
  return std::max(below, 0.0) + std::max(above, 0.0);
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(PointCloud points) : points_(std::move(points)) {
  if (points_.size() == 0) throw InvalidParameter("empirical measure needs at least one point");
}

std::vector<double> EmpiricalMeasure::radii() const {
  std::vector<double> r(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double s = 0.0;
    for (double c : points_.point(i)) s += c * c;
    r[i] = std::sqrt(s);
  }
  return r;
}

double kolmogorov_survival(double t) {
  if (!(t > 0.0)) return 1.0;
  if (t < 1.18) {
    // Jacobi theta form converges fast for small t
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * t * t));
      cdf += term;
      if (term < 1e-16) break;
    }
    cdf *= std::sqrt(kTwoPi) / t;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * std::exp(-2.0 * k * k * t * t);
    q += (k % 2 == 1) ? term : -term;
    if (term < 1e-12) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

GofReport ks_test(std::vector<double> samples, const DistributionSpec& oracle) {
  return ks_test(std::move(samples), [&oracle](double x) { return oracle.cdf(x); }, oracle.describe());
}

GofReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf, std::string oracle) {
  require_samples(samples.size());
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return {GofTest::KS, d, kolmogorov_survival(std::sqrt(n) * d), samples.size(), std::move(oracle)};
}

GofReport ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require_samples(a.size());
  require_samples(b.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  return {GofTest::KS, d, kolmogorov_survival(std::sqrt(ne) * d), a.size() + b.size(), "two-sample"};
}

double w1_to_cdf(std::vector<double> values, const std::function<double(double)>& cdf, double lower,
                 double upper) {
  if (values.empty()) throw InvalidParameter("W1 needs at least one sample");
  if (!(lower < upper)) throw InvalidParameter("W1 support needs lower < upper");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  auto f = [&](double r) { return r <= lower ? 0.0 : (r >= upper ? 1.0 : cdf(r)); };

  double total = 0.0;
  // left of the first atom the empirical CDF is 0
  if (values.front() > lower) total += integrate_cdf(f, lower, values.front());
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    const double a = values[k];
    const double b = values[k + 1];
    if (!(b > a)) continue;
    const double c = static_cast<double>(k + 1) / n;
    if (a < lower && b > lower) {
      total += c * (lower - a) + abs_gap_integral(f, c, lower, b);
    } else if (a < upper && b > upper) {
      total += abs_gap_integral(f, c, a, upper) + (1.0 - c) * (b - upper);
    } else if (b <= lower) {
      total += c * (b - a);
    } else if (a >= upper) {
      total += (1.0 - c) * (b - a);
    } else {
      total += abs_gap_integral(f, c, a, b);
    }
  }
  // right of the last atom the empirical CDF is 1
  const double last = values.back();
  if (last < upper) {
    if (std::isfinite(upper)) {
      total += (upper - last) - integrate_cdf(f, last, upper);
    } else {
      boost::math::quadrature::exp_sinh<double> tail;
      double err = 0.0;
      total += tail.integrate([&](double t) { return 1.0 - f(last + t); }, 1e-12, &err);
    }
  }
  return total;
}

double w1_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidParameter("W1 needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<double> knots(a);
  knots.insert(knots.end(), b.begin(), b.end());
  std::sort(knots.begin(), knots.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double total = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    while (i < a.size() && a[i] <= knots[k]) ++i;
    while (j < b.size() && b[j] <= knots[k]) ++j;
    total += std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb) * (knots[k + 1] - knots[k]);
  }
  return total;
}

double w1_radial(const PointCloud& samples, const EquilibriumMeasure& m) {
  return w1_radial(EmpiricalMeasure(samples).radii(), m);
}

double w1_radial(std::vector<double> radii, const EquilibriumMeasure& m) {
  if (!m.is_radial()) throw InvalidParameter("w1_radial needs a rotationally invariant measure");
  return w1_to_cdf(std::move(radii), [&m](double r) { return m.radial_cdf(r); }, 0.0, m.support_upper());
}

GofReport angular_uniformity(const PointCloud& samples) {
  if (samples.dim() != 2) throw InvalidParameter("angular uniformity needs planar points");
  std::vector<double> u(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto p = samples.point(i);
    if (p[0] == 0.0 && p[1] == 0.0) throw DomainError("angle of the origin is undefined");
    double t = std::atan2(p[1], p[0]) / kTwoPi;
    if (t < 0.0) t += 1.0;
    u[i] = t;
  }
  return ks_test(std::move(u), DistributionSpec::uniform(0.0, 1.0));
}

GofReport sphere_z_uniformity(const std::vector<std::array<double, 3>>& points) {
  std::vector<double> z(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    if (std::abs(norm - 1.0) > 1e-9) throw InvalidParameter("sphere points must have unit norm");
    z[i] = p[2];
  }
  return ks_test(std::move(z), DistributionSpec::uniform(-1.0, 1.0));
}

TestFunction::TestFunction(Kind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [](const RadialProfile1D& r) {
                   if (!r.value || !r.derivative) throw InvalidParameter("radial profile needs h and h'");
                 },
                 [](const Harmonic& h) {
                   if (h.k < 0) throw InvalidParameter("harmonic degree must be >= 0");
                 },
                 [](const BivariatePolynomial&) {},
             },
             kind_);
}

TestFunction TestFunction::modulus_squared() {
  return radial([](double r) { return r * r; }, [](double r) { return 2.0 * r; });
}

TestFunction TestFunction::constant(double c) { return polynomial({{c}}); }

bool TestFunction::is_radial() const { return std::holds_alternative<RadialProfile1D>(kind_); }

double TestFunction::value(double x, double y) const {
  return std::visit(Overloaded{
                        [&](const RadialProfile1D& r) { return r.value(std::hypot(x, y)); },
                        [&](const Harmonic& h) {
                          std::complex<double> p = 1.0;
                          for (int k = 0; k < h.k; ++k) p *= std::complex<double>(x, y);
                          return h.imaginary ? p.imag() : p.real();
                        },
                        [&](const BivariatePolynomial& poly) {
                          double s = 0.0;
                          double xi = 1.0;
                          for (const auto& row : poly.coefficients) {
                            double yj = 1.0;
                            for (double c : row) {
                              s += c * xi * yj;
                              yj *= y;
                            }
                            xi *= x;
                          }
                          return s;
                        },
                    },
                    kind_);
}

std::array<double, 2> TestFunction::gradient(double x, double y) const {
  return std::visit(
      Overloaded{
          [&](const RadialProfile1D& r) -> std::array<double, 2> {
            const double rho = std::hypot(x, y);
            if (rho == 0.0) return {0.0, 0.0};
            const double dh = r.derivative(rho);
            return {dh * x / rho, dh * y / rho};
          },
          [&](const Harmonic& h) -> std::array<double, 2> {
            if (h.k == 0) return {0.0, 0.0};
            std::complex<double> p = 1.0;
            for (int k = 0; k < h.k - 1; ++k) p *= std::complex<double>(x, y);
            const std::complex<double> d = static_cast<double>(h.k) * p;  // d/dz z^k
            if (h.imaginary) return {d.imag(), d.real()};
            return {d.real(), -d.imag()};
          },
          [&](const BivariatePolynomial& poly) -> std::array<double, 2> {
            double gx = 0.0;
            double gy = 0.0;
            const auto& c = poly.coefficients;
            for (std::size_t i = 0; i < c.size(); ++i) {
              for (std::size_t j = 0; j < c[i].size(); ++j) {
                const double ci = c[i][j];
                if (i > 0) gx += ci * static_cast<double>(i) * std::pow(x, static_cast<double>(i - 1)) *
                                 std::pow(y, static_cast<double>(j));
                if (j > 0) gy += ci * static_cast<double>(j) * std::pow(x, static_cast<double>(i)) *
                                 std::pow(y, static_cast<double>(j - 1));
              }
            }
            return {gx, gy};
          },
      },
      kind_);
}

CltVarianceTerms clt_variance_terms(const TestFunction& f) {
  constexpr int kAngles = 256;
  std::vector<double> cs(kAngles);
  std::vector<double> sn(kAngles);
  for (int j = 0; j < kAngles; ++j) {
    cs[j] = std::cos(kTwoPi * j / kAngles);
    sn[j] = std::sin(kTwoPi * j / kAngles);
  }
  auto ring = [&](double r) {
    double s = 0.0;
    for (int j = 0; j < kAngles; ++j) {
      const auto g = f.gradient(r * cs[j], r * sn[j]);
      s += g[0] * g[0] + g[1] * g[1];
    }
    return r * s * kTwoPi / kAngles;
  };
  double err = 0.0;
  const double dirichlet =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(ring, 0.0, 1.0, 15, 1e-13, &err);
  if (err > 1e-8 * (1.0 + std::abs(dirichlet))) throw QuadratureError("Dirichlet integral did not converge");

  std::vector<double> fc(kFourierNodes);
  std::vector<double> cos_table(kFourierNodes);
  std::vector<double> sin_table(kFourierNodes);
  for (int j = 0; j < kFourierNodes; ++j) {
    const double t = kTwoPi * j / kFourierNodes;
    cos_table[j] = std::cos(t);
    sin_table[j] = std::sin(t);
    fc[j] = f.value(cos_table[j], sin_table[j]);
  }
  double half = 0.0;
  for (int k = 1; k <= kFourierModes; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (int j = 0; j < kFourierNodes; ++j) {
      const int idx = static_cast<int>((static_cast<long>(k) * j) % kFourierNodes);
      re += fc[j] * cos_table[idx];
      im -= fc[j] * sin_table[idx];
    }
    re /= kFourierNodes;
    im /= kFourierNodes;
    // f is real, so the -k mode contributes the same
    half += 2.0 * k * (re * re + im * im);
  }
  return {dirichlet / (4.0 * std::numbers::pi), 0.5 * half};
}

double clt_variance(const TestFunction& f) { return clt_variance_terms(f).total(); }

std::vector<double> linear_statistic(const std::vector<SpectrumSample>& samples, const TestFunction& f) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    double t = 0.0;
    for (const auto& z : s.eigenvalues) t += f.value(z.real(), z.imag());
    out.push_back(t);
  }
  return out;
}

std::vector<double> linear_statistic(const std::vector<Configuration>& samples, const TestFunction& f) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& c : samples) {
    if (c.points.dim() != 2) throw InvalidParameter("linear statistics need planar configurations");
    double t = 0.0;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const auto p = c.points.point(i);
      t += f.value(p[0], p[1]);
    }
    out.push_back(t);
  }
  return out;
}

std::vector<double> linear_statistic_moduli(const std::vector<std::vector<double>>& moduli,
                                            const TestFunction& f) {
  if (!f.is_radial()) throw InvalidParameter("moduli alone only determine radial statistics");
  std::vector<double> out;
  out.reserve(moduli.size());
  for (const auto& set : moduli) {
    double t = 0.0;
    for (double r : set) t += f.value(r, 0.0);
    out.push_back(t);
  }
  return out;
}

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) throw InvalidParameter("mean of an empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) throw InvalidParameter("variance needs at least two values");
  const double m = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double median(std::vector<double> v) {
  if (v.empty()) throw InvalidParameter("median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

bool is_strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

}  // namespace cgas
