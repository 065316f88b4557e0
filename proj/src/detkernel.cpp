#include "coulomb/detkernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "coulomb/error.hpp"

namespace cgas {

namespace {

using LComplex = std::complex<long double>;
constexpr double kPi = std::numbers::pi;

// Kahan-compensated accumulator over extended-precision complex terms.
struct CompensatedSum {
  LComplex sum{0.0L, 0.0L};
  LComplex carry{0.0L, 0.0L};

  void add(LComplex term) {
    const LComplex y = term - carry;
    const LComplex t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void require_positive(long n) {
  if (n < 1) throw InvalidParameter("n must be >= 1, got " + std::to_string(n));
}

}  // namespace

KernelContext::KernelContext(long n) : n_(n) { require_positive(n); }

std::complex<double> truncated_exp(long n, std::complex<double> z) {
  require_positive(n);
  const LComplex zl(z.real(), z.imag());
  CompensatedSum acc;
  LComplex term(1.0L, 0.0L);
  for (long l = 0; l < n; ++l) {
    acc.add(term);
    term *= zl / static_cast<long double>(l + 1);
  }
  return {static_cast<double>(acc.sum.real()), static_cast<double>(acc.sum.imag())};
}

std::complex<double> truncated_exp_scaled(long n, std::complex<double> z, double shift) {
  require_positive(n);
  if (z == std::complex<double>(0.0)) return {std::exp(-shift), 0.0};
  const LComplex log_z = std::log(LComplex(z.real(), z.imag()));
  CompensatedSum acc;
  for (long l = 0; l < n; ++l) {
    const LComplex exponent = static_cast<long double>(l) * log_z -
                              std::lgamma(static_cast<long double>(l) + 1.0L) -
                              static_cast<long double>(shift);
    acc.add(std::exp(exponent));
  }
  return {static_cast<double>(acc.sum.real()), static_cast<double>(acc.sum.imag())};
}

double log_truncated_exp(long n, double x) {
  require_positive(n);
  if (x < 0.0) throw InvalidParameter("log_truncated_exp needs x >= 0");
  if (x == 0.0) return 0.0;
  const long top = std::min(n - 1, static_cast<long>(std::floor(x)));
  const long double xl = x;
  const long double log_max = top * std::log(xl) - std::lgamma(static_cast<long double>(top) + 1.0L);
  // terms relative to the largest one, walking away from it in both directions
  long double sum = 1.0L;
  long double term = 1.0L;
  for (long l = top; l + 1 < n; ++l) {
    term *= xl / static_cast<long double>(l + 1);
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  term = 1.0L;
  for (long l = top; l > 0; --l) {
    term *= static_cast<long double>(l) / xl;
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  return static_cast<double>(log_max + std::log(sum));
}

double log_remainder_bound(long n, std::complex<double> z) {
  require_positive(n);
  const double a = std::abs(z);
  if (a == 0.0) return -std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);
  const double factor = a <= 1.0 ? (nd + 1.0) / (nd * (1.0 - a) + 1.0) : nd / (nd * (a - 1.0) + 1.0);
  return nd - 0.5 * std::log(2.0 * kPi * nd) + nd * std::log(a) + std::log(factor);
}

double remainder_bound(long n, std::complex<double> z) { return std::exp(log_remainder_bound(n, z)); }

double truncation_error(long n, std::complex<double> z) {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  const std::complex<double> w = static_cast<double>(n) * z;
  if (std::abs(z) > 1.0) return std::abs(truncated_exp(n, w));
  if (z == 0.0) return 0.0;
  // first tail term in log space, then the ratio recursion; |w| / l < 1 past l = n
  const long double log_first = static_cast<long double>(n) * std::log(static_cast<long double>(std::abs(w))) -
                                std::lgamma(static_cast<long double>(n) + 1.0L);
  const LComplex phase = std::polar(1.0L, static_cast<long double>(n) * static_cast<long double>(std::arg(w)));
  const LComplex wl(w.real(), w.imag());
  LComplex term = phase;
  LComplex sum = 0.0L;
  for (long l = n; l < n + 100000; ++l) {
    sum += term;
    term *= wl / static_cast<long double>(l + 1);
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(std::exp(log_first) * std::abs(sum));
}

std::complex<double> kernel_K(const KernelContext& ctx, std::complex<double> z, std::complex<double> w) {
  const double shift = 0.5 * (std::norm(z) + std::norm(w));
  return truncated_exp_scaled(ctx.n(), z * std::conj(w), shift) / kPi;
}

double density_kpoint(const KernelContext& ctx, std::span<const std::complex<double>> points) {
  const long k = static_cast<long>(points.size());
  if (k < 1 || k > ctx.n()) throw InvalidParameter("density_kpoint needs 1 <= k <= n points");
  Eigen::MatrixXcd kernel(k, k);
  for (long i = 0; i < k; ++i) {
    for (long j = 0; j < k; ++j) kernel(i, j) = kernel_K(ctx, points[i], points[j]);
  }
  const double det = Eigen::PartialPivLU<Eigen::MatrixXcd>(kernel).determinant().real();
  const double weight = std::exp(std::lgamma(static_cast<double>(ctx.n() - k + 1)) -
                                 std::lgamma(static_cast<double>(ctx.n() + 1)));
  const double value = weight * det;
  if (value < -1e-12) {
    throw NumericFailure("negative k-point density " + std::to_string(value));
  }
  return std::max(value, 0.0);
}

double scaled_one_point(const KernelContext& ctx, std::complex<double> z) {
  const double x = static_cast<double>(ctx.n()) * std::norm(z);
  return std::exp(log_truncated_exp(ctx.n(), x) - x) / kPi;
}

namespace {

// exp(-n(|z1|^2+|z2|^2)) |e_n(n z1 conj(z2))|^2
double cross_term(long n, std::complex<double> z1, std::complex<double> z2) {
  const double nd = static_cast<double>(n);
  const auto scaled = truncated_exp_scaled(n, nd * z1 * std::conj(z2), 0.5 * nd * (std::norm(z1) + std::norm(z2)));
  return std::norm(scaled);
}

void require_pair(const KernelContext& ctx) {
  if (ctx.n() < 2) throw InvalidParameter("two-point quantities need n >= 2");
}

}  // namespace

double scaled_two_point(const KernelContext& ctx, std::complex<double> z1, std::complex<double> z2) {
  require_pair(ctx);
  const double nd = static_cast<double>(ctx.n());
  const double product = scaled_one_point(ctx, z1) * scaled_one_point(ctx, z2);
  return nd / (nd - 1.0) * (product - cross_term(ctx.n(), z1, z2) / (kPi * kPi));
}

double two_point_defect(const KernelContext& ctx, std::complex<double> z1, std::complex<double> z2) {
  require_pair(ctx);
  const double nd = static_cast<double>(ctx.n());
  const double product = scaled_one_point(ctx, z1) * scaled_one_point(ctx, z2);
  return product / (nd - 1.0) - nd / (nd - 1.0) * cross_term(ctx.n(), z1, z2) / (kPi * kPi);
}

std::pair<double, double> gamma_poisson_tail(long n, double r) {
  require_positive(n);
  if (!(r > 0.0)) throw InvalidParameter("gamma_poisson_tail needs r > 0");
  const double gamma_side = boost::math::gamma_q(static_cast<double>(n), r);
  const long double rl = r;
  long double term = std::exp(-rl);
  long double sum = 0.0L;
  long double carry = 0.0L;
  for (long l = 0; l < n; ++l) {
    const long double y = term - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    term *= rl / static_cast<long double>(l + 1);
  }
  return {gamma_side, static_cast<double>(sum)};
}

}  // namespace cgas
