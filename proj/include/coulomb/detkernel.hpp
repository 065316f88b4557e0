#pragma once

#include <complex>
#include <span>
#include <utility>

namespace cgas {

/// Size n of the Ginibre gas whose determinantal kernel is evaluated.
class KernelContext {
 public:
  explicit KernelContext(long n);
  [[nodiscard]] long n() const { return n_; }

 private:
  long n_;
};

/// e_n(z) = sum_{l<n} z^l / l!, compensated summation in extended precision.
std::complex<double> truncated_exp(long n, std::complex<double> z);

/// exp(-shift) * e_n(z) without forming e_n(z); usable when e_n(z) overflows.
std::complex<double> truncated_exp_scaled(long n, std::complex<double> z, double shift);

/// log e_n(x) for real x >= 0, anchored at the largest term.
double log_truncated_exp(long n, double x);

/// Upper bound r_n(z) on |e_n(nz) - e^{nz} 1_{|z|<=1}|, evaluated in log space.
double remainder_bound(long n, std::complex<double> z);
double log_remainder_bound(long n, std::complex<double> z);

/// |e_n(nz) - e^{nz} 1_{|z|<=1}| evaluated without cancellation: inside the
/// disc as the series tail sum_{l>=n} (nz)^l / l!.
double truncation_error(long n, std::complex<double> z);

/// K_n(z, w) = sqrt(gamma(z) gamma(w)) e_n(z conj(w)), gamma(u) = exp(-|u|^2)/pi.
std::complex<double> kernel_K(const KernelContext& ctx, std::complex<double> z, std::complex<double> w);

/// Marginal density phi_{n,k}(z_1..z_k) = (n-k)!/n! det[K_n(z_i, z_j)].
/// Round-off down to -1e-12 is clamped to 0; anything lower throws NumericFailure.
double density_kpoint(const KernelContext& ctx, std::span<const std::complex<double>> points);

/// n phi_{n,1}(sqrt(n) z) = exp(-n|z|^2) e_n(n|z|^2) / pi.
double scaled_one_point(const KernelContext& ctx, std::complex<double> z);

/// phi^{n,2}(z1, z2) - phi^{n,1}(z1) phi^{n,1}(z2) for the scaled marginals.
double two_point_defect(const KernelContext& ctx, std::complex<double> z1, std::complex<double> z2);

/// Scaled two-point marginal phi^{n,2}(z1, z2) = n^2 phi_{n,2}(sqrt(n) z1, sqrt(n) z2).
double scaled_two_point(const KernelContext& ctx, std::complex<double> z1, std::complex<double> z2);

/// Both sides of P(Gamma(n,1) >= r) = P(Poisson(r) < n): the regularized
/// upper incomplete gamma function and e^{-r} sum_{l<n} r^l / l!.
std::pair<double, double> gamma_poisson_tail(long n, double r);

}  // namespace cgas
