#include "coulomb/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "coulomb/error.hpp"

namespace cgas {

namespace {

// Plane rotation G = [c s; -conj(s) c] with G [a; b] = [r; 0].
struct Givens {
  double c;
  Complex s;
};

Givens make_givens(Complex a, Complex b) {
  const double abs_a = std::abs(a);
  const double norm = std::hypot(abs_a, std::abs(b));
  if (norm == 0.0) return {1.0, 0.0};
  if (abs_a == 0.0) return {0.0, 1.0};
  const Complex phase = a / abs_a;
  return {abs_a / norm, phase * std::conj(b) / norm};
}

// Both eigenvalues of [[a, b], [c, d]], stable near d.
std::array<Complex, 2> eig2x2(Complex a, Complex b, Complex c, Complex d) {
  const Complex p = 0.5 * (a - d);
  Complex disc = std::sqrt(p * p + b * c);
  if (std::abs(p + disc) < std::abs(p - disc)) disc = -disc;
  const Complex big = p + disc;
  const Complex first = d + big;
  const Complex second = big == Complex(0.0) ? d + p - disc : d - b * c / big;
  return {first, second};
}

void reduce_to_hessenberg(ComplexMatrix& h) {
  const long n = h.rows();
  for (long k = 0; k + 2 < n; ++k) {
    const long len = n - k - 1;
    Eigen::VectorXcd v = h.col(k).segment(k + 1, len);
    const double xnorm = v.norm();
    if (xnorm == 0.0) continue;
    const Complex x0 = v(0);
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // H <- (I - 2 v v*) H (I - 2 v v*) on the trailing rows/columns.
    auto rows = h.block(k + 1, 0, len, n);
    const Eigen::RowVectorXcd w = v.adjoint() * rows;
    rows -= 2.0 * v * w;
    auto cols = h.block(0, k + 1, n, len);
    const Eigen::VectorXcd u = cols * v;
    cols -= 2.0 * u * v.adjoint();
    h(k + 1, k) = alpha;
    for (long i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

}  // namespace

ComplexMatrix sample_ginibre_matrix(std::size_t n, Rng& rng) {
  if (n < 1) throw InvalidParameter("matrix size must be >= 1");
  const auto size = static_cast<long>(n);
  ComplexMatrix m(size, size);
  const double sd = std::sqrt(0.5);
  for (long i = 0; i < size; ++i) {
    for (long j = 0; j < size; ++j) {
      const double re = sd * standard_normal(rng);
      const double im = sd * standard_normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

SpectrumSample eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidParameter("eigenvalues need a square matrix");
  const long n = m.rows();
  if (n > kMaxEigenDimension) {
    throw InvalidParameter("eigensolver is limited to n <= " + std::to_string(kMaxEigenDimension));
  }
  if (!m.allFinite()) throw InvalidParameter("matrix has non-finite entries");
  SpectrumSample out;
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  if (n == 0) return out;

  ComplexMatrix h = m;
  reduce_to_hessenberg(h);
  const double guard = std::numeric_limits<double>::epsilon() * std::max(h.norm(), std::numeric_limits<double>::min());

  const long max_iterations = 40 * n;
  long total = 0;
  long since_deflation = 0;
  long hi = n - 1;
  while (hi >= 0) {
    long lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      if (sub <= 1e-13 * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo))) || sub <= guard) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      out.eigenvalues[static_cast<std::size_t>(hi)] = h(hi, hi);
      --hi;
      since_deflation = 0;
      continue;
    }
    if (lo == hi - 1) {
      const auto pair = eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
      out.eigenvalues[static_cast<std::size_t>(lo)] = pair[0];
      out.eigenvalues[static_cast<std::size_t>(hi)] = pair[1];
      hi -= 2;
      since_deflation = 0;
      continue;
    }
    if (++total > max_iterations) {
      throw ConvergenceError("QR iteration did not converge within " + std::to_string(max_iterations) +
                             " iterations");
    }
    ++since_deflation;

    Complex shift;
    if (since_deflation % 10 == 0) {
      // exceptional shift to break cycles
      shift = std::abs(h(hi, hi - 1).real()) + std::abs(h(hi - 1, hi - 2).real());
    } else {
      const auto pair = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
      shift = std::abs(pair[0] - h(hi, hi)) < std::abs(pair[1] - h(hi, hi)) ? pair[0] : pair[1];
    }

    // Explicit shifted QR step on the active block h[lo..hi, lo..hi].
    for (long k = lo; k <= hi; ++k) h(k, k) -= shift;
    std::vector<Givens> rotations;
    rotations.reserve(static_cast<std::size_t>(hi - lo));
    for (long k = lo; k < hi; ++k) {
      const Givens g = make_givens(h(k, k), h(k + 1, k));
      rotations.push_back(g);
      for (long j = k; j <= hi; ++j) {
        const Complex t1 = h(k, j);
        const Complex t2 = h(k + 1, j);
        h(k, j) = g.c * t1 + g.s * t2;
        h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
      }
    }
    for (long k = lo; k < hi; ++k) {
      const Givens& g = rotations[static_cast<std::size_t>(k - lo)];
      const long last = std::min(k + 1, hi);
      for (long i = lo; i <= last; ++i) {
        const Complex t1 = h(i, k);
        const Complex t2 = h(i, k + 1);
        h(i, k) = t1 * g.c + t2 * std::conj(g.s);
        h(i, k + 1) = -t1 * g.s + t2 * g.c;
      }
    }
    for (long k = lo; k <= hi; ++k) h(k, k) += shift;
  }
  return out;
}

ComplexMatrix sample_haar_unitary(std::size_t m, Rng& rng) {
  const ComplexMatrix g = sample_ginibre_matrix(m, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const auto size = static_cast<long>(m);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(size, size);
  for (long k = 0; k < size; ++k) {
    const Complex r = qr.matrixQR()(k, k);
    const double abs_r = std::abs(r);
    if (abs_r > 0.0) q.col(k) *= r / abs_r;
  }
  return q;
}

ComplexMatrix solve_right(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (rhs.rows() != rhs.cols() || lhs.cols() != rhs.rows()) {
    throw InvalidParameter("solve_right: incompatible shapes");
  }
  // A rhs = lhs  <=>  rhs^T A^T = lhs^T
  const ComplexMatrix rhs_t = rhs.transpose();
  Eigen::PartialPivLU<ComplexMatrix> lu(rhs_t);
  if (!(lu.rcond() > 1e-14)) throw SingularMatrixError("matrix is numerically singular");
  const ComplexMatrix lhs_t = lhs.transpose();
  return lu.solve(lhs_t).transpose();
}

Complex determinant(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidParameter("determinant needs a square matrix");
  return Eigen::PartialPivLU<ComplexMatrix>(m).determinant();
}

SpectrumSample ginibre_eigs(std::size_t n, Rng& rng) {
  auto spectrum = eigenvalues(sample_ginibre_matrix(n, rng));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& z : spectrum.eigenvalues) z *= scale;
  spectrum.scaling = scale;
  return spectrum;
}

SpectrumSample spherical_eigs(std::size_t n, Rng& rng) {
  constexpr int kAttempts = 8;
  for (int attempt = 0;; ++attempt) {
    const ComplexMatrix m1 = sample_ginibre_matrix(n, rng);
    const ComplexMatrix m2 = sample_ginibre_matrix(n, rng);
    try {
      return eigenvalues(solve_right(m1, m2));
    } catch (const SingularMatrixError&) {
      if (attempt + 1 == kAttempts) throw;
    }
  }
}

SpectrumSample truncated_unitary_eigs(std::size_t n, std::size_t m, Rng& rng) {
  if (!(n >= 1 && n < m)) throw InvalidParameter("truncation needs 1 <= n < m");
  if (m > static_cast<std::size_t>(kMaxEigenDimension)) throw InvalidParameter("unitary size must be <= 256");
  const ComplexMatrix u = sample_haar_unitary(m, rng);
  const auto size = static_cast<long>(n);
  return eigenvalues(u.topLeftCorner(size, size));
}

SpectrumSample product_ginibre_eigs(std::size_t n, std::size_t m, Rng& rng) {
  if (m < 1) throw InvalidParameter("product needs m >= 1 factors");
  ComplexMatrix prod = sample_ginibre_matrix(n, rng);
  for (std::size_t k = 1; k < m; ++k) prod = (prod * sample_ginibre_matrix(n, rng)).eval();
  const double scale = std::pow(static_cast<double>(n), -0.5 * static_cast<double>(m));
  prod *= scale;
  return eigenvalues(prod);
}

std::array<double, 3> stereographic_lift(Complex z) {
  const double r2 = std::norm(z);
  const double denom = r2 + 1.0;
  return {2.0 * z.real() / denom, 2.0 * z.imag() / denom, (r2 - 1.0) / denom};
}

std::vector<SpectrumSample> sample_spectra(Ensemble ensemble, std::size_t n, std::size_t m,
                                           std::size_t reps, std::uint64_t seed, Execution exec) {
  std::vector<SpectrumSample> out(reps);
  for_each_task(reps, exec, [&](std::size_t k) {
    Rng rng(task_seed(seed, k));
    switch (ensemble) {
      case Ensemble::Ginibre:
        out[k] = ginibre_eigs(n, rng);
        break;
      case Ensemble::Spherical:
        out[k] = spherical_eigs(n, rng);
        break;
      case Ensemble::Truncated:
        out[k] = truncated_unitary_eigs(n, m, rng);
        break;
      case Ensemble::Product:
        out[k] = product_ginibre_eigs(n, m, rng);
        break;
    }
  });
  return out;
}

std::vector<double> pooled_moduli(const std::vector<SpectrumSample>& spectra) {
  std::vector<double> moduli;
  for (const auto& s : spectra) {
    for (const auto& z : s.eigenvalues) moduli.push_back(std::abs(z));
  }
  return moduli;
}

PointCloud to_point_cloud(const SpectrumSample& spectrum) {
  std::vector<double> coords;
  coords.reserve(2 * spectrum.eigenvalues.size());
  for (const auto& z : spectrum.eigenvalues) {
    coords.push_back(z.real());
    coords.push_back(z.imag());
  }
  return PointCloud(2, std::move(coords));
}

}  // namespace cgas
