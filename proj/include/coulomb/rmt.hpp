#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "coulomb/core_kernel.hpp"
#include "coulomb/parallel.hpp"
#include "coulomb/random.hpp"

namespace cgas {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Eigenvalues of one matrix draw, as an unordered multiset.
struct SpectrumSample {
  std::vector<Complex> eigenvalues;
  /// Factor already applied to the raw eigenvalues (1/sqrt(n) for Ginibre).
  double scaling = 1.0;
};

/// Largest matrix size accepted by the eigensolver.
inline constexpr long kMaxEigenDimension = 256;

/// Ginibre matrix: independent entries with real and imaginary parts N(0, 1/2).
ComplexMatrix sample_ginibre_matrix(std::size_t n, Rng& rng);

/// All eigenvalues of a square complex matrix: Householder reduction to
/// Hessenberg form followed by single-shift QR with deflation. Throws
/// ConvergenceError after 40 n iterations.
SpectrumSample eigenvalues(const ComplexMatrix& m);

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// diag(R) moved into Q.
ComplexMatrix sample_haar_unitary(std::size_t m, Rng& rng);

/// A with A * rhs = lhs, i.e. lhs * rhs^-1, by partial-pivot elimination.
/// Throws SingularMatrixError when rhs is numerically singular.
ComplexMatrix solve_right(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

/// Determinant by partial-pivot elimination.
Complex determinant(const ComplexMatrix& m);

/// Ginibre eigenvalues scaled by 1/sqrt(n).
SpectrumSample ginibre_eigs(std::size_t n, Rng& rng);
/// Eigenvalues of M1 M2^-1 for independent Ginibre matrices.
SpectrumSample spherical_eigs(std::size_t n, Rng& rng);
/// Eigenvalues of the top-left n x n block of an m x m Haar unitary.
SpectrumSample truncated_unitary_eigs(std::size_t n, std::size_t m, Rng& rng);
/// Eigenvalues of n^(-m/2) M1 ... Mm.
SpectrumSample product_ginibre_eigs(std::size_t n, std::size_t m, Rng& rng);

/// Inverse stereographic projection of z onto the unit sphere.
std::array<double, 3> stereographic_lift(Complex z);

enum class Ensemble { Ginibre, Spherical, Truncated, Product };

/// `reps` independent spectra; draw k uses the seed task_seed(seed, k), so
/// the result does not depend on `exec`. `m` is the unitary size for
/// Truncated and the number of factors for Product.
std::vector<SpectrumSample> sample_spectra(Ensemble ensemble, std::size_t n, std::size_t m,
                                           std::size_t reps, std::uint64_t seed,
                                           Execution exec = Execution::Parallel);

/// |lambda| of every eigenvalue of every sample, in sample order.
std::vector<double> pooled_moduli(const std::vector<SpectrumSample>& spectra);

/// Spectrum as a 2-d point cloud (real part, imaginary part).
PointCloud to_point_cloud(const SpectrumSample& spectrum);

}  // namespace cgas
