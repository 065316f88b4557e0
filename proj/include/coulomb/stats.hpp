#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coulomb/core_kernel.hpp"
#include "coulomb/equilibrium.hpp"
#include "coulomb/exactlaws.hpp"
#include "coulomb/rmt.hpp"

namespace cgas {

/// Uniform-weight empirical measure of a point cloud.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(PointCloud points);
  [[nodiscard]] const PointCloud& points() const { return points_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] double weight() const { return 1.0 / static_cast<double>(points_.size()); }
  [[nodiscard]] std::vector<double> radii() const;

 private:
  PointCloud points_;
};

enum class GofTest { KS, W1 };

struct GofReport {
  GofTest test = GofTest::KS;
  double statistic = 0.0;
  std::optional<double> p_value;
  std::size_t n_samples = 0;
  std::string oracle;
};

inline constexpr std::size_t kMinKsSamples = 8;

/// P(K > t) for the Kolmogorov limit law of sqrt(n) D_n.
double kolmogorov_survival(double t);

GofReport ks_test(std::vector<double> samples, const DistributionSpec& oracle);
GofReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf, std::string oracle);
/// Two-sample version; the p-value uses the effective size n1 n2 / (n1 + n2).
GofReport ks_two_sample(std::vector<double> a, std::vector<double> b);

/// W1 between the empirical law of `values` and a continuous law with CDF
/// `cdf` supported in [lower, upper] (upper may be +inf).
double w1_to_cdf(std::vector<double> values, const std::function<double(double)>& cdf, double lower,
                 double upper);
double w1_two_sample(std::vector<double> a, std::vector<double> b);
/// W1 between the empirical radius law and the radial law of `m`.
double w1_radial(const PointCloud& samples, const EquilibriumMeasure& m);
double w1_radial(std::vector<double> radii, const EquilibriumMeasure& m);

/// KS of the angles / 2pi against Uniform(0, 1).
GofReport angular_uniformity(const PointCloud& samples);
/// KS of the third coordinate against Uniform(-1, 1).
GofReport sphere_z_uniformity(const std::vector<std::array<double, 3>>& points);

struct RadialProfile1D {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};
/// Re z^k or Im z^k.
struct Harmonic {
  int k = 1;
  bool imaginary = false;
};
/// sum c[i][j] x^i y^j
struct BivariatePolynomial {
  std::vector<std::vector<double>> coefficients;
};

/// Real test function on the plane.
class TestFunction {
 public:
  using Kind = std::variant<RadialProfile1D, Harmonic, BivariatePolynomial>;

  explicit TestFunction(Kind kind);

  static TestFunction radial(std::function<double(double)> h, std::function<double(double)> dh) {
    return TestFunction(RadialProfile1D{std::move(h), std::move(dh)});
  }
  static TestFunction harmonic(int k, bool imaginary = false) { return TestFunction(Harmonic{k, imaginary}); }
  static TestFunction polynomial(std::vector<std::vector<double>> c) {
    return TestFunction(BivariatePolynomial{std::move(c)});
  }
  /// f(z) = |z|^2
  static TestFunction modulus_squared();
  static TestFunction constant(double c);

  [[nodiscard]] const Kind& kind() const { return kind_; }
  [[nodiscard]] bool is_radial() const;
  [[nodiscard]] double value(double x, double y) const;
  [[nodiscard]] std::array<double, 2> gradient(double x, double y) const;

 private:
  Kind kind_;
};

struct CltVarianceTerms {
  double h1 = 0.0;       ///< (1/4pi) int_D |grad f|^2
  double h_half = 0.0;   ///< (1/2) sum |k| |f^(k)|^2
  [[nodiscard]] double total() const { return h1 + h_half; }
};
inline constexpr int kFourierNodes = 4096;
inline constexpr int kFourierModes = 64;

CltVarianceTerms clt_variance_terms(const TestFunction& f);
double clt_variance(const TestFunction& f);

/// Per sample, sum of f over its (already scaled) points.
std::vector<double> linear_statistic(const std::vector<SpectrumSample>& samples, const TestFunction& f);
std::vector<double> linear_statistic(const std::vector<Configuration>& samples, const TestFunction& f);
/// Radial f only: per sample, sum of f over moduli.
std::vector<double> linear_statistic_moduli(const std::vector<std::vector<double>>& moduli,
                                            const TestFunction& f);

double sample_mean(const std::vector<double>& v);
/// Unbiased sample variance.
double sample_variance(const std::vector<double>& v);
double median(std::vector<double> v);
bool is_strictly_decreasing(const std::vector<double>& v);

}  // namespace cgas
