#include "mlipuq/stats.hpp"

#include <cmath>
#include <limits>

#include "mlipuq/errors.hpp"

namespace mlipuq {

double normal_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
  // erfc keeps full relative accuracy in the lower tail, where the naive
  // 0.5*(1+erf(...)) form cancels.
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

namespace {

// Rational initial guess for the normal quantile (Acklam's minimax
// approximation, ~1.15e-9 relative error), refined below by one Halley step.
double quantile_initial_guess(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  static const double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0)
    throw ContractViolation("normal_quantile: probability must lie in [0, 1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();

  double x = quantile_initial_guess(p);
  // One Halley refinement against the exact cdf.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double negative_log_density(double x, double mean, double variance) {
  if (!(variance > 0.0))
    throw ContractViolation("negative_log_density: variance must be positive");
  const double r = x - mean;
  return 0.5 * (std::log(2.0 * M_PI * variance) + r * r / variance);
}

double sample_mean(const Eigen::VectorXd &v) {
  if (v.size() == 0) throw ContractViolation("sample_mean: empty vector");
  return v.mean();
}

double sample_std(const Eigen::VectorXd &v) {
  if (v.size() == 0) throw ContractViolation("sample_std: empty vector");
  if (v.size() == 1) return 0.0;
  const double m = v.mean();
  const double ss = (v.array() - m).square().sum();
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double trapezoid(const Eigen::VectorXd &x, const Eigen::VectorXd &y) {
  if (x.size() != y.size())
    throw ContractViolation("trapezoid: x and y must have equal length");
  if (x.size() < 2) throw ContractViolation("trapezoid: need at least two points");
  double acc = 0.0;
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    const double dx = x[i] - x[i - 1];
    if (dx < 0.0) throw ContractViolation("trapezoid: x must be non-decreasing");
    acc += 0.5 * dx * (y[i] + y[i - 1]);
  }
  return acc;
}

}  // namespace mlipuq
