#pragma once

#include <Eigen/Dense>

namespace mlipuq {

/// Standard normal probability density at x.
double normal_pdf(double x);

/// Standard normal cumulative distribution at x, accurate in both tails.
double normal_cdf(double x);

/// Inverse of normal_cdf.  Accurate to better than 1e-9 absolute error over
/// p in (0, 1); returns -inf / +inf at p = 0 / 1 and throws ContractViolation
/// outside [0, 1].
double normal_quantile(double p);

/// Negative log density of N(mean, variance) evaluated at x.
/// Throws ContractViolation if variance is not positive.
double negative_log_density(double x, double mean, double variance);

/// Arithmetic mean.  Throws ContractViolation on an empty vector.
double sample_mean(const Eigen::VectorXd &v);

/// Sample standard deviation with the n-1 (Bessel) denominator.
/// Returns 0 for a single-element vector; throws on an empty one.
double sample_std(const Eigen::VectorXd &v);

/// Trapezoidal integral of y over x.  x must be non-decreasing and the two
/// vectors equally sized with at least two entries.
double trapezoid(const Eigen::VectorXd &x, const Eigen::VectorXd &y);

}  // namespace mlipuq
