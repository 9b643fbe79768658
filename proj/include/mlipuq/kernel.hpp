#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "mlipuq/errors.hpp"
#include "mlipuq/features.hpp"

namespace mlipuq {

/// Hyperparameters of the anisotropic Gaussian kernel
/// k(x, x') = output_scale * exp(-1/2 sum_d (x_d - x'_d)^2 / l_d^2).
/// output_scale is the kernel value at zero distance (a variance).
struct KernelParams {
  double output_scale = 1.0;
  Eigen::VectorXd lengthscales;

  /// Throws ContractViolation unless all entries are positive, finite, and
  /// the length-scale count matches `dim`.
  void validate(Eigen::Index dim) const;

  /// Replicates one shared length-scale across all dimensions.
  static KernelParams isotropic(double output_scale, double lengthscale,
                                Eigen::Index dim);
};

/// Kernel between two feature vectors (any Eigen vector expressions).
template <typename DA, typename DB>
double kernel_eval(const Eigen::MatrixBase<DA> &x, const Eigen::MatrixBase<DB> &y,
                   const KernelParams &p) {
  if (x.size() != y.size() || x.size() != p.lengthscales.size())
    throw ContractViolation("kernel_eval: dimension mismatch");
  double q = 0.0;
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    const double r = (x(d) - y(d)) / p.lengthscales(d);
    q += r * r;
  }
  return p.output_scale * std::exp(-0.5 * q);
}

/// Environment kernel between two atomistic samples: the plain double sum of
/// kernel_eval over all atom pairs, with no normalization by atom count.
/// Rows of A and B are per-atom feature vectors.
double atomistic_kernel_eval(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B,
                             const KernelParams &p);

/// Full kernel matrix between two collections (rows index A, columns B).
/// Both arguments must hold the same representation kind.
Eigen::MatrixXd kernel_matrix(const FeatureSet &A, const FeatureSet &B,
                              const KernelParams &p);

/// k(x, x) for every sample of A: output_scale for global features, the
/// double-sum self kernel for atomistic ones.
Eigen::VectorXd kernel_diagonal(const FeatureSet &A, const KernelParams &p);

}  // namespace mlipuq
