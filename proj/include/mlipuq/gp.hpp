#pragma once

#include <Eigen/Dense>

#include "mlipuq/features.hpp"
#include "mlipuq/kernel.hpp"

namespace mlipuq {

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix,
/// together with the absolute diagonal jitter that had to be added (0 when
/// the plain factorization succeeded).  On failure the jitter is escalated
/// from 1e-10 to 1e-4 in units of the mean diagonal, tenfold per retry;
/// exhaustion throws NumericalError reporting the final jitter tried.
struct CholeskyResult {
  Eigen::MatrixXd L;
  double jitter = 0.0;
};
CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd &K);

/// Trained exact Gaussian-process regressor.  Targets are centered by their
/// mean internally; the mean is added back at prediction time.
struct GprModel {
  FeatureSet inputs;
  Eigen::VectorXd targets_centered;
  double target_mean = 0.0;
  double noise_variance = 0.0;
  KernelParams params;
  Eigen::MatrixXd chol;     // lower-triangular factor of K + noise*I (+ jitter)
  Eigen::VectorXd weights;  // (K + noise*I)^-1 (y - mean)
  double jitter = 0.0;

  Eigen::Index train_count() const { return targets_centered.size(); }
};

/// Factorizes K(X,X) + noise_variance*I and solves for the weight vector.
GprModel fit(FeatureSet inputs, const Eigen::VectorXd &targets,
             const KernelParams &params, double noise_variance);

/// Predictive means K(queries, X) * weights + target mean.
Eigen::VectorXd predict_mean(const GprModel &m, const FeatureSet &queries);

/// Predictive standard deviations sqrt(k(x,x) - k_x^T (K + noise*I)^-1 k_x),
/// computed via triangular solves.  Independent of the training targets; the
/// observation noise is not included.  Radicands within -1e-10*k(x,x) of
/// zero are clamped to zero; more negative ones throw NumericalError.
Eigen::VectorXd predict_std(const GprModel &m, const FeatureSet &queries);

/// Log marginal likelihood of the centered targets:
/// -1/2 y^T alpha - sum_i log L_ii - n/2 log(2 pi).
double log_marginal_likelihood(const GprModel &m);
double log_marginal_likelihood(const FeatureSet &inputs, const Eigen::VectorXd &targets,
                               const KernelParams &params, double noise_variance);

/// Log marginal likelihood and its gradient with respect to the logarithms
/// of output_scale, each length-scale, and noise_variance.
struct MllGradient {
  double value = 0.0;
  double d_log_output_scale = 0.0;
  Eigen::VectorXd d_log_lengthscales;
  double d_log_noise = 0.0;
};
MllGradient mll_with_gradient(const FeatureSet &inputs, const Eigen::VectorXd &targets,
                              const KernelParams &params, double noise_variance);

/// Extends a fitted model by one training sample through a bordered update
/// of the Cholesky factor; equivalent to refitting on the enlarged set.
/// `input` must hold exactly one sample of the model's representation kind.
GprModel append_sample(const GprModel &m, const FeatureSet &input, double target);

}  // namespace mlipuq
