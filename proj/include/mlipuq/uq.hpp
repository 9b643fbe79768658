#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "mlipuq/gp.hpp"

namespace mlipuq {

/// A Gaussian predictive distribution for one query.
struct PredictiveDistribution {
  double mean = 0.0;
  double std = 0.0;
};

/// Column-aligned predictive distributions for a batch of queries.
struct PredictionBatch {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
};

/// Ensemble of two models trained on disjoint halves of the training set
/// (sizes differing by at most one), plus the full model that supplies the
/// predictive mean.
struct TwoSetEstimator {
  GprModel full_model;
  GprModel half_a;
  GprModel half_b;
  std::uint64_t split_seed = 0;
};

/// Ensemble of models trained on with-replacement resamples of the training
/// set, plus the full model that supplies the predictive mean.
struct BootstrapEstimator {
  GprModel full_model;
  std::vector<GprModel> members;
  std::uint64_t resample_seed = 0;
};

TwoSetEstimator make_two_set(const FeatureSet &inputs, const Eigen::VectorXd &targets,
                             const KernelParams &params, double noise_variance,
                             std::uint64_t split_seed);

/// n_members >= 2.  When noise_variance is exactly zero, duplicate indices
/// within one resample are collapsed before fitting so the kernel matrix
/// stays positive definite; otherwise duplicates are kept verbatim.
BootstrapEstimator make_bootstrap(const FeatureSet &inputs,
                                  const Eigen::VectorXd &targets,
                                  const KernelParams &params, double noise_variance,
                                  int n_members, std::uint64_t resample_seed);

/// Mean and standard deviation of the exact predictive distribution; the
/// observation noise is not added to the standard deviation.
PredictionBatch gpr_predict(const GprModel &m, const FeatureSet &queries);

/// Mean from the full model; std is the absolute difference of the two half
/// models' predictions.
PredictionBatch two_set_predict(const TwoSetEstimator &e, const FeatureSet &queries);

/// Mean from the full model; std is the sample standard deviation (n-1
/// denominator) of the member predictions.
PredictionBatch bootstrap_predict(const BootstrapEstimator &e, const FeatureSet &queries);

/// Any of the three uncertainty estimators, refit and queried uniformly.
using UncertaintyEstimator = std::variant<GprModel, TwoSetEstimator, BootstrapEstimator>;

PredictionBatch predict(const UncertaintyEstimator &e, const FeatureSet &queries);

/// The model whose mean all estimators report.
const GprModel &full_model(const UncertaintyEstimator &e);

/// Retrains on a new training set with unchanged hyperparameters.  Ensemble
/// estimators redraw their split/resample from the given seed; the member
/// count of a bootstrap estimator is preserved.
UncertaintyEstimator refit(const UncertaintyEstimator &e, const FeatureSet &inputs,
                           const Eigen::VectorXd &targets, std::uint64_t seed);

}  // namespace mlipuq
