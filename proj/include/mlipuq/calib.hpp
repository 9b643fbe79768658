#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mlipuq/uq.hpp"

namespace mlipuq {

/// One prediction paired with its ground truth; error = truth - mean.
struct EvaluationRecord {
  double mean = 0.0;
  double uncertainty = 0.0;
  double truth = 0.0;
  double error = 0.0;
};

std::vector<EvaluationRecord> make_records(const PredictionBatch &predictions,
                                           const Eigen::VectorXd &truths);

/// Predicted vs. observed coverage of central Gaussian confidence intervals
/// over an even alpha grid including both endpoints, and the trapezoidal
/// integral of the absolute gap between the two.
struct CalibrationCurve {
  Eigen::VectorXd alpha_predicted;
  Eigen::VectorXd alpha_observed;
  double miscalibration_area = 0.0;
};
CalibrationCurve calibration_curve(const std::vector<EvaluationRecord> &records,
                                   int n_alphas = 101);

/// Error statistics of the records whose uncertainty falls into one
/// half-open interval [(index-1)*delta_u, index*delta_u).  A well-calibrated
/// estimator has error_mean near 0 and error_std near the bin center.
struct ReliabilityBin {
  int index = 1;          // beta >= 1
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;    // (beta - 1/2) * delta_u
  Eigen::Index count = 0;
  bool suppressed = false;  // count <= min_count: excluded from display
  double error_mean = 0.0;
  double error_std = 0.0;   // n-1 denominator; 0 for a single record
};

/// Groups records into equidistant uncertainty bins.  Only non-empty bins
/// are returned, in increasing bin order; counts sum to the record count.
std::vector<ReliabilityBin> extended_reliability(
    const std::vector<EvaluationRecord> &records, double delta_u, int min_count = 50);

/// Histogram of the errors inside one reliability bin, with the ideal
/// Gaussian density N(0, center^2) sampled at the bar centers for overlays.
struct ErrorHistogram {
  Eigen::VectorXd edges;              // n_bins + 1, empty for an empty bin
  Eigen::VectorXi counts;             // n_bins
  Eigen::VectorXd predicted_density;  // n_bins, N(0, center^2) at bar centers
};
ErrorHistogram per_bin_error_histogram(const std::vector<EvaluationRecord> &records,
                                       const ReliabilityBin &bin, int n_hist_bins);

}  // namespace mlipuq
