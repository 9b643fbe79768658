#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlipuq/calib.hpp"

namespace mlipuq {

/// Knobs of the synthetic self-calibration check.  A model is fit to noisy
/// sine data, test targets are drawn from the model's own latent predictive
/// distributions (no observation noise, so the predictive std is the exact
/// error scale), and the calibration machinery must recover near-perfect
/// calibration.
struct SelfCheckConfig {
  std::size_t n_train = 30;
  std::size_t n_test = 2000;
  double noise_std = 0.1;
  std::uint64_t seed = 0;
  double bin_width = 0.0;  // <= 0: choose automatically from the uncertainties
  int min_count = 300;     // display threshold; see auto_bin_width notes
  bool tune = false;       // optimize hyperparameters instead of fixed ones
  double lengthscale = 0.45;
  double output_scale = 1.0;
  int n_alphas = 101;
};

struct SelfCheckReport {
  bool pass = false;
  double bin_width = 0.0;
  int displayed_bins = 0;
  CalibrationCurve curve;
  std::vector<ReliabilityBin> bins;
  std::vector<std::string> failures;  // one line per violated bound
};

/// Bin width heuristic for a self-calibration display: wide enough that
/// displayed bins carry hundreds of samples (so the +-0.15*u sanity band is
/// several standard errors wide), narrow enough that bin centers sit many
/// bins away from zero (so the center approximates the in-bin mean
/// uncertainty).  Made from the uncertainty quantiles.
double auto_bin_width(Eigen::VectorXd uncertainties);

/// Per displayed (non-suppressed) bin, checks |error_mean| <= 3*u/sqrt(count)
/// and |error_std - u| <= 0.15*u against the bin center u; also requires
/// miscalibration area < 0.05 and at least one displayed bin.
SelfCheckReport run_sine_self_check(const SelfCheckConfig &cfg);

}  // namespace mlipuq
