#include "mlipuq/calib.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mlipuq/errors.hpp"
#include "mlipuq/stats.hpp"

namespace mlipuq {

std::vector<EvaluationRecord> make_records(const PredictionBatch &predictions,
                                           const Eigen::VectorXd &truths) {
  if (predictions.mean.size() != truths.size() ||
      predictions.std.size() != truths.size())
    throw ContractViolation("make_records: length mismatch");
  std::vector<EvaluationRecord> out(static_cast<std::size_t>(truths.size()));
  for (Eigen::Index i = 0; i < truths.size(); ++i) {
    auto &r = out[static_cast<std::size_t>(i)];
    r.mean = predictions.mean[i];
    r.uncertainty = predictions.std[i];
    if (r.uncertainty < 0.0)
      throw ContractViolation("make_records: negative uncertainty");
    r.truth = truths[i];
    r.error = r.truth - r.mean;
  }
  return out;
}

CalibrationCurve calibration_curve(const std::vector<EvaluationRecord> &records,
                                   int n_alphas) {
  if (records.empty())
    throw ContractViolation("calibration_curve: need at least one record");
  if (n_alphas < 2)
    throw ContractViolation("calibration_curve: need at least two alpha values");

  CalibrationCurve curve;
  curve.alpha_predicted.resize(n_alphas);
  curve.alpha_observed.resize(n_alphas);
  const double n = static_cast<double>(records.size());
  for (int i = 0; i < n_alphas; ++i) {
    const double alpha = static_cast<double>(i) / (n_alphas - 1);
    curve.alpha_predicted[i] = alpha;
    if (alpha >= 1.0) {
      // The z = infinity interval covers everything, including records with
      // zero uncertainty (where z * u would be indeterminate).
      curve.alpha_observed[i] = 1.0;
      continue;
    }
    const double z = normal_quantile(0.5 * (1.0 + alpha));
    Eigen::Index covered = 0;
    for (const auto &r : records)
      if (std::abs(r.error) <= z * r.uncertainty) ++covered;
    curve.alpha_observed[i] = static_cast<double>(covered) / n;
  }
  curve.miscalibration_area = trapezoid(
      curve.alpha_predicted,
      (curve.alpha_observed - curve.alpha_predicted).cwiseAbs());
  return curve;
}

std::vector<ReliabilityBin> extended_reliability(
    const std::vector<EvaluationRecord> &records, double delta_u, int min_count) {
  if (!(delta_u > 0.0) || !std::isfinite(delta_u))
    throw ContractViolation("extended_reliability: delta_u must be positive");
  if (min_count < 0)
    throw ContractViolation("extended_reliability: min_count must be >= 0");

  std::map<int, std::vector<double>> by_bin;
  for (const auto &r : records) {
    if (r.uncertainty < 0.0 || !std::isfinite(r.uncertainty))
      throw ContractViolation("extended_reliability: invalid uncertainty");
    const int beta = static_cast<int>(std::floor(r.uncertainty / delta_u)) + 1;
    by_bin[beta].push_back(r.error);
  }

  std::vector<ReliabilityBin> bins;
  bins.reserve(by_bin.size());
  for (const auto &[beta, errors] : by_bin) {
    ReliabilityBin b;
    b.index = beta;
    b.lower = (beta - 1) * delta_u;
    b.upper = beta * delta_u;
    b.center = (beta - 0.5) * delta_u;
    b.count = static_cast<Eigen::Index>(errors.size());
    b.suppressed = b.count <= min_count;
    const Eigen::Map<const Eigen::VectorXd> e(errors.data(),
                                              static_cast<Eigen::Index>(errors.size()));
    b.error_mean = sample_mean(e);
    b.error_std = sample_std(e);
    bins.push_back(b);
  }
  return bins;
}

ErrorHistogram per_bin_error_histogram(const std::vector<EvaluationRecord> &records,
                                       const ReliabilityBin &bin, int n_hist_bins) {
  if (n_hist_bins < 1)
    throw ContractViolation("per_bin_error_histogram: need at least one bar");
  std::vector<double> errors;
  for (const auto &r : records)
    if (r.uncertainty >= bin.lower && r.uncertainty < bin.upper)
      errors.push_back(r.error);

  ErrorHistogram h;
  if (errors.empty()) return h;

  double lo = *std::min_element(errors.begin(), errors.end());
  double hi = *std::max_element(errors.begin(), errors.end());
  if (lo == hi) {  // degenerate support: one bar of unit width
    lo -= 0.5;
    hi += 0.5;
  }
  h.edges.resize(n_hist_bins + 1);
  for (int i = 0; i <= n_hist_bins; ++i)
    h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / n_hist_bins;
  h.counts = Eigen::VectorXi::Zero(n_hist_bins);
  for (double e : errors) {
    int k = static_cast<int>(std::floor((e - lo) / (hi - lo) * n_hist_bins));
    k = std::clamp(k, 0, n_hist_bins - 1);
    ++h.counts[k];
  }
  h.predicted_density.resize(n_hist_bins);
  for (int i = 0; i < n_hist_bins; ++i) {
    const double center = 0.5 * (h.edges[i] + h.edges[i + 1]);
    h.predicted_density[i] =
        bin.center > 0.0 ? normal_pdf(center / bin.center) / bin.center : 0.0;
  }
  return h;
}

}  // namespace mlipuq
