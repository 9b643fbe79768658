#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mlipuq/active_learning.hpp"
#include "mlipuq/calib.hpp"

namespace mlipuq {

/// Full-precision decimal rendering that round-trips a double exactly.
std::string format_double(double v);

/// Columns: alpha_predicted, alpha_observed.
void write_calibration_curve_csv(const std::string &path, const CalibrationCurve &curve);

/// Columns: bin_index, lower, upper, center, count, suppressed, error_mean,
/// error_std.
void write_reliability_csv(const std::string &path,
                           const std::vector<ReliabilityBin> &bins);

/// Columns: iteration, selected_index, mae, max_abs_error, abs_error_variance.
void write_trace_csv(const std::string &path, const ALTrace &trace);

/// Ordered key=value lines; values may not contain newlines.
void write_key_value(const std::string &path,
                     const std::vector<std::pair<std::string, std::string>> &entries);
std::map<std::string, std::string> read_key_value(const std::string &path);

/// Minimal decorative line plot (one polyline per series plus an optional
/// y = x reference); CSV remains the contractual output format.
void write_svg_curve(const std::string &path, const Eigen::VectorXd &x,
                     const Eigen::VectorXd &y, bool with_diagonal);

}  // namespace mlipuq
