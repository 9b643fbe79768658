#include "mlipuq/io_csv.hpp"

#include <cstdio>
#include <fstream>

#include "mlipuq/errors.hpp"

namespace mlipuq {

namespace {

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_calibration_curve_csv(const std::string &path,
                                 const CalibrationCurve &curve) {
  auto out = open_out(path);
  out << "alpha_predicted,alpha_observed\n";
  for (Eigen::Index i = 0; i < curve.alpha_predicted.size(); ++i)
    out << format_double(curve.alpha_predicted[i]) << ","
        << format_double(curve.alpha_observed[i]) << "\n";
}

void write_reliability_csv(const std::string &path,
                           const std::vector<ReliabilityBin> &bins) {
  auto out = open_out(path);
  out << "bin_index,lower,upper,center,count,suppressed,error_mean,error_std\n";
  for (const auto &b : bins)
    out << b.index << "," << format_double(b.lower) << "," << format_double(b.upper)
        << "," << format_double(b.center) << "," << b.count << ","
        << (b.suppressed ? 1 : 0) << "," << format_double(b.error_mean) << ","
        << format_double(b.error_std) << "\n";
}

void write_trace_csv(const std::string &path, const ALTrace &trace) {
  auto out = open_out(path);
  out << "iteration,selected_index,mae,max_abs_error,abs_error_variance\n";
  for (const auto &r : trace.rows)
    out << r.iteration << "," << r.selected_index << "," << format_double(r.mae)
        << "," << format_double(r.max_abs_error) << ","
        << format_double(r.abs_error_variance) << "\n";
}

void write_key_value(const std::string &path,
                     const std::vector<std::pair<std::string, std::string>> &entries) {
  auto out = open_out(path);
  for (const auto &[k, v] : entries) {
    if (k.find('=') != std::string::npos || v.find('\n') != std::string::npos)
      throw ContractViolation("write_key_value: invalid key or value: " + k);
    out << k << "=" << v << "\n";
  }
}

std::map<std::string, std::string> read_key_value(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open key-value file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": expected key=value");
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

void write_svg_curve(const std::string &path, const Eigen::VectorXd &x,
                     const Eigen::VectorXd &y, bool with_diagonal) {
  if (x.size() != y.size() || x.size() < 2)
    throw ContractViolation("write_svg_curve: need matching series of length >= 2");
  const double x0 = x.minCoeff(), x1 = x.maxCoeff();
  const double y0 = y.minCoeff(), y1 = y.maxCoeff();
  const double w = 480.0, h = 480.0, pad = 40.0;
  const double sx = (x1 > x0) ? (w - 2 * pad) / (x1 - x0) : 1.0;
  const double sy = (y1 > y0) ? (h - 2 * pad) / (y1 - y0) : 1.0;
  auto px = [&](double v) { return pad + (v - x0) * sx; };
  auto py = [&](double v) { return h - pad - (v - y0) * sy; };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
      << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (with_diagonal)
    out << "<line x1=\"" << px(x0) << "\" y1=\"" << py(x0) << "\" x2=\"" << px(x1)
        << "\" y2=\"" << py(x1) << "\" stroke=\"#999\" stroke-dasharray=\"4\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out << px(x[i]) << "," << py(y[i]) << " ";
  out << "\"/>\n</svg>\n";
}

}  // namespace mlipuq
