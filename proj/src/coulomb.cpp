#include "mlipuq/coulomb.hpp"

#include <cmath>

#include "mlipuq/errors.hpp"

namespace mlipuq {

namespace {
constexpr double kBohrPerAngstrom = 1.8897259886;
constexpr double kMinDistanceAngstrom = 1e-10;
}  // namespace

Eigen::VectorXd coulomb_feature(const Structure &s) {
  s.validate();
  const Eigen::Index n = s.n_atoms();
  Eigen::VectorXd out(n * (n + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double zi = static_cast<double>(s.atomic_numbers[i]);
    out[k++] = 0.5 * std::pow(zi, 2.4);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (s.positions.row(i) - s.positions.row(j)).norm();
      if (d < kMinDistanceAngstrom)
        throw NumericalError("coulomb_feature: degenerate geometry, atoms " +
                             std::to_string(i) + " and " + std::to_string(j) +
                             " are coincident");
      const double zj = static_cast<double>(s.atomic_numbers[j]);
      out[k++] = zi * zj / (d * kBohrPerAngstrom);
    }
  }
  return out;
}

}  // namespace mlipuq
