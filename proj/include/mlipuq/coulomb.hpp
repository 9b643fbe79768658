#pragma once

#include <Eigen/Dense>

#include "mlipuq/structure.hpp"

namespace mlipuq {

/// Unsorted Coulomb-matrix feature of a structure: M_ii = 0.5 * Z_i^2.4,
/// M_ij = Z_i * Z_j / |R_i - R_j| with distances in Bohr, flattened as the
/// row-major upper triangle including the diagonal (length n(n+1)/2).
/// Throws NumericalError if two atoms are closer than 1e-10 Angstrom.
Eigen::VectorXd coulomb_feature(const Structure &s);

}  // namespace mlipuq
