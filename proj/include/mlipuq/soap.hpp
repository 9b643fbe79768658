#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mlipuq/structure.hpp"

namespace mlipuq {

/// Parameters of the smooth-overlap atomic-environment representation.
struct SoapConfig {
  double r_cut = 5.0;      // neighbor cutoff radius, Angstrom
  int n_max = 3;           // radial basis functions per species
  int l_max = 1;           // maximum spherical-harmonic degree
  double sigma_atom = 1.0; // Gaussian smearing width of each atom, Angstrom
  std::vector<int> species; // atomic numbers present, strictly increasing

  /// Throws ContractViolation on invalid parameter combinations.
  void validate() const;

  int n_species_pairs() const {
    const int s = static_cast<int>(species.size());
    return s * (s + 1) / 2;
  }

  /// Length of one per-atom feature vector:
  /// (l_max+1) * n_max(n_max+1)/2 * n_species_pairs.
  int feature_dim() const {
    return (l_max + 1) * (n_max * (n_max + 1) / 2) * n_species_pairs();
  }
};

/// Real spherical harmonics Y_lm(u) for all l <= l_max, m in [-l, l],
/// evaluated at a unit direction and stored at index l*l + (l + m).
/// Orthonormal over the sphere; no Condon-Shortley phase.
Eigen::VectorXd real_spherical_harmonics(int l_max, const Eigen::Vector3d &unit);

/// Exponentially scaled modified spherical Bessel function of the first
/// kind, e^(-x) * i_l(x), for x >= 0.  Stable for large arguments where the
/// unscaled function overflows.
double scaled_bessel_i(int l, double x);

/// Computes per-atom SOAP power-spectrum features.  The neighbor density of
/// each atom (its own Gaussian included) is expanded in an orthonormalized
/// Gaussian radial basis times real spherical harmonics, and the partial
/// power spectrum p^{s1 s2}_{n n' l} = sum_m c^{s1}_{nlm} c^{s2}_{n'lm} is
/// collected for species pairs s1 <= s2 and radial pairs n <= n'.
class SoapCalculator {
 public:
  explicit SoapCalculator(SoapConfig cfg);

  const SoapConfig &config() const { return cfg_; }

  /// One feature vector per atom, in atom order.
  /// Throws ConfigError if the structure contains a species not configured.
  std::vector<Eigen::VectorXd> features(const Structure &s) const;

  /// Density-expansion coefficients for the environment of one atom: one
  /// matrix per configured species, shaped n_max x (l_max+1)^2 with columns
  /// indexed l*l + (l + m).  Exposed for verification against direct
  /// numerical integration of the neighbor density.
  std::vector<Eigen::MatrixXd> expansion_coefficients(const Structure &s,
                                                      Eigen::Index center) const;

  /// Orthonormalized radial basis function value, n in [0, n_max).
  double radial_basis(int n, double r) const;

  /// Smooth cutoff multiplier 0.5 * (cos(pi r / r_cut) + 1) on [0, r_cut].
  double cutoff_value(double r) const;

  /// Gaussian exponents of the primitive radial functions exp(-alpha_n r^2).
  const Eigen::VectorXd &alphas() const { return alphas_; }

 private:
  void accumulate_neighbor(const Eigen::Vector3d &rel, Eigen::MatrixXd &coeff) const;

  SoapConfig cfg_;
  Eigen::VectorXd alphas_;       // primitive Gaussian exponents
  Eigen::MatrixXd lowdin_;       // S^(-1/2) combining primitives
  Eigen::VectorXd quad_r_;       // quadrature nodes on [0, r_cut]
  Eigen::VectorXd quad_w_;       // quadrature weights
  Eigen::MatrixXd basis_at_quad_; // n_max x n_quad orthonormal basis values
};

/// Convenience wrapper constructing a calculator per call.
std::vector<Eigen::VectorXd> soap_features(const Structure &s, const SoapConfig &cfg);

}  // namespace mlipuq
