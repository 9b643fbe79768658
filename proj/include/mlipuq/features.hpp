#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "mlipuq/soap.hpp"
#include "mlipuq/structure.hpp"

namespace mlipuq {

/// One global feature vector per sample, stacked as rows.
struct GlobalFeatures {
  Eigen::MatrixXd values;  // n_samples x D
};

/// One matrix of per-atom environment vectors per sample.
struct AtomisticFeatures {
  std::vector<Eigen::MatrixXd> environments;  // each n_atoms x D
};

/// A training or query collection in either representation.  Kernel and
/// model code dispatches on the active alternative; mixing the two in one
/// kernel evaluation is a contract violation.
using FeatureSet = std::variant<GlobalFeatures, AtomisticFeatures>;

std::size_t sample_count(const FeatureSet &fs);

/// Feature dimension D; throws ContractViolation on an empty set.
Eigen::Index feature_dim(const FeatureSet &fs);

/// Subset in the given index order.  Indices may repeat.
FeatureSet take(const FeatureSet &fs, const std::vector<std::size_t> &indices);

/// Concatenation of two sets of the same kind and dimension.
FeatureSet concat(const FeatureSet &a, const FeatureSet &b);

/// Single-sample set holding one global feature vector.
FeatureSet single_global(const Eigen::VectorXd &x);

/// Coulomb-matrix features of every structure, stacked as rows.
/// Requires a consistent dataset (same atom count and ordering throughout).
GlobalFeatures coulomb_features(const Dataset &ds);

/// SOAP environments of every structure.
AtomisticFeatures soap_features(const Dataset &ds, const SoapConfig &cfg);

/// Energies of every structure as a vector; throws ContractViolation if any
/// structure lacks a label.
Eigen::VectorXd energies(const Dataset &ds);

}  // namespace mlipuq
