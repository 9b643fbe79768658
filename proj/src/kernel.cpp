#include "mlipuq/kernel.hpp"

namespace mlipuq {

namespace {

// Pairwise squared distances between row collections that were already
// scaled by the inverse length-scales, via the Gram-product expansion;
// tiny negative values from cancellation are clamped to zero.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B) {
  const Eigen::VectorXd na = A.rowwise().squaredNorm();
  const Eigen::VectorXd nb = B.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * (A * B.transpose());
  d2.colwise() += na;
  d2.rowwise() += nb.transpose();
  return d2.cwiseMax(0.0);
}

Eigen::MatrixXd scale_rows(const Eigen::MatrixXd &X, const KernelParams &p) {
  return X * p.lengthscales.cwiseInverse().asDiagonal();
}

}  // namespace

void KernelParams::validate(Eigen::Index dim) const {
  if (!(output_scale > 0.0) || !std::isfinite(output_scale))
    throw ContractViolation("KernelParams: output_scale must be positive and finite");
  if (lengthscales.size() != dim)
    throw ContractViolation("KernelParams: length-scale count does not match dimension");
  for (Eigen::Index d = 0; d < lengthscales.size(); ++d)
    if (!(lengthscales[d] > 0.0) || !std::isfinite(lengthscales[d]))
      throw ContractViolation("KernelParams: length-scales must be positive and finite");
}

KernelParams KernelParams::isotropic(double output_scale, double lengthscale,
                                     Eigen::Index dim) {
  KernelParams p;
  p.output_scale = output_scale;
  p.lengthscales = Eigen::VectorXd::Constant(dim, lengthscale);
  return p;
}

double atomistic_kernel_eval(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B,
                             const KernelParams &p) {
  if (A.rows() == 0 || B.rows() == 0)
    throw ContractViolation("atomistic_kernel_eval: empty atom set");
  if (A.cols() != B.cols() || A.cols() != p.lengthscales.size())
    throw ContractViolation("atomistic_kernel_eval: dimension mismatch");
  const Eigen::MatrixXd d2 = squared_distances(scale_rows(A, p), scale_rows(B, p));
  return p.output_scale * (-0.5 * d2.array()).exp().sum();
}

Eigen::MatrixXd kernel_matrix(const FeatureSet &A, const FeatureSet &B,
                              const KernelParams &p) {
  if (A.index() != B.index())
    throw ContractViolation("kernel_matrix: mixed representation kinds");
  if (sample_count(A) == 0 || sample_count(B) == 0)
    throw ContractViolation("kernel_matrix: empty feature set");
  if (feature_dim(A) != feature_dim(B))
    throw ContractViolation("kernel_matrix: feature dimension mismatch");
  p.validate(feature_dim(A));

  if (const auto *ga = std::get_if<GlobalFeatures>(&A)) {
    const auto &gb = std::get<GlobalFeatures>(B);
    const Eigen::MatrixXd d2 =
        squared_distances(scale_rows(ga->values, p), scale_rows(gb.values, p));
    return p.output_scale * (-0.5 * d2.array()).exp();
  }

  const auto &aa = std::get<AtomisticFeatures>(A);
  const auto &ab = std::get<AtomisticFeatures>(B);
  const Eigen::Index na = static_cast<Eigen::Index>(aa.environments.size());
  const Eigen::Index nb = static_cast<Eigen::Index>(ab.environments.size());
  std::vector<Eigen::MatrixXd> sa(aa.environments.size()), sb(ab.environments.size());
  for (Eigen::Index i = 0; i < na; ++i) sa[i] = scale_rows(aa.environments[i], p);
  for (Eigen::Index j = 0; j < nb; ++j) sb[j] = scale_rows(ab.environments[j], p);
  Eigen::MatrixXd K(na, nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < nb; ++j)
      K(i, j) = p.output_scale *
                (-0.5 * squared_distances(sa[i], sb[j]).array()).exp().sum();
  return K;
}

Eigen::VectorXd kernel_diagonal(const FeatureSet &A, const KernelParams &p) {
  if (sample_count(A) == 0)
    throw ContractViolation("kernel_diagonal: empty feature set");
  p.validate(feature_dim(A));
  if (const auto *g = std::get_if<GlobalFeatures>(&A))
    return Eigen::VectorXd::Constant(g->values.rows(), p.output_scale);
  const auto &a = std::get<AtomisticFeatures>(A);
  Eigen::VectorXd d(static_cast<Eigen::Index>(a.environments.size()));
  for (std::size_t i = 0; i < a.environments.size(); ++i)
    d[static_cast<Eigen::Index>(i)] =
        atomistic_kernel_eval(a.environments[i], a.environments[i], p);
  return d;
}

}  // namespace mlipuq
