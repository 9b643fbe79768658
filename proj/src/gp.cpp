#include "mlipuq/gp.hpp"

#include <cmath>
#include <string>

#include "mlipuq/errors.hpp"

namespace mlipuq {

namespace {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-4;
constexpr double kStdClampRelative = 1e-10;

// Forward/backward triangular solves computing (L L^T)^-1 b.
Eigen::VectorXd chol_solve(const Eigen::MatrixXd &L, const Eigen::VectorXd &b) {
  return L.transpose().triangularView<Eigen::Upper>().solve(
      L.triangularView<Eigen::Lower>().solve(b));
}

}  // namespace

CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd &K) {
  if (K.rows() != K.cols() || K.rows() == 0)
    throw ContractViolation("cholesky_with_jitter: matrix must be square and non-empty");
  const double mean_diag = K.diagonal().mean();
  double level = 0.0;  // relative to the mean diagonal
  for (;;) {
    Eigen::MatrixXd attempt = K;
    const double jitter = level * mean_diag;
    attempt.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(attempt);
    if (llt.info() == Eigen::Success) return {llt.matrixL(), jitter};
    if (level >= kJitterMax)
      throw NumericalError(
          "cholesky_with_jitter: matrix not positive definite even with jitter " +
          std::to_string(jitter));
    level = (level == 0.0) ? kJitterStart : level * 10.0;
  }
}

GprModel fit(FeatureSet inputs, const Eigen::VectorXd &targets,
             const KernelParams &params, double noise_variance) {
  const auto n = static_cast<Eigen::Index>(sample_count(inputs));
  if (n < 1) throw ContractViolation("fit: need at least one training sample");
  if (targets.size() != n)
    throw ContractViolation("fit: target count does not match sample count");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
    throw ContractViolation("fit: noise_variance must be finite and >= 0");
  params.validate(feature_dim(inputs));

  GprModel m;
  m.target_mean = targets.mean();
  m.targets_centered = targets.array() - m.target_mean;
  m.noise_variance = noise_variance;
  m.params = params;

  Eigen::MatrixXd K = kernel_matrix(inputs, inputs, params);
  K.diagonal().array() += noise_variance;
  auto [L, jitter] = cholesky_with_jitter(K);
  m.chol = std::move(L);
  m.jitter = jitter;
  m.weights = chol_solve(m.chol, m.targets_centered);
  m.inputs = std::move(inputs);
  return m;
}

Eigen::VectorXd predict_mean(const GprModel &m, const FeatureSet &queries) {
  const Eigen::MatrixXd Kq = kernel_matrix(queries, m.inputs, m.params);
  return (Kq * m.weights).array() + m.target_mean;
}

Eigen::VectorXd predict_std(const GprModel &m, const FeatureSet &queries) {
  const Eigen::MatrixXd Kq = kernel_matrix(m.inputs, queries, m.params);
  const Eigen::MatrixXd V = m.chol.triangularView<Eigen::Lower>().solve(Kq);
  const Eigen::VectorXd prior = kernel_diagonal(queries, m.params);
  Eigen::VectorXd out(prior.size());
  for (Eigen::Index i = 0; i < prior.size(); ++i) {
    double var = prior[i] - V.col(i).squaredNorm();
    if (var < 0.0) {
      if (var < -kStdClampRelative * prior[i])
        throw NumericalError("predict_std: negative predictive variance " +
                             std::to_string(var));
      var = 0.0;
    }
    out[i] = std::sqrt(var);
  }
  return out;
}

double log_marginal_likelihood(const GprModel &m) {
  const auto n = static_cast<double>(m.train_count());
  return -0.5 * m.targets_centered.dot(m.weights) -
         m.chol.diagonal().array().log().sum() - 0.5 * n * std::log(2.0 * M_PI);
}

double log_marginal_likelihood(const FeatureSet &inputs, const Eigen::VectorXd &targets,
                               const KernelParams &params, double noise_variance) {
  return log_marginal_likelihood(fit(inputs, targets, params, noise_variance));
}

namespace {

// Length-scale gradient terms shared by both representations.  With rows of
// S already scaled by 1/l and M the symmetric weight matrix on those rows,
// d mll / d log l_d = -1/2 sum_ab M_ab (s_ad - s_bd)^2 = t3_d - t1_d where
// t1_d = sum_a rowsum(M)_a s_ad^2 and t3_d = sum_ab M_ab s_ad s_bd.
struct LengthscaleAccumulator {
  Eigen::VectorXd t1, t3;
  explicit LengthscaleAccumulator(Eigen::Index dim)
      : t1(Eigen::VectorXd::Zero(dim)), t3(Eigen::VectorXd::Zero(dim)) {}

  void add_block(const Eigen::MatrixXd &M, const Eigen::MatrixXd &Sa,
                 const Eigen::MatrixXd &Sb) {
    const Eigen::VectorXd row = M.rowwise().sum();
    const Eigen::VectorXd col = M.colwise().sum();
    t1 += 0.5 * (Sa.array().square().matrix().transpose() * row +
                 Sb.array().square().matrix().transpose() * col);
    t3 += (Sa.array() * (M * Sb).array()).colwise().sum().matrix().transpose();
  }

  Eigen::VectorXd gradient() const { return t3 - t1; }
};

}  // namespace

MllGradient mll_with_gradient(const FeatureSet &inputs, const Eigen::VectorXd &targets,
                              const KernelParams &params, double noise_variance) {
  GprModel m = fit(inputs, targets, params, noise_variance);
  const Eigen::Index n = m.train_count();
  const Eigen::Index dim = feature_dim(inputs);

  // W = (K + noise I)^-1 - alpha alpha^T; every gradient component is
  // -1/2 sum(W .* dK/dtheta) over the symmetric matrices involved.
  Eigen::MatrixXd Kinv = Eigen::MatrixXd::Identity(n, n);
  m.chol.triangularView<Eigen::Lower>().solveInPlace(Kinv);
  m.chol.transpose().triangularView<Eigen::Upper>().solveInPlace(Kinv);
  const Eigen::MatrixXd W = Kinv - m.weights * m.weights.transpose();

  MllGradient g;
  g.value = log_marginal_likelihood(m);
  g.d_log_noise = -0.5 * noise_variance * W.trace();

  const Eigen::MatrixXd K = kernel_matrix(inputs, inputs, params);
  g.d_log_output_scale = -0.5 * (W.array() * K.array()).sum();

  LengthscaleAccumulator acc(dim);
  if (const auto *gf = std::get_if<GlobalFeatures>(&inputs)) {
    const Eigen::MatrixXd S = gf->values * params.lengthscales.cwiseInverse().asDiagonal();
    const Eigen::MatrixXd M = W.array() * K.array();
    acc.add_block(M, S, S);
  } else {
    const auto &af = std::get<AtomisticFeatures>(inputs);
    std::vector<Eigen::MatrixXd> S(af.environments.size());
    for (std::size_t i = 0; i < af.environments.size(); ++i)
      S[i] = af.environments[i] * params.lengthscales.cwiseInverse().asDiagonal();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto &Sa = S[static_cast<std::size_t>(i)];
        const auto &Sb = S[static_cast<std::size_t>(j)];
        Eigen::MatrixXd d2(Sa.rows(), Sb.rows());
        for (Eigen::Index a = 0; a < Sa.rows(); ++a)
          d2.row(a) = (Sb.rowwise() - Sa.row(a)).rowwise().squaredNorm().transpose();
        const Eigen::MatrixXd M =
            W(i, j) * params.output_scale * (-0.5 * d2.array()).exp();
        acc.add_block(M, Sa, Sb);
      }
    }
  }
  g.d_log_lengthscales = acc.gradient();
  return g;
}

GprModel append_sample(const GprModel &m, const FeatureSet &input, double target) {
  if (sample_count(input) != 1)
    throw ContractViolation("append_sample: input must hold exactly one sample");
  const Eigen::Index n = m.train_count();

  const Eigen::VectorXd k_vec = kernel_matrix(m.inputs, input, m.params).col(0);
  const double k_self =
      kernel_diagonal(input, m.params)[0] + m.noise_variance + m.jitter;
  const Eigen::VectorXd l_vec = m.chol.triangularView<Eigen::Lower>().solve(k_vec);
  const double rad = k_self - l_vec.squaredNorm();
  if (!(rad > 0.0))
    throw NumericalError("append_sample: bordered factor not positive definite; refit");

  GprModel out;
  out.inputs = concat(m.inputs, input);
  out.noise_variance = m.noise_variance;
  out.params = m.params;
  out.jitter = m.jitter;

  Eigen::VectorXd targets(n + 1);
  targets.head(n) = m.targets_centered.array() + m.target_mean;
  targets[n] = target;
  out.target_mean = targets.mean();
  out.targets_centered = targets.array() - out.target_mean;

  out.chol = Eigen::MatrixXd::Zero(n + 1, n + 1);
  out.chol.topLeftCorner(n, n) = m.chol;
  out.chol.row(n).head(n) = l_vec.transpose();
  out.chol(n, n) = std::sqrt(rad);
  out.weights = chol_solve(out.chol, out.targets_centered);
  return out;
}

}  // namespace mlipuq
