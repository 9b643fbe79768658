#include "mlipuq/uq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlipuq/errors.hpp"
#include "mlipuq/rng.hpp"

namespace mlipuq {

namespace {

Eigen::VectorXd take_targets(const Eigen::VectorXd &y,
                             const std::vector<std::size_t> &idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(idx[i])];
  return out;
}

}  // namespace

TwoSetEstimator make_two_set(const FeatureSet &inputs, const Eigen::VectorXd &targets,
                             const KernelParams &params, double noise_variance,
                             std::uint64_t split_seed) {
  const std::size_t n = sample_count(inputs);
  if (n < 2)
    throw ContractViolation("make_two_set: need at least two training samples");

  Rng rng(split_seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  const std::vector<std::size_t> idx_a(order.begin(), order.begin() + n / 2);
  const std::vector<std::size_t> idx_b(order.begin() + n / 2, order.end());

  TwoSetEstimator e;
  e.split_seed = split_seed;
  e.full_model = fit(inputs, targets, params, noise_variance);
  e.half_a = fit(take(inputs, idx_a), take_targets(targets, idx_a), params,
                 noise_variance);
  e.half_b = fit(take(inputs, idx_b), take_targets(targets, idx_b), params,
                 noise_variance);
  return e;
}

BootstrapEstimator make_bootstrap(const FeatureSet &inputs,
                                  const Eigen::VectorXd &targets,
                                  const KernelParams &params, double noise_variance,
                                  int n_members, std::uint64_t resample_seed) {
  const std::size_t n = sample_count(inputs);
  if (n < 1) throw ContractViolation("make_bootstrap: empty training set");
  if (n_members < 2)
    throw ContractViolation("make_bootstrap: need at least two ensemble members");

  BootstrapEstimator e;
  e.resample_seed = resample_seed;
  e.full_model = fit(inputs, targets, params, noise_variance);
  e.members.reserve(static_cast<std::size_t>(n_members));
  for (int l = 0; l < n_members; ++l) {
    Rng rng = Rng::derive(resample_seed, static_cast<std::uint64_t>(l));
    std::vector<std::size_t> idx = rng.sample_with_replacement(n, n);
    if (noise_variance == 0.0) {
      // Without observation noise, duplicated rows would make the kernel
      // matrix singular; collapse them deterministically.
      std::sort(idx.begin(), idx.end());
      idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    }
    e.members.push_back(
        fit(take(inputs, idx), take_targets(targets, idx), params, noise_variance));
  }
  return e;
}

PredictionBatch gpr_predict(const GprModel &m, const FeatureSet &queries) {
  return {predict_mean(m, queries), predict_std(m, queries)};
}

PredictionBatch two_set_predict(const TwoSetEstimator &e, const FeatureSet &queries) {
  PredictionBatch out;
  out.mean = predict_mean(e.full_model, queries);
  out.std = (predict_mean(e.half_a, queries) - predict_mean(e.half_b, queries))
                .cwiseAbs();
  return out;
}

PredictionBatch bootstrap_predict(const BootstrapEstimator &e,
                                  const FeatureSet &queries) {
  const auto n = static_cast<Eigen::Index>(sample_count(queries));
  const auto N = static_cast<Eigen::Index>(e.members.size());
  Eigen::MatrixXd preds(n, N);
  for (Eigen::Index l = 0; l < N; ++l)
    preds.col(l) = predict_mean(e.members[static_cast<std::size_t>(l)], queries);

  PredictionBatch out;
  out.mean = predict_mean(e.full_model, queries);
  out.std.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mean = preds.row(i).mean();
    const double ss = (preds.row(i).array() - mean).square().sum();
    out.std[i] = std::sqrt(ss / static_cast<double>(N - 1));
  }
  return out;
}

PredictionBatch predict(const UncertaintyEstimator &e, const FeatureSet &queries) {
  return std::visit(
      [&](const auto &est) -> PredictionBatch {
        using T = std::decay_t<decltype(est)>;
        if constexpr (std::is_same_v<T, GprModel>) return gpr_predict(est, queries);
        else if constexpr (std::is_same_v<T, TwoSetEstimator>)
          return two_set_predict(est, queries);
        else
          return bootstrap_predict(est, queries);
      },
      e);
}

const GprModel &full_model(const UncertaintyEstimator &e) {
  return std::visit(
      [](const auto &est) -> const GprModel & {
        using T = std::decay_t<decltype(est)>;
        if constexpr (std::is_same_v<T, GprModel>) return est;
        else return est.full_model;
      },
      e);
}

UncertaintyEstimator refit(const UncertaintyEstimator &e, const FeatureSet &inputs,
                           const Eigen::VectorXd &targets, std::uint64_t seed) {
  const GprModel &prev = full_model(e);
  return std::visit(
      [&](const auto &est) -> UncertaintyEstimator {
        using T = std::decay_t<decltype(est)>;
        if constexpr (std::is_same_v<T, GprModel>) {
          return fit(inputs, targets, prev.params, prev.noise_variance);
        } else if constexpr (std::is_same_v<T, TwoSetEstimator>) {
          return make_two_set(inputs, targets, prev.params, prev.noise_variance, seed);
        } else {
          return make_bootstrap(inputs, targets, prev.params, prev.noise_variance,
                                static_cast<int>(est.members.size()), seed);
        }
      },
      e);
}

}  // namespace mlipuq
