#include "mlipuq/tune.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "mlipuq/errors.hpp"
#include "mlipuq/rng.hpp"
#include "mlipuq/stats.hpp"

namespace mlipuq {

namespace {

struct LogParams {
  Eigen::VectorXd theta;  // [log output_scale, log l_1..l_D, log noise]

  static LogParams from(const KernelParams &p, double noise) {
    LogParams lp;
    lp.theta.resize(p.lengthscales.size() + 2);
    lp.theta[0] = std::log(p.output_scale);
    lp.theta.segment(1, p.lengthscales.size()) = p.lengthscales.array().log();
    lp.theta[lp.theta.size() - 1] = std::log(noise);
    return lp;
  }

  KernelParams kernel_params() const {
    KernelParams p;
    p.output_scale = std::exp(theta[0]);
    p.lengthscales = theta.segment(1, theta.size() - 2).array().exp();
    return p;
  }

  double noise() const { return std::exp(theta[theta.size() - 1]); }
};

}  // namespace

TuneResult optimize_hyperparameters(const FeatureSet &inputs,
                                    const Eigen::VectorXd &targets,
                                    const KernelParams &init, double init_noise,
                                    const AdamConfig &cfg) {
  init.validate(feature_dim(inputs));
  if (!(init_noise > 0.0))
    throw ContractViolation(
        "optimize_hyperparameters: initial noise must be positive (it is "
        "optimized in log space)");
  if (cfg.steps < 0)
    throw ContractViolation("optimize_hyperparameters: negative step count");

  LogParams lp = LogParams::from(init, init_noise);
  const Eigen::Index np = lp.theta.size();
  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(np);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(np);

  TuneResult best;
  best.params = init;
  best.noise_variance = init_noise;
  best.final_mll = -std::numeric_limits<double>::infinity();

  auto abort_with = [&](int steps_done, const std::string &why) {
    TuneResult r = best;
    r.steps_run = steps_done;
    r.aborted = true;
    r.diagnostic = why;
    return r;
  };

  for (int t = 0; t < cfg.steps; ++t) {
    MllGradient g;
    try {
      g = mll_with_gradient(inputs, targets, lp.kernel_params(), lp.noise());
    } catch (const Error &e) {
      return abort_with(t, e.what());
    }
    Eigen::VectorXd grad(np);
    grad[0] = g.d_log_output_scale;
    grad.segment(1, np - 2) = g.d_log_lengthscales;
    grad[np - 1] = g.d_log_noise;
    if (!std::isfinite(g.value) || !grad.allFinite())
      return abort_with(t, "non-finite marginal likelihood or gradient");

    if (g.value > best.final_mll) {
      best.params = lp.kernel_params();
      best.noise_variance = lp.noise();
      best.final_mll = g.value;
    }

    // Ascent step with bias-corrected first and second moments.
    m1 = cfg.beta1 * m1 + (1.0 - cfg.beta1) * grad;
    m2 = cfg.beta2 * m2 + (1.0 - cfg.beta2) * grad.array().square().matrix();
    const double c1 = 1.0 - std::pow(cfg.beta1, t + 1);
    const double c2 = 1.0 - std::pow(cfg.beta2, t + 1);
    lp.theta.array() += cfg.learning_rate * (m1.array() / c1) /
                        ((m2.array() / c2).sqrt() + cfg.epsilon);
  }

  TuneResult r;
  r.params = lp.kernel_params();
  r.noise_variance = lp.noise();
  r.steps_run = cfg.steps;
  try {
    r.final_mll = log_marginal_likelihood(inputs, targets, r.params, r.noise_variance);
  } catch (const Error &e) {
    return abort_with(cfg.steps, e.what());
  }
  if (!std::isfinite(r.final_mll))
    return abort_with(cfg.steps, "non-finite marginal likelihood at final parameters");
  return r;
}

std::vector<HyperInit> default_init_grid() {
  const double lengthscales[] = {2.0, std::pow(10.0, 0.75), std::pow(10.0, 1.5)};
  const double output_scales[] = {1.0};
  const double noises[] = {1e-4, 1e-6, 1e-8};
  std::vector<HyperInit> grid;
  for (double l : lengthscales)
    for (double s : output_scales)
      for (double nv : noises) grid.push_back({s, l, nv});
  return grid;
}

InitSelection select_initial_guess(const FeatureSet &inputs,
                                   const Eigen::VectorXd &targets,
                                   const std::vector<HyperInit> &grid,
                                   std::uint64_t seed, const AdamConfig &cfg,
                                   int n_folds, int n_repetitions) {
  const auto n = static_cast<Eigen::Index>(sample_count(inputs));
  if (targets.size() != n)
    throw ContractViolation("select_initial_guess: target count mismatch");
  if (n < 10)
    throw ContractViolation("select_initial_guess: need at least 10 samples");
  if (grid.empty())
    throw ContractViolation("select_initial_guess: empty grid");
  if (n_folds < 2 || n_repetitions < 1 || n < n_folds)
    throw ContractViolation("select_initial_guess: invalid fold configuration");
  const Eigen::Index dim = feature_dim(inputs);

  // One shuffled fold assignment per repetition, shared by all combinations.
  std::vector<std::vector<std::vector<std::size_t>>> folds(n_repetitions);
  for (int rep = 0; rep < n_repetitions; ++rep) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(rep));
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    folds[rep].resize(n_folds);
    for (std::size_t i = 0; i < order.size(); ++i)
      folds[rep][i % static_cast<std::size_t>(n_folds)].push_back(order[i]);
  }

  InitSelection sel;
  sel.combos = grid;
  sel.mean_losses.assign(grid.size(), 0.0);
  sel.evaluations.assign(grid.size(), 0);

  for (std::size_t c = 0; c < grid.size(); ++c) {
    double loss_sum = 0.0;
    bool failed = false;
    for (int rep = 0; rep < n_repetitions && !failed; ++rep) {
      for (int f = 0; f < n_folds && !failed; ++f) {
        std::vector<std::size_t> train_idx;
        for (int other = 0; other < n_folds; ++other)
          if (other != f)
            train_idx.insert(train_idx.end(), folds[rep][other].begin(),
                             folds[rep][other].end());
        const auto &held = folds[rep][f];
        try {
          const FeatureSet train_x = take(inputs, train_idx);
          Eigen::VectorXd train_y(static_cast<Eigen::Index>(train_idx.size()));
          for (std::size_t i = 0; i < train_idx.size(); ++i)
            train_y[static_cast<Eigen::Index>(i)] =
                targets[static_cast<Eigen::Index>(train_idx[i])];

          const KernelParams init = KernelParams::isotropic(
              grid[c].output_scale, grid[c].lengthscale, dim);
          const TuneResult tuned = optimize_hyperparameters(
              train_x, train_y, init, grid[c].noise_variance, cfg);
          const GprModel model =
              fit(train_x, train_y, tuned.params, tuned.noise_variance);

          const FeatureSet held_x = take(inputs, held);
          const Eigen::VectorXd mean = predict_mean(model, held_x);
          const Eigen::VectorXd std_dev = predict_std(model, held_x);
          double fold_loss = 0.0;
          for (std::size_t i = 0; i < held.size(); ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            fold_loss += negative_log_density(
                targets[static_cast<Eigen::Index>(held[i])], mean[ii],
                std_dev[ii] * std_dev[ii] + model.noise_variance);
          }
          fold_loss /= static_cast<double>(held.size());
          if (!std::isfinite(fold_loss)) {
            failed = true;
            break;
          }
          loss_sum += fold_loss;
          ++sel.evaluations[c];
        } catch (const Error &) {
          failed = true;
        }
      }
    }
    sel.mean_losses[c] =
        failed ? std::numeric_limits<double>::infinity()
               : loss_sum / static_cast<double>(n_folds * n_repetitions);
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < grid.size(); ++c)
    if (sel.mean_losses[c] < sel.mean_losses[best]) best = c;
  if (!std::isfinite(sel.mean_losses[best]))
    throw NumericalError("select_initial_guess: every grid combination failed");
  sel.best = grid[best];
  sel.best_index = best;
  return sel;
}

}  // namespace mlipuq
