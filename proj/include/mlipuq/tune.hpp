#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mlipuq/gp.hpp"

namespace mlipuq {

/// First-order moment-based optimizer settings used for marginal-likelihood
/// maximization over log-parameters.
struct AdamConfig {
  double learning_rate = 0.1;
  int steps = 200;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TuneResult {
  KernelParams params;
  double noise_variance = 0.0;
  double final_mll = 0.0;
  int steps_run = 0;
  bool aborted = false;       // non-finite likelihood/gradient encountered
  std::string diagnostic;     // reason when aborted
};

/// Maximizes the log marginal likelihood over log(output_scale),
/// log(length-scales), and log(noise_variance), running exactly cfg.steps
/// optimizer steps.  Deterministic.  If the likelihood or its gradient turns
/// non-finite the run aborts and the best parameters seen so far are
/// returned with a diagnostic.
TuneResult optimize_hyperparameters(const FeatureSet &inputs,
                                    const Eigen::VectorXd &targets,
                                    const KernelParams &init, double init_noise,
                                    const AdamConfig &cfg = {});

/// One initial-guess combination: a shared length-scale replicated across
/// all feature dimensions, an output scale, and a noise variance.
struct HyperInit {
  double output_scale = 1.0;
  double lengthscale = 1.0;
  double noise_variance = 1e-6;
};

/// The default search grid: length-scales {2, 10^0.75, 10^1.5}, output scale
/// {1}, noise variances {1e-4, 1e-6, 1e-8} — nine combinations.
std::vector<HyperInit> default_init_grid();

struct InitSelection {
  HyperInit best;
  std::size_t best_index = 0;
  std::vector<HyperInit> combos;
  std::vector<double> mean_losses;  // +inf where any fold failed
  std::vector<int> evaluations;     // completed fold fits per combination
};

/// Scores every grid combination by 5 repetitions of 5-fold cross
/// validation: each fold optimizes hyperparameters on its training portion
/// and is scored by the mean negative log predictive density of the held-out
/// observations (predictive variance plus noise variance).  Returns the
/// combination with the lowest mean loss; any fold failure disqualifies the
/// combination with an infinite loss.  Fold assignments are seeded and
/// shared across combinations.
InitSelection select_initial_guess(const FeatureSet &inputs,
                                   const Eigen::VectorXd &targets,
                                   const std::vector<HyperInit> &grid,
                                   std::uint64_t seed, const AdamConfig &cfg = {},
                                   int n_folds = 5, int n_repetitions = 5);

}  // namespace mlipuq
