#include <doctest.h>

#include <cmath>
#include <limits>

#include "mlipuq/dataio.hpp"
#include "mlipuq/errors.hpp"
#include "mlipuq/gp.hpp"
#include "mlipuq/tune.hpp"

using namespace mlipuq;

namespace {

FeatureSet sine_inputs(std::size_t n, std::uint64_t seed, Eigen::VectorXd &targets) {
  const SineData d = synth_sine(n, 1, 0.1, seed);
  targets = d.train_targets;
  return GlobalFeatures{d.train_inputs};
}

}  // namespace

TEST_SUITE("tune") {

TEST_CASE("optimization increases the marginal likelihood") {
  Eigen::VectorXd y;
  const FeatureSet x = sine_inputs(25, 1, y);
  const KernelParams init = KernelParams::isotropic(1.0, 5.0, 1);
  const double init_noise = 1e-2;
  const double before = log_marginal_likelihood(x, y, init, init_noise);

  AdamConfig cfg;
  cfg.steps = 60;
  const TuneResult r = optimize_hyperparameters(x, y, init, init_noise, cfg);
  CHECK_FALSE(r.aborted);
  CHECK(r.steps_run == 60);
  CHECK(r.final_mll > before);
  CHECK(r.final_mll ==
        doctest::Approx(log_marginal_likelihood(x, y, r.params, r.noise_variance))
            .epsilon(1e-12));
}

TEST_CASE("optimization runs the exact configured step count and is deterministic") {
  Eigen::VectorXd y;
  const FeatureSet x = sine_inputs(15, 2, y);
  const KernelParams init = KernelParams::isotropic(1.0, 2.0, 1);
  AdamConfig cfg;
  cfg.steps = 7;
  const TuneResult a = optimize_hyperparameters(x, y, init, 1e-4, cfg);
  const TuneResult b = optimize_hyperparameters(x, y, init, 1e-4, cfg);
  CHECK(a.steps_run == 7);
  CHECK(a.params.output_scale == b.params.output_scale);
  CHECK((a.params.lengthscales - b.params.lengthscales).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.noise_variance == b.noise_variance);
  CHECK(a.final_mll == b.final_mll);
}

TEST_CASE("zero steps returns the initial parameters with their likelihood") {
  Eigen::VectorXd y;
  const FeatureSet x = sine_inputs(12, 3, y);
  const KernelParams init = KernelParams::isotropic(1.5, 0.7, 1);
  AdamConfig cfg;
  cfg.steps = 0;
  const TuneResult r = optimize_hyperparameters(x, y, init, 1e-3, cfg);
  CHECK_FALSE(r.aborted);
  CHECK(r.steps_run == 0);
  CHECK(r.params.output_scale == 1.5);
  CHECK(r.params.lengthscales[0] == 0.7);
  CHECK(r.noise_variance == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(r.final_mll ==
        doctest::Approx(log_marginal_likelihood(x, y, init, 1e-3)).epsilon(1e-12));
}

TEST_CASE("non-finite targets abort with a diagnostic instead of looping") {
  Eigen::MatrixXd X(3, 1);
  X << 0.0, 1.0, 2.0;
  Eigen::VectorXd y(3);
  y << 1.0, std::numeric_limits<double>::quiet_NaN(), 0.0;
  const TuneResult r = optimize_hyperparameters(GlobalFeatures{X}, y,
                                                KernelParams::isotropic(1.0, 1.0, 1),
                                                1e-4);
  CHECK(r.aborted);
  CHECK_FALSE(r.diagnostic.empty());
}

TEST_CASE("initial noise must be positive because it is optimized in log space") {
  Eigen::VectorXd y;
  const FeatureSet x = sine_inputs(12, 4, y);
  CHECK_THROWS_AS(
      optimize_hyperparameters(x, y, KernelParams::isotropic(1.0, 1.0, 1), 0.0),
      ContractViolation);
}

TEST_CASE("default grid holds the nine documented combinations in order") {
  const auto grid = default_init_grid();
  REQUIRE(grid.size() == 9);
  const double l_mid = std::pow(10.0, 0.75);
  const double l_hi = std::pow(10.0, 1.5);
  const double ls[] = {2.0, 2.0, 2.0, l_mid, l_mid, l_mid, l_hi, l_hi, l_hi};
  const double nv[] = {1e-4, 1e-6, 1e-8, 1e-4, 1e-6, 1e-8, 1e-4, 1e-6, 1e-8};
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(grid[i].output_scale == 1.0);
    CHECK(grid[i].lengthscale == doctest::Approx(ls[i]).epsilon(1e-15));
    CHECK(grid[i].noise_variance == doctest::Approx(nv[i]).epsilon(1e-15));
  }
}

TEST_CASE("initial-guess selection scores every combination on shared folds") {
  Eigen::VectorXd y;
  const FeatureSet x = sine_inputs(20, 5, y);
  AdamConfig cfg;
  cfg.steps = 5;  // keep the cross validation cheap
  std::vector<HyperInit> grid = {{1.0, 1.0, 1e-4}, {1.0, 3.0, 1e-4}};

  const InitSelection sel = select_initial_guess(x, y, grid, 9, cfg, 4, 2);
  REQUIRE(sel.combos.size() == 2);
  CHECK(sel.evaluations[0] == 8);  // 2 repetitions x 4 folds
  CHECK(sel.evaluations[1] == 8);
  CHECK(std::isfinite(sel.mean_losses[0]));
  CHECK(std::isfinite(sel.mean_losses[1]));
  CHECK(sel.mean_losses[sel.best_index] ==
        doctest::Approx(std::min(sel.mean_losses[0], sel.mean_losses[1]))
            .epsilon(1e-15));

  const InitSelection again = select_initial_guess(x, y, grid, 9, cfg, 4, 2);
  CHECK(again.best_index == sel.best_index);
  CHECK(again.mean_losses[0] == sel.mean_losses[0]);
  CHECK(again.mean_losses[1] == sel.mean_losses[1]);
}

TEST_CASE("a failing combination is disqualified with an infinite loss") {
  Eigen::VectorXd y;
  const FeatureSet x = sine_inputs(20, 6, y);
  AdamConfig cfg;
  cfg.steps = 3;
  // Negative initial noise makes every fold of the first combination throw.
  std::vector<HyperInit> grid = {{1.0, 1.0, -1.0}, {1.0, 2.0, 1e-4}};
  const InitSelection sel = select_initial_guess(x, y, grid, 3, cfg, 4, 2);
  CHECK(std::isinf(sel.mean_losses[0]));
  CHECK(sel.best_index == 1);
}

TEST_CASE("selection fails loudly when every combination is invalid") {
  Eigen::VectorXd y;
  const FeatureSet x = sine_inputs(15, 7, y);
  std::vector<HyperInit> grid = {{1.0, 1.0, -1.0}, {1.0, 2.0, -2.0}};
  CHECK_THROWS_AS(select_initial_guess(x, y, grid, 0, AdamConfig{}, 3, 1),
                  NumericalError);
}

TEST_CASE("equally scored duplicate combinations resolve to the first") {
  Eigen::VectorXd y;
  const FeatureSet x = sine_inputs(16, 8, y);
  AdamConfig cfg;
  cfg.steps = 2;
  std::vector<HyperInit> grid = {{1.0, 2.0, 1e-4}, {1.0, 2.0, 1e-4}};
  const InitSelection sel = select_initial_guess(x, y, grid, 5, cfg, 4, 1);
  CHECK(sel.mean_losses[0] == sel.mean_losses[1]);
  CHECK(sel.best_index == 0);
}

TEST_CASE("selection requires a minimum sample count") {
  Eigen::VectorXd y;
  const FeatureSet x = sine_inputs(9, 9, y);
  CHECK_THROWS_AS(
      select_initial_guess(x, y, default_init_grid(), 0, AdamConfig{}, 5, 5),
      ContractViolation);
}

}  // TEST_SUITE
