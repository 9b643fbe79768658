#include "mlipuq/active_learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mlipuq/errors.hpp"
#include "mlipuq/rng.hpp"
#include "mlipuq/stats.hpp"

namespace mlipuq {

namespace {

// Stream purposes for per-run child generators.
constexpr std::uint64_t kPurposeInitialDraw = 0x11;
constexpr std::uint64_t kPurposeRandomStrategy = 0x22;
constexpr std::uint64_t kPurposeEnsembleBase = 0x33;

}  // namespace

ALStrategy parse_strategy(const std::string &name) {
  if (name == "gpr_std") return ALStrategy::gpr_std;
  if (name == "two_set") return ALStrategy::two_set;
  if (name == "bootstrap") return ALStrategy::bootstrap;
  if (name == "random") return ALStrategy::random;
  if (name == "oracle_max_error") return ALStrategy::oracle_max_error;
  throw ConfigError("unknown active-learning strategy: '" + name + "'");
}

std::string strategy_name(ALStrategy s) {
  switch (s) {
    case ALStrategy::gpr_std: return "gpr_std";
    case ALStrategy::two_set: return "two_set";
    case ALStrategy::bootstrap: return "bootstrap";
    case ALStrategy::random: return "random";
    case ALStrategy::oracle_max_error: return "oracle_max_error";
  }
  throw ContractViolation("strategy_name: invalid enum value");
}

GuardedPool::GuardedPool(FeatureSet inputs, Eigen::VectorXd labels)
    : inputs_(std::move(inputs)), labels_(std::move(labels)) {
  if (static_cast<Eigen::Index>(sample_count(inputs_)) != labels_.size())
    throw ContractViolation("GuardedPool: label count does not match inputs");
  revealed_.assign(static_cast<std::size_t>(labels_.size()), false);
}

double GuardedPool::acquire_label(std::size_t i) {
  if (i >= revealed_.size())
    throw ContractViolation("GuardedPool::acquire_label: index out of range");
  revealed_[i] = true;
  return labels_[static_cast<Eigen::Index>(i)];
}

double GuardedPool::oracle_label(std::size_t i) const {
  if (i >= revealed_.size())
    throw ContractViolation("GuardedPool::oracle_label: index out of range");
  ++oracle_accesses_;
  return labels_[static_cast<Eigen::Index>(i)];
}

bool GuardedPool::revealed(std::size_t i) const {
  if (i >= revealed_.size())
    throw ContractViolation("GuardedPool::revealed: index out of range");
  return revealed_[i];
}

std::size_t GuardedPool::revealed_count() const {
  return static_cast<std::size_t>(
      std::count(revealed_.begin(), revealed_.end(), true));
}

Metrics evaluate_metrics(const Eigen::VectorXd &predictions,
                         const Eigen::VectorXd &truths) {
  if (predictions.size() != truths.size() || predictions.size() == 0)
    throw ContractViolation("evaluate_metrics: inputs must be equal-length and non-empty");
  const Eigen::VectorXd abs_err = (truths - predictions).cwiseAbs();
  Metrics m;
  m.mae = abs_err.mean();
  m.max_abs_error = abs_err.maxCoeff();
  const double s = sample_std(abs_err);
  m.abs_error_variance = s * s;
  return m;
}

std::size_t argmax_selection(const std::vector<double> &scores,
                             const std::vector<std::size_t> &pool_indices) {
  if (scores.empty() || scores.size() != pool_indices.size())
    throw ContractViolation("argmax_selection: scores and indices must match and be non-empty");
  bool found = false;
  double best_score = -std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) continue;
    const bool better =
        !found || scores[i] > best_score ||
        (scores[i] == best_score && pool_indices[i] < best_index);
    if (better) {
      found = true;
      best_score = scores[i];
      best_index = pool_indices[i];
    }
  }
  if (!found) throw NumericalError("argmax_selection: all scores are NaN");
  return best_index;
}

ALTrace run_uncertainty_sampling(GuardedPool &pool, const FeatureSet &test_inputs,
                                 const Eigen::VectorXd &test_targets,
                                 const ALConfig &cfg, const ModelSpec &spec) {
  const std::size_t pool_size = pool.size();
  if (cfg.n_init < 1 || static_cast<std::size_t>(cfg.n_init) > pool_size)
    throw ContractViolation("run_uncertainty_sampling: n_init out of range");
  if (cfg.n_iter < 0)
    throw ContractViolation("run_uncertainty_sampling: n_iter must be >= 0");
  if (sample_count(test_inputs) == 0 ||
      static_cast<Eigen::Index>(sample_count(test_inputs)) != test_targets.size())
    throw ContractViolation("run_uncertainty_sampling: invalid test set");

  // Seeded initial draw; the labeled set is kept sorted for deterministic
  // feature assembly, the unlabeled remainder in increasing pool order.
  Rng init_rng = Rng::derive(cfg.seed, kPurposeInitialDraw);
  std::vector<std::size_t> labeled =
      init_rng.sample_without_replacement(pool_size, static_cast<std::size_t>(cfg.n_init));
  std::sort(labeled.begin(), labeled.end());
  std::vector<bool> is_labeled(pool_size, false);
  for (std::size_t i : labeled) is_labeled[i] = true;
  std::vector<std::size_t> unlabeled;
  unlabeled.reserve(pool_size - labeled.size());
  for (std::size_t i = 0; i < pool_size; ++i)
    if (!is_labeled[i]) unlabeled.push_back(i);

  Eigen::VectorXd labels(static_cast<Eigen::Index>(labeled.size()));
  for (std::size_t i = 0; i < labeled.size(); ++i)
    labels[static_cast<Eigen::Index>(i)] = pool.acquire_label(labeled[i]);

  auto build_estimator = [&](int iteration) -> UncertaintyEstimator {
    const FeatureSet train_x = take(pool.inputs(), labeled);
    const std::uint64_t ens_seed =
        splitmix64(cfg.seed) ^
        splitmix64(kPurposeEnsembleBase + static_cast<std::uint64_t>(iteration));
    switch (cfg.strategy) {
      case ALStrategy::two_set:
        return make_two_set(train_x, labels, spec.params, spec.noise_variance, ens_seed);
      case ALStrategy::bootstrap:
        return make_bootstrap(train_x, labels, spec.params, spec.noise_variance,
                              cfg.bootstrap_members, ens_seed);
      default:
        return fit(train_x, labels, spec.params, spec.noise_variance);
    }
  };

  UncertaintyEstimator estimator = build_estimator(0);
  Rng random_rng = Rng::derive(cfg.seed, kPurposeRandomStrategy);

  ALTrace trace;
  trace.initial_indices = labeled;
  trace.rows.reserve(static_cast<std::size_t>(cfg.n_iter) + 1);

  auto record = [&](int iteration, std::int64_t selected) {
    const Eigen::VectorXd pred = predict_mean(full_model(estimator), test_inputs);
    const Metrics m = evaluate_metrics(pred, test_targets);
    trace.rows.push_back({iteration, selected, m.mae, m.max_abs_error,
                          m.abs_error_variance});
  };
  record(0, -1);

  for (int t = 1; t <= cfg.n_iter; ++t) {
    if (unlabeled.empty()) {
      trace.truncated = true;
      break;
    }

    // Bookkeeping invariants: labeled and unlabeled partition the pool.
    if (labeled.size() + unlabeled.size() != pool_size)
      throw ContractViolation("run_uncertainty_sampling: pool partition violated");

    std::size_t chosen;
    if (cfg.strategy == ALStrategy::random) {
      chosen = unlabeled[static_cast<std::size_t>(
          random_rng.uniform_index(unlabeled.size()))];
    } else if (cfg.strategy == ALStrategy::oracle_max_error) {
      const Eigen::VectorXd pred =
          predict_mean(full_model(estimator), take(pool.inputs(), unlabeled));
      std::vector<double> scores(unlabeled.size());
      for (std::size_t i = 0; i < unlabeled.size(); ++i)
        scores[i] = std::abs(pool.oracle_label(unlabeled[i]) -
                             pred[static_cast<Eigen::Index>(i)]);
      chosen = argmax_selection(scores, unlabeled);
    } else {
      const PredictionBatch pred =
          predict(estimator, take(pool.inputs(), unlabeled));
      std::vector<double> scores(unlabeled.size());
      for (std::size_t i = 0; i < unlabeled.size(); ++i)
        scores[i] = pred.std[static_cast<Eigen::Index>(i)];
      chosen = argmax_selection(scores, unlabeled);
    }

    if (pool.revealed(chosen))
      throw ContractViolation("run_uncertainty_sampling: sample selected twice");
    const double label = pool.acquire_label(chosen);

    const auto insert_at = std::lower_bound(labeled.begin(), labeled.end(), chosen);
    const auto insert_pos = static_cast<Eigen::Index>(insert_at - labeled.begin());
    labeled.insert(insert_at, chosen);
    Eigen::VectorXd grown(labels.size() + 1);
    grown.head(insert_pos) = labels.head(insert_pos);
    grown[insert_pos] = label;
    grown.tail(labels.size() - insert_pos) = labels.tail(labels.size() - insert_pos);
    labels = std::move(grown);
    unlabeled.erase(std::find(unlabeled.begin(), unlabeled.end(), chosen));

    const bool plain_model = std::holds_alternative<GprModel>(estimator);
    if (plain_model && cfg.use_rank1_update) {
      // Incremental growth must match a full refit; targets are re-centered
      // inside append_sample, only the factor is reused.
      try {
        estimator = append_sample(std::get<GprModel>(estimator),
                                  take(pool.inputs(), {chosen}), label);
      } catch (const NumericalError &) {
        estimator = build_estimator(t);
      }
    } else if (plain_model || cfg.refit_ensembles) {
      estimator = build_estimator(t);
    } else {
      // Keep the original ensemble draw: refit on the grown set with the
      // iteration-0 seed.
      const FeatureSet train_x = take(pool.inputs(), labeled);
      estimator = refit(estimator, train_x, labels,
                        splitmix64(cfg.seed) ^ splitmix64(kPurposeEnsembleBase));
    }

    record(t, static_cast<std::int64_t>(chosen));
  }
  return trace;
}

}  // namespace mlipuq
