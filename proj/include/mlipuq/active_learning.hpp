#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mlipuq/uq.hpp"

namespace mlipuq {

enum class ALStrategy { gpr_std, two_set, bootstrap, random, oracle_max_error };

ALStrategy parse_strategy(const std::string &name);
std::string strategy_name(ALStrategy s);

struct ALConfig {
  int n_init = 200;
  int n_iter = 0;
  ALStrategy strategy = ALStrategy::gpr_std;
  std::uint64_t seed = 0;
  bool refit_ensembles = true;     // redraw ensemble splits/resamples per iteration
  int bootstrap_members = 10;
  bool use_rank1_update = false;   // incremental Cholesky growth for plain models
};

/// Fixed hyperparameters used throughout one active-learning run.
struct ModelSpec {
  KernelParams params;
  double noise_variance = 0.0;
};

struct ALIterationRow {
  int iteration = 0;
  std::int64_t selected_index = -1;  // pool index; -1 for the initial model row
  double mae = 0.0;
  double max_abs_error = 0.0;
  double abs_error_variance = 0.0;
};

struct ALTrace {
  std::vector<ALIterationRow> rows;  // n_iter + 1 rows unless truncated
  bool truncated = false;            // pool exhausted before n_iter selections
  std::vector<std::size_t> initial_indices;
};

/// Candidate pool whose labels stay hidden until a sample is selected.
/// acquire_label reveals a label permanently; oracle_label reads one without
/// revealing it and counts every such access, so tests can assert that
/// non-oracle strategies never peek.
class GuardedPool {
 public:
  GuardedPool(FeatureSet inputs, Eigen::VectorXd labels);

  std::size_t size() const { return revealed_.size(); }
  const FeatureSet &inputs() const { return inputs_; }

  double acquire_label(std::size_t i);
  double oracle_label(std::size_t i) const;
  bool revealed(std::size_t i) const;
  std::size_t revealed_count() const;
  std::size_t oracle_access_count() const { return oracle_accesses_; }

 private:
  FeatureSet inputs_;
  Eigen::VectorXd labels_;
  std::vector<bool> revealed_;
  mutable std::size_t oracle_accesses_ = 0;
};

struct Metrics {
  double mae = 0.0;
  double max_abs_error = 0.0;
  double abs_error_variance = 0.0;  // n-1 denominator; 0 for a single sample
};
Metrics evaluate_metrics(const Eigen::VectorXd &predictions,
                         const Eigen::VectorXd &truths);

/// Pool index holding the maximum score.  Ties resolve to the lowest pool
/// index; NaN scores are skipped; all-NaN throws NumericalError.
std::size_t argmax_selection(const std::vector<double> &scores,
                             const std::vector<std::size_t> &pool_indices);

/// Pool-based uncertainty sampling: draws a seeded initial training set from
/// the pool, then repeatedly labels the candidate scored highest by the
/// configured strategy, refits with fixed hyperparameters, and records test
/// metrics.  Row 0 holds the initial model's metrics with selected_index -1.
ALTrace run_uncertainty_sampling(GuardedPool &pool, const FeatureSet &test_inputs,
                                 const Eigen::VectorXd &test_targets,
                                 const ALConfig &cfg, const ModelSpec &spec);

}  // namespace mlipuq
