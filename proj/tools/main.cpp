// Command-line workbench: featurize molecular datasets, tune kernel
// hyperparameters, evaluate calibration of uncertainty estimates, run
// pool-based active learning, and self-check the calibration pipeline on a
// synthetic fixture.  Exit codes: 0 success, 1 verdict/runtime failure,
// 2 usage or configuration error.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "mlipuq/active_learning.hpp"
#include "mlipuq/calib.hpp"
#include "mlipuq/dataio.hpp"
#include "mlipuq/errors.hpp"
#include "mlipuq/features.hpp"
#include "mlipuq/io_csv.hpp"
#include "mlipuq/rng.hpp"
#include "mlipuq/selfcheck.hpp"
#include "mlipuq/tune.hpp"
#include "mlipuq/uq.hpp"
#include "mlipuq/version.hpp"

namespace {

using namespace mlipuq;

using KV = std::vector<std::pair<std::string, std::string>>;

// ---------------------------------------------------------------------------
// Shared option bundles

struct DataOptions {
  std::string dataset;
  std::string unit = "ev";
  std::string repr = "coulomb";
  double soap_r_cut = 5.0;
  int soap_n_max = 3;
  int soap_l_max = 1;
  double soap_sigma = 1.0;
};

struct SplitOptions {
  std::size_t n_train = 1000;
  std::size_t n_test = 2000;
  std::uint64_t seed = 0;
};

struct HyperOptions {
  std::string file;
  std::vector<double> lengthscales;
  double output_scale = std::numeric_limits<double>::quiet_NaN();
  double noise = std::numeric_limits<double>::quiet_NaN();
};

void add_data_options(CLI::App *cmd, DataOptions &o, bool dataset_required) {
  auto *ds = cmd->add_option("--dataset", o.dataset,
                             "XYZ trajectory file (atom count, energy comment, atoms)");
  ds->check(CLI::ExistingFile);
  if (dataset_required) ds->required();
  cmd->add_option("--unit", o.unit, "energy unit of the file: ev, kcal/mol, hartree")
      ->capture_default_str();
  cmd->add_option("--repr", o.repr, "representation: coulomb or soap")
      ->check(CLI::IsMember({"coulomb", "soap"}))
      ->capture_default_str();
  cmd->add_option("--soap-r-cut", o.soap_r_cut, "SOAP cutoff radius in Angstrom")
      ->capture_default_str();
  cmd->add_option("--soap-n-max", o.soap_n_max, "SOAP radial basis size")
      ->capture_default_str();
  cmd->add_option("--soap-l-max", o.soap_l_max, "SOAP spherical-harmonic degree")
      ->capture_default_str();
  cmd->add_option("--soap-sigma", o.soap_sigma, "SOAP Gaussian smearing in Angstrom")
      ->capture_default_str();
}

void add_split_options(CLI::App *cmd, SplitOptions &o) {
  cmd->add_option("--n-train", o.n_train, "training split size")->capture_default_str();
  cmd->add_option("--n-test", o.n_test, "test split size")->capture_default_str();
  cmd->add_option("--seed", o.seed, "seed for splits and ensembles")
      ->capture_default_str();
}

void add_hyper_options(CLI::App *cmd, HyperOptions &o) {
  cmd->add_option("--hyperparams", o.file,
                  "key-value hyperparameter file produced by `tune`")
      ->check(CLI::ExistingFile);
  cmd->add_option("--lengthscale", o.lengthscales,
                  "kernel length-scale(s): one shared value or one per dimension");
  cmd->add_option("--output-scale", o.output_scale, "kernel output scale (variance)");
  cmd->add_option("--noise", o.noise, "observation noise variance");
}

FeatureSet featurize_dataset(const Dataset &ds, const DataOptions &o) {
  if (o.repr == "coulomb") return coulomb_features(ds);
  SoapConfig cfg;
  cfg.r_cut = o.soap_r_cut;
  cfg.n_max = o.soap_n_max;
  cfg.l_max = o.soap_l_max;
  cfg.sigma_atom = o.soap_sigma;
  cfg.species = collect_species(ds);
  return soap_features(ds, cfg);
}

ModelSpec resolve_hyperparameters(const HyperOptions &o, Eigen::Index dim) {
  ModelSpec spec;
  if (!o.file.empty()) {
    const auto kv = read_key_value(o.file);
    auto need = [&](const std::string &key) {
      const auto it = kv.find(key);
      if (it == kv.end())
        throw ConfigError("hyperparameter file " + o.file + " lacks key '" + key + "'");
      return std::stod(it->second);
    };
    spec.params.output_scale = need("output_scale");
    spec.noise_variance = need("noise_variance");
    if (kv.count("lengthscale")) {
      spec.params.lengthscales =
          Eigen::VectorXd::Constant(dim, need("lengthscale"));
    } else {
      const auto n = static_cast<Eigen::Index>(need("lengthscale_count"));
      if (n != dim)
        throw ConfigError("hyperparameter file was tuned for dimension " +
                          std::to_string(n) + ", data has " + std::to_string(dim));
      spec.params.lengthscales.resize(dim);
      for (Eigen::Index d = 0; d < dim; ++d)
        spec.params.lengthscales[d] = need("lengthscale_" + std::to_string(d));
    }
  } else {
    if (o.lengthscales.empty() || std::isnan(o.output_scale) || std::isnan(o.noise))
      throw ConfigError(
          "hyperparameters required: pass --hyperparams FILE or all of "
          "--lengthscale, --output-scale, --noise");
    spec.params.output_scale = o.output_scale;
    spec.noise_variance = o.noise;
    if (o.lengthscales.size() == 1) {
      spec.params.lengthscales =
          Eigen::VectorXd::Constant(dim, o.lengthscales.front());
    } else if (static_cast<Eigen::Index>(o.lengthscales.size()) == dim) {
      spec.params.lengthscales =
          Eigen::Map<const Eigen::VectorXd>(o.lengthscales.data(), dim);
    } else {
      throw ConfigError("--lengthscale needs 1 or " + std::to_string(dim) +
                        " values, got " + std::to_string(o.lengthscales.size()));
    }
  }
  spec.params.validate(dim);
  if (!(spec.noise_variance >= 0.0))
    throw ConfigError("noise variance must be >= 0");
  return spec;
}

Eigen::VectorXd take_vector(const Eigen::VectorXd &v,
                            const std::vector<std::size_t> &idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = v[static_cast<Eigen::Index>(idx[i])];
  return out;
}

std::string out_path(const std::string &dir, const std::string &file) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / file).string();
}

void append_common_manifest(KV &kv, const std::string &command) {
  kv.emplace_back("version", kVersion);
  kv.emplace_back("command", command);
}

void append_data_manifest(KV &kv, const DataOptions &o) {
  kv.emplace_back("dataset", o.dataset);
  kv.emplace_back("unit", o.unit);
  kv.emplace_back("repr", o.repr);
  if (o.repr == "soap") {
    kv.emplace_back("soap_r_cut", format_double(o.soap_r_cut));
    kv.emplace_back("soap_n_max", std::to_string(o.soap_n_max));
    kv.emplace_back("soap_l_max", std::to_string(o.soap_l_max));
    kv.emplace_back("soap_sigma", format_double(o.soap_sigma));
  }
}

double preset_bin_width(const std::string &molecule) {
  // Reliability-diagram bin widths (eV) for the supported benchmark systems.
  if (molecule == "benzene") return 0.001;
  if (molecule == "aspirin") return 0.015;
  if (molecule == "sma") return 0.020;
  if (molecule == "o-hbdi") return 0.100;
  if (molecule == "porphyrin") return 0.002;
  throw ConfigError("unknown molecule preset: '" + molecule +
                    "' (benzene, aspirin, sma, o-hbdi, porphyrin)");
}

// ---------------------------------------------------------------------------
// tune

struct TuneArgs {
  DataOptions data;
  SplitOptions split_opts;
  std::string out_dir;
  int adam_steps = 200;
  double adam_lr = 0.1;
  bool single_init = false;
  double init_lengthscale = 2.0;
  double init_output_scale = 1.0;
  double init_noise = 1e-6;
};

int cmd_tune(const TuneArgs &a) {
  const Dataset ds = parse_xyz_trajectory(a.data.dataset, parse_energy_unit(a.data.unit));
  const SplitIndices idx =
      split(ds.size(), {a.split_opts.n_train, a.split_opts.n_test, a.split_opts.seed});
  const FeatureSet all_x = featurize_dataset(ds, a.data);
  const FeatureSet train_x = take(all_x, idx.train);
  const Eigen::VectorXd train_y = take_vector(energies(ds), idx.train);
  const Eigen::Index dim = feature_dim(train_x);

  AdamConfig adam;
  adam.steps = a.adam_steps;
  adam.learning_rate = a.adam_lr;

  std::vector<HyperInit> grid;
  if (a.single_init)
    grid.push_back({a.init_output_scale, a.init_lengthscale, a.init_noise});
  else
    grid = default_init_grid();

  const InitSelection sel =
      select_initial_guess(train_x, train_y, grid, a.split_opts.seed, adam);
  const KernelParams init =
      KernelParams::isotropic(sel.best.output_scale, sel.best.lengthscale, dim);
  const TuneResult tuned =
      optimize_hyperparameters(train_x, train_y, init, sel.best.noise_variance, adam);
  if (tuned.aborted)
    std::cerr << "warning: optimization aborted (" << tuned.diagnostic
              << "); best parameters seen so far were kept\n";

  KV kv;
  kv.emplace_back("representation", a.data.repr);
  kv.emplace_back("output_scale", format_double(tuned.params.output_scale));
  kv.emplace_back("noise_variance", format_double(tuned.noise_variance));
  kv.emplace_back("lengthscale_count", std::to_string(dim));
  for (Eigen::Index d = 0; d < dim; ++d)
    kv.emplace_back("lengthscale_" + std::to_string(d),
                    format_double(tuned.params.lengthscales[d]));
  kv.emplace_back("final_mll", format_double(tuned.final_mll));
  kv.emplace_back("init_lengthscale", format_double(sel.best.lengthscale));
  kv.emplace_back("init_output_scale", format_double(sel.best.output_scale));
  kv.emplace_back("init_noise_variance", format_double(sel.best.noise_variance));
  kv.emplace_back("cv_mean_loss", format_double(sel.mean_losses[sel.best_index]));
  write_key_value(out_path(a.out_dir, "hyperparams.txt"), kv);

  KV manifest;
  append_common_manifest(manifest, "tune");
  append_data_manifest(manifest, a.data);
  manifest.emplace_back("n_train", std::to_string(a.split_opts.n_train));
  manifest.emplace_back("n_test", std::to_string(a.split_opts.n_test));
  manifest.emplace_back("seed", std::to_string(a.split_opts.seed));
  manifest.emplace_back("adam_steps", std::to_string(a.adam_steps));
  manifest.emplace_back("adam_learning_rate", format_double(a.adam_lr));
  manifest.emplace_back("grid_combinations", std::to_string(grid.size()));
  write_key_value(out_path(a.out_dir, "manifest.txt"), manifest);

  std::cout << "wrote " << out_path(a.out_dir, "hyperparams.txt") << " (final mll "
            << tuned.final_mll << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateArgs {
  DataOptions data;
  SplitOptions split_opts;
  HyperOptions hyper;
  std::string estimator = "gpr_std";
  std::string out_dir;
  double bin_width = 0.0;
  std::string molecule;
  int min_count = 50;
  int n_alphas = 101;
  int bootstrap_members = 10;
  bool svg = false;
};

int cmd_calibrate(const CalibrateArgs &a) {
  const Dataset ds = parse_xyz_trajectory(a.data.dataset, parse_energy_unit(a.data.unit));
  const SplitIndices idx =
      split(ds.size(), {a.split_opts.n_train, a.split_opts.n_test, a.split_opts.seed});
  if (idx.pool.empty())
    throw ConfigError("calibrate: the split leaves no pool samples to evaluate");

  double delta_u = a.bin_width;
  if (!a.molecule.empty()) delta_u = preset_bin_width(a.molecule);
  if (!(delta_u > 0.0))
    throw ConfigError("calibrate: pass --bin-width > 0 or a --molecule preset");

  const FeatureSet all_x = featurize_dataset(ds, a.data);
  const Eigen::VectorXd all_y = energies(ds);
  const FeatureSet train_x = take(all_x, idx.train);
  const Eigen::VectorXd train_y = take_vector(all_y, idx.train);
  const ModelSpec spec = resolve_hyperparameters(a.hyper, feature_dim(train_x));

  const std::uint64_t ens_seed = splitmix64(a.split_opts.seed) ^ 0xca11b8a7eULL;
  UncertaintyEstimator est;
  if (a.estimator == "gpr_std")
    est = fit(train_x, train_y, spec.params, spec.noise_variance);
  else if (a.estimator == "two_set")
    est = make_two_set(train_x, train_y, spec.params, spec.noise_variance, ens_seed);
  else if (a.estimator == "bootstrap")
    est = make_bootstrap(train_x, train_y, spec.params, spec.noise_variance,
                         a.bootstrap_members, ens_seed);
  else
    throw ConfigError("unknown estimator: '" + a.estimator +
                      "' (gpr_std, two_set, bootstrap)");

  const FeatureSet pool_x = take(all_x, idx.pool);
  const Eigen::VectorXd pool_y = take_vector(all_y, idx.pool);
  const PredictionBatch pred = predict(est, pool_x);
  const auto records = make_records(pred, pool_y);
  const CalibrationCurve curve = calibration_curve(records, a.n_alphas);
  const auto bins = extended_reliability(records, delta_u, a.min_count);

  write_calibration_curve_csv(out_path(a.out_dir, "calibration_curve.csv"), curve);
  write_reliability_csv(out_path(a.out_dir, "reliability.csv"), bins);
  if (a.svg)
    write_svg_curve(out_path(a.out_dir, "calibration_curve.svg"),
                    curve.alpha_predicted, curve.alpha_observed, true);

  KV summary;
  summary.emplace_back("miscalibration_area", format_double(curve.miscalibration_area));
  summary.emplace_back("pool_size", std::to_string(idx.pool.size()));
  summary.emplace_back("bin_count", std::to_string(bins.size()));
  write_key_value(out_path(a.out_dir, "summary.txt"), summary);

  KV manifest;
  append_common_manifest(manifest, "calibrate");
  append_data_manifest(manifest, a.data);
  manifest.emplace_back("estimator", a.estimator);
  manifest.emplace_back("n_train", std::to_string(a.split_opts.n_train));
  manifest.emplace_back("n_test", std::to_string(a.split_opts.n_test));
  manifest.emplace_back("seed", std::to_string(a.split_opts.seed));
  manifest.emplace_back("bin_width", format_double(delta_u));
  manifest.emplace_back("min_count", std::to_string(a.min_count));
  manifest.emplace_back("n_alphas", std::to_string(a.n_alphas));
  manifest.emplace_back("bootstrap_members", std::to_string(a.bootstrap_members));
  manifest.emplace_back("output_scale", format_double(spec.params.output_scale));
  manifest.emplace_back("noise_variance", format_double(spec.noise_variance));
  write_key_value(out_path(a.out_dir, "manifest.txt"), manifest);

  std::cout << "miscalibration area " << curve.miscalibration_area << " over "
            << idx.pool.size() << " pool samples\n";
  return 0;
}

// ---------------------------------------------------------------------------
// al

struct AlArgs {
  DataOptions data;
  SplitOptions split_opts;
  HyperOptions hyper;
  std::vector<std::string> strategies{"gpr_std"};
  std::string out_dir;
  int n_init = 200;
  int n_iter = 50;
  int bootstrap_members = 10;
  bool rank1 = false;
  bool synthetic = false;
  std::size_t pool_size = 200;
  double noise_std = 0.1;
};

int cmd_al(const AlArgs &a) {
  FeatureSet pool_x, test_x;
  Eigen::VectorXd pool_y, test_y;
  ModelSpec spec;

  if (a.synthetic) {
    const SineData d =
        synth_sine(a.pool_size, a.split_opts.n_test, a.noise_std, a.split_opts.seed);
    pool_x = GlobalFeatures{d.train_inputs};
    pool_y = d.train_targets;
    test_x = GlobalFeatures{d.test_inputs};
    Rng test_rng = Rng::derive(a.split_opts.seed, 0x7e57);
    test_y.resize(d.test_inputs.rows());
    for (Eigen::Index i = 0; i < test_y.size(); ++i)
      test_y[i] = std::sin(d.test_inputs(i, 0)) + a.noise_std * test_rng.normal();
    if (!a.hyper.file.empty() || !a.hyper.lengthscales.empty()) {
      spec = resolve_hyperparameters(a.hyper, 1);
    } else {
      spec.params = KernelParams::isotropic(1.0, 1.0, 1);
      spec.noise_variance = std::max(a.noise_std * a.noise_std, 1e-8);
    }
  } else {
    if (a.data.dataset.empty())
      throw ConfigError("al: pass --dataset or --synthetic-sine");
    const Dataset ds =
        parse_xyz_trajectory(a.data.dataset, parse_energy_unit(a.data.unit));
    const SplitIndices idx = split(
        ds.size(), {a.split_opts.n_train, a.split_opts.n_test, a.split_opts.seed});
    // Candidates for selection are all labeled-on-demand samples outside the
    // test split: the training split plus the leftover pool.
    std::vector<std::size_t> candidates = idx.train;
    candidates.insert(candidates.end(), idx.pool.begin(), idx.pool.end());
    std::sort(candidates.begin(), candidates.end());
    const FeatureSet all_x = featurize_dataset(ds, a.data);
    const Eigen::VectorXd all_y = energies(ds);
    pool_x = take(all_x, candidates);
    pool_y = take_vector(all_y, candidates);
    test_x = take(all_x, idx.test);
    test_y = take_vector(all_y, idx.test);
    spec = resolve_hyperparameters(a.hyper, feature_dim(pool_x));
  }

  if (a.strategies.empty()) throw ConfigError("al: no strategy given");

  KV manifest;
  append_common_manifest(manifest, "al");
  if (!a.synthetic) append_data_manifest(manifest, a.data);
  manifest.emplace_back("synthetic_sine", a.synthetic ? "1" : "0");
  manifest.emplace_back("pool_size", std::to_string(sample_count(pool_x)));
  manifest.emplace_back("test_size", std::to_string(sample_count(test_x)));
  manifest.emplace_back("n_init", std::to_string(a.n_init));
  manifest.emplace_back("n_iter", std::to_string(a.n_iter));
  manifest.emplace_back("seed", std::to_string(a.split_opts.seed));
  manifest.emplace_back("bootstrap_members", std::to_string(a.bootstrap_members));
  manifest.emplace_back("rank1_update", a.rank1 ? "1" : "0");
  manifest.emplace_back("output_scale", format_double(spec.params.output_scale));
  manifest.emplace_back("noise_variance", format_double(spec.noise_variance));

  for (const auto &name : a.strategies) {
    ALConfig cfg;
    cfg.strategy = parse_strategy(name);
    cfg.n_init = a.n_init;
    cfg.n_iter = a.n_iter;
    cfg.seed = a.split_opts.seed;
    cfg.bootstrap_members = a.bootstrap_members;
    cfg.use_rank1_update = a.rank1;

    GuardedPool pool(pool_x, pool_y);
    const ALTrace trace = run_uncertainty_sampling(pool, test_x, test_y, cfg, spec);
    const std::string file = "trace_" + name + ".csv";
    write_trace_csv(out_path(a.out_dir, file), trace);
    manifest.emplace_back("trace_" + name, file);
    std::cout << name << ": final mae " << trace.rows.back().mae << " after "
              << (trace.rows.size() - 1) << " iterations\n";
  }
  write_key_value(out_path(a.out_dir, "manifest.txt"), manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// synthcheck

struct SynthcheckArgs {
  SelfCheckConfig cfg;
  int n_seeds = 1;
  std::string out_dir;
};

int cmd_synthcheck(const SynthcheckArgs &a) {
  int passed = 0;
  for (int k = 0; k < a.n_seeds; ++k) {
    SelfCheckConfig cfg = a.cfg;
    cfg.seed = a.cfg.seed + static_cast<std::uint64_t>(k);
    const SelfCheckReport report = run_sine_self_check(cfg);

    std::cout << "seed " << cfg.seed << ": bin width " << report.bin_width << ", "
              << report.displayed_bins << " displayed bins, miscalibration area "
              << report.curve.miscalibration_area << "\n";
    std::cout << "  bin  center      count  error_mean    error_std\n";
    for (const auto &b : report.bins) {
      if (b.suppressed) continue;
      std::cout << "  " << b.index << "  " << b.center << "  " << b.count << "  "
                << b.error_mean << "  " << b.error_std << "\n";
    }
    for (const auto &f : report.failures) std::cout << "  FAIL: " << f << "\n";
    std::cout << "  verdict: " << (report.pass ? "PASS" : "FAIL") << "\n";
    if (report.pass) ++passed;

    if (!a.out_dir.empty()) {
      const std::string tag = "seed" + std::to_string(cfg.seed) + "_";
      write_calibration_curve_csv(out_path(a.out_dir, tag + "calibration_curve.csv"),
                                  report.curve);
      write_reliability_csv(out_path(a.out_dir, tag + "reliability.csv"), report.bins);
    }
  }

  if (!a.out_dir.empty()) {
    KV manifest;
    append_common_manifest(manifest, "synthcheck");
    manifest.emplace_back("n_train", std::to_string(a.cfg.n_train));
    manifest.emplace_back("n_test", std::to_string(a.cfg.n_test));
    manifest.emplace_back("noise_std", format_double(a.cfg.noise_std));
    manifest.emplace_back("seed", std::to_string(a.cfg.seed));
    manifest.emplace_back("n_seeds", std::to_string(a.n_seeds));
    manifest.emplace_back("min_count", std::to_string(a.cfg.min_count));
    manifest.emplace_back("bin_width",
                          a.cfg.bin_width > 0 ? format_double(a.cfg.bin_width) : "auto");
    manifest.emplace_back("passed_seeds", std::to_string(passed));
    write_key_value(out_path(a.out_dir, "manifest.txt"), manifest);
  }

  // Robustness verdict: at least 90% of the requested seeds must self-pass.
  const bool ok = 10 * passed >= 9 * a.n_seeds;
  std::cout << passed << "/" << a.n_seeds << " seeds passed -> "
            << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// featurize

struct FeaturizeArgs {
  DataOptions data;
  std::string out_dir;
};

int cmd_featurize(const FeaturizeArgs &a) {
  const Dataset ds = parse_xyz_trajectory(a.data.dataset, parse_energy_unit(a.data.unit));
  const FeatureSet fs = featurize_dataset(ds, a.data);

  std::ofstream out(out_path(a.out_dir, "features.csv"));
  if (!out) throw Error("cannot open features.csv for writing");
  if (const auto *g = std::get_if<GlobalFeatures>(&fs)) {
    out << "structure_index";
    for (Eigen::Index d = 0; d < g->values.cols(); ++d) out << ",f" << d;
    out << "\n";
    for (Eigen::Index i = 0; i < g->values.rows(); ++i) {
      out << i;
      for (Eigen::Index d = 0; d < g->values.cols(); ++d)
        out << "," << format_double(g->values(i, d));
      out << "\n";
    }
  } else {
    const auto &at = std::get<AtomisticFeatures>(fs);
    out << "structure_index,atom_index";
    for (Eigen::Index d = 0; d < at.environments.front().cols(); ++d) out << ",f" << d;
    out << "\n";
    for (std::size_t i = 0; i < at.environments.size(); ++i)
      for (Eigen::Index atom = 0; atom < at.environments[i].rows(); ++atom) {
        out << i << "," << atom;
        for (Eigen::Index d = 0; d < at.environments[i].cols(); ++d)
          out << "," << format_double(at.environments[i](atom, d));
        out << "\n";
      }
  }

  KV manifest;
  append_common_manifest(manifest, "featurize");
  append_data_manifest(manifest, a.data);
  manifest.emplace_back("n_structures", std::to_string(ds.size()));
  write_key_value(out_path(a.out_dir, "manifest.txt"), manifest);
  std::cout << "wrote " << out_path(a.out_dir, "features.csv") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Gaussian-process energy models with calibrated uncertainties: "
               "tune, calibrate, active-learn, self-check"};
  app.require_subcommand(1);

  TuneArgs tune_args;
  auto *tune_cmd = app.add_subcommand("tune",
                                      "select an initial guess by cross validation and "
                                      "maximize the marginal likelihood");
  tune_cmd->set_config("--config", "", "flat key=value configuration file");
  add_data_options(tune_cmd, tune_args.data, true);
  add_split_options(tune_cmd, tune_args.split_opts);
  tune_cmd->add_option("--out", tune_args.out_dir, "output directory")->required();
  tune_cmd->add_option("--adam-steps", tune_args.adam_steps, "optimizer steps")
      ->capture_default_str();
  tune_cmd->add_option("--adam-lr", tune_args.adam_lr, "optimizer learning rate")
      ->capture_default_str();
  tune_cmd->add_flag("--single-init", tune_args.single_init,
                     "skip the grid; use the --init-* values");
  tune_cmd->add_option("--init-lengthscale", tune_args.init_lengthscale,
                       "initial length-scale for --single-init")
      ->capture_default_str();
  tune_cmd->add_option("--init-output-scale", tune_args.init_output_scale,
                       "initial output scale for --single-init")
      ->capture_default_str();
  tune_cmd->add_option("--init-noise", tune_args.init_noise,
                       "initial noise variance for --single-init")
      ->capture_default_str();

  CalibrateArgs cal_args;
  auto *cal_cmd = app.add_subcommand("calibrate",
                                     "train on the training split and evaluate "
                                     "uncertainty calibration on the pool");
  cal_cmd->set_config("--config", "", "flat key=value configuration file");
  add_data_options(cal_cmd, cal_args.data, true);
  add_split_options(cal_cmd, cal_args.split_opts);
  add_hyper_options(cal_cmd, cal_args.hyper);
  cal_cmd->add_option("--estimator", cal_args.estimator,
                      "uncertainty estimator: gpr_std, two_set, bootstrap")
      ->capture_default_str();
  cal_cmd->add_option("--out", cal_args.out_dir, "output directory")->required();
  auto *bin_opt = cal_cmd->add_option("--bin-width", cal_args.bin_width,
                                      "reliability bin width in eV");
  cal_cmd
      ->add_option("--molecule", cal_args.molecule,
                   "bin-width preset: benzene, aspirin, sma, o-hbdi, porphyrin")
      ->excludes(bin_opt);
  cal_cmd->add_option("--min-count", cal_args.min_count,
                      "bins with at most this many samples are marked suppressed")
      ->capture_default_str();
  cal_cmd->add_option("--n-alphas", cal_args.n_alphas, "calibration-curve grid size")
      ->capture_default_str();
  cal_cmd->add_option("--bootstrap-members", cal_args.bootstrap_members,
                      "ensemble size for the bootstrap estimator")
      ->capture_default_str();
  cal_cmd->add_flag("--svg", cal_args.svg, "also write a decorative SVG plot");

  AlArgs al_args;
  auto *al_cmd = app.add_subcommand("al", "pool-based active learning");
  al_cmd->set_config("--config", "", "flat key=value configuration file");
  add_data_options(al_cmd, al_args.data, false);
  add_split_options(al_cmd, al_args.split_opts);
  add_hyper_options(al_cmd, al_args.hyper);
  al_cmd->add_option("--strategy", al_args.strategies,
                     "selection strategy, repeatable: gpr_std, two_set, bootstrap, "
                     "random, oracle_max_error")
      ->capture_default_str();
  al_cmd->add_option("--out", al_args.out_dir, "output directory")->required();
  al_cmd->add_option("--n-init", al_args.n_init, "initial labeled samples")
      ->capture_default_str();
  al_cmd->add_option("--n-iter", al_args.n_iter, "selection iterations")
      ->capture_default_str();
  al_cmd->add_option("--bootstrap-members", al_args.bootstrap_members,
                     "ensemble size for the bootstrap strategy")
      ->capture_default_str();
  al_cmd->add_flag("--rank1", al_args.rank1,
                   "grow the Cholesky factor incrementally for plain models");
  al_cmd->add_flag("--synthetic-sine", al_args.synthetic,
                   "use the built-in 1-D sine benchmark instead of a dataset");
  al_cmd->add_option("--pool-size", al_args.pool_size,
                     "pool size for --synthetic-sine")
      ->capture_default_str();
  al_cmd->add_option("--noise-std", al_args.noise_std,
                     "label noise for --synthetic-sine")
      ->capture_default_str();

  SynthcheckArgs sc_args;
  auto *sc_cmd = app.add_subcommand("synthcheck",
                                    "self-calibration check on synthetic targets "
                                    "drawn from the model's own predictions");
  sc_cmd->set_config("--config", "", "flat key=value configuration file");
  sc_cmd->add_option("--n-train", sc_args.cfg.n_train, "sine training points")
      ->capture_default_str();
  sc_cmd->add_option("--n-test", sc_args.cfg.n_test, "synthetic test targets")
      ->capture_default_str();
  sc_cmd->add_option("--noise-std", sc_args.cfg.noise_std, "sine label noise")
      ->capture_default_str();
  sc_cmd->add_option("--seed", sc_args.cfg.seed, "first seed")->capture_default_str();
  sc_cmd->add_option("--seeds", sc_args.n_seeds, "number of consecutive seeds to run")
      ->capture_default_str();
  sc_cmd->add_option("--bin-width", sc_args.cfg.bin_width,
                     "reliability bin width (default: automatic)");
  sc_cmd->add_option("--min-count", sc_args.cfg.min_count,
                     "display threshold for reliability bins")
      ->capture_default_str();
  sc_cmd->add_flag("--tune", sc_args.cfg.tune,
                   "optimize hyperparameters instead of the fixed defaults");
  sc_cmd->add_option("--out", sc_args.out_dir, "optional output directory for CSVs");

  FeaturizeArgs feat_args;
  auto *feat_cmd = app.add_subcommand("featurize", "dump feature vectors to CSV");
  feat_cmd->set_config("--config", "", "flat key=value configuration file");
  add_data_options(feat_cmd, feat_args.data, true);
  feat_cmd->add_option("--out", feat_args.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (tune_cmd->parsed()) return cmd_tune(tune_args);
    if (cal_cmd->parsed()) return cmd_calibrate(cal_args);
    if (al_cmd->parsed()) return cmd_al(al_args);
    if (sc_cmd->parsed()) return cmd_synthcheck(sc_args);
    if (feat_cmd->parsed()) return cmd_featurize(feat_args);
  } catch (const ConfigError &e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError &e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
