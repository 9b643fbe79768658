#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mlipuq/gp.hpp"
#include "mlipuq/structure.hpp"

namespace mlipuq {

enum class EnergyUnit { eV, kcal_per_mol, hartree };

/// Accepts "ev", "kcal/mol" (or "kcal"), "hartree"; case-insensitive.
EnergyUnit parse_energy_unit(const std::string &name);
std::string energy_unit_name(EnergyUnit u);

/// Multiplier converting the given unit to eV.
double ev_per_unit(EnergyUnit u);

/// Parses a multi-frame XYZ trajectory: per frame, an atom-count line, a
/// comment line carrying the energy (an `energy=<value>` key or a bare
/// number), then `symbol x y z` atom lines (extra trailing tokens are
/// ignored).  Coordinates are Angstrom; energies are converted to eV from
/// `unit`.  All frames must share the atom count and atom ordering.
/// Malformed input throws ParseError naming the frame and line.
Dataset parse_xyz_trajectory(const std::string &path, EnergyUnit unit = EnergyUnit::eV);

/// Inverse of parse_xyz_trajectory (energies written in eV); full precision.
void write_xyz_trajectory(const std::string &path, const Dataset &ds);

struct SplitSpec {
  std::size_t n_train = 1000;
  std::size_t n_test = 2000;
  std::uint64_t seed = 0;
};

/// Disjoint, seed-deterministic index sets covering [0, dataset_size);
/// each set is returned sorted.  Whatever train and test do not claim
/// becomes the candidate pool.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::size_t> pool;
};
SplitIndices split(std::size_t dataset_size, const SplitSpec &spec);

/// Noisy samples of sin(x) with inputs drawn uniformly from [0, 2*pi];
/// the test inputs come from an independent substream so their count does
/// not perturb the training data.
struct SineData {
  Eigen::MatrixXd train_inputs;  // n_train x 1
  Eigen::VectorXd train_targets;
  Eigen::MatrixXd test_inputs;   // n_test x 1
};
SineData synth_sine(std::size_t n_train, std::size_t n_test, double noise_std,
                    std::uint64_t seed);

/// One target per input, drawn from the model's predictive distribution:
/// N(mean, std^2 + noise_variance) when include_observation_noise is set
/// (the default, emulating noisy measurements), N(mean, std^2) otherwise.
Eigen::VectorXd draw_synthetic_targets(const GprModel &model, const FeatureSet &inputs,
                                       std::uint64_t seed,
                                       bool include_observation_noise = true);

}  // namespace mlipuq
