#include "mlipuq/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mlipuq/errors.hpp"
#include "mlipuq/rng.hpp"

namespace mlipuq {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string &token, double &out) {
  try {
    std::size_t used = 0;
    out = std::stod(token, &used);
    return used == token.size();
  } catch (...) {
    return false;
  }
}

// Extracts the frame energy from a comment line: an energy=<value> key
// (case-insensitive, optionally quoted) or the whole line as a bare number.
bool extract_energy(const std::string &comment, double &out) {
  const std::string low = lower(comment);
  std::size_t pos = 0;
  while ((pos = low.find("energy", pos)) != std::string::npos) {
    // Reject keys like "free_energy" by requiring a non-word char before.
    if (pos > 0 && (std::isalnum(static_cast<unsigned char>(low[pos - 1])) ||
                    low[pos - 1] == '_')) {
      pos += 6;
      continue;
    }
    std::size_t eq = pos + 6;
    while (eq < low.size() && std::isspace(static_cast<unsigned char>(low[eq]))) ++eq;
    if (eq >= low.size() || low[eq] != '=') {
      pos += 6;
      continue;
    }
    ++eq;
    while (eq < low.size() && (std::isspace(static_cast<unsigned char>(low[eq])) ||
                               low[eq] == '"' || low[eq] == '\''))
      ++eq;
    std::size_t end = eq;
    while (end < low.size() &&
           !std::isspace(static_cast<unsigned char>(low[end])) &&
           low[end] != '"' && low[end] != '\'')
      ++end;
    if (parse_double(comment.substr(eq, end - eq), out)) return true;
    pos += 6;
  }
  return parse_double(trim(comment), out);
}

}  // namespace

EnergyUnit parse_energy_unit(const std::string &name) {
  const std::string n = lower(trim(name));
  if (n == "ev") return EnergyUnit::eV;
  if (n == "kcal/mol" || n == "kcal") return EnergyUnit::kcal_per_mol;
  if (n == "hartree") return EnergyUnit::hartree;
  throw ConfigError("unknown energy unit: '" + name +
                    "' (expected ev, kcal/mol, or hartree)");
}

std::string energy_unit_name(EnergyUnit u) {
  switch (u) {
    case EnergyUnit::eV: return "ev";
    case EnergyUnit::kcal_per_mol: return "kcal/mol";
    case EnergyUnit::hartree: return "hartree";
  }
  throw ContractViolation("energy_unit_name: invalid enum value");
}

double ev_per_unit(EnergyUnit u) {
  switch (u) {
    case EnergyUnit::eV: return 1.0;
    case EnergyUnit::kcal_per_mol: return 0.0433641;
    case EnergyUnit::hartree: return 27.211386;
  }
  throw ContractViolation("ev_per_unit: invalid enum value");
}

Dataset parse_xyz_trajectory(const std::string &path, EnergyUnit unit) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trajectory file: " + path);
  const double to_ev = ev_per_unit(unit);

  Dataset ds;
  ds.name = path;
  std::string line;
  std::size_t line_no = 0;
  std::size_t frame = 0;

  auto fail = [&](const std::string &msg) -> ParseError {
    return ParseError(path + ": frame " + std::to_string(frame + 1) + ", line " +
                      std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string count_line = trim(line);
    if (count_line.empty()) continue;  // tolerate blank lines between frames

    long n_atoms = 0;
    try {
      std::size_t used = 0;
      n_atoms = std::stol(count_line, &used);
      if (trim(count_line.substr(used)) != "") n_atoms = 0;
    } catch (...) {
      n_atoms = 0;
    }
    if (n_atoms < 1) throw fail("expected a positive atom count, got '" + count_line + "'");

    if (!std::getline(in, line)) throw fail("missing comment line");
    ++line_no;
    double energy = 0.0;
    if (!extract_energy(line, energy))
      throw fail("comment line carries no energy (need energy=<value> or a bare number)");

    Structure s;
    s.atomic_numbers.reserve(static_cast<std::size_t>(n_atoms));
    s.positions.resize(n_atoms, 3);
    for (long a = 0; a < n_atoms; ++a) {
      if (!std::getline(in, line))
        throw fail("frame declares " + std::to_string(n_atoms) + " atoms but ends after " +
                   std::to_string(a));
      ++line_no;
      std::istringstream ls(line);
      std::string symbol, xs, ys, zs;
      if (!(ls >> symbol >> xs >> ys >> zs))
        throw fail("expected 'symbol x y z', got '" + trim(line) + "'");
      double x, y, z;
      if (!parse_double(xs, x) || !parse_double(ys, y) || !parse_double(zs, z))
        throw fail("non-numeric coordinate in '" + trim(line) + "'");
      try {
        s.atomic_numbers.push_back(atomic_number_from_symbol(symbol));
      } catch (const ParseError &e) {
        throw fail(e.what());
      }
      s.positions.row(a) << x, y, z;
    }
    s.energy = energy * to_ev;
    s.validate();

    if (!ds.structures.empty() &&
        s.atomic_numbers != ds.structures.front().atomic_numbers)
      throw fail("atom count or ordering differs from frame 1");
    ds.structures.push_back(std::move(s));
    ++frame;
  }
  if (ds.structures.empty()) throw ParseError(path + ": no frames found");
  return ds;
}

void write_xyz_trajectory(const std::string &path, const Dataset &ds) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path);
  out.precision(17);
  for (const auto &s : ds.structures) {
    s.validate();
    if (!s.energy)
      throw ContractViolation("write_xyz_trajectory: structure has no energy");
    out << s.n_atoms() << "\n";
    out << "energy=" << *s.energy << "\n";
    for (Eigen::Index a = 0; a < s.n_atoms(); ++a)
      out << element_symbol(s.atomic_numbers[static_cast<std::size_t>(a)]) << " "
          << s.positions(a, 0) << " " << s.positions(a, 1) << " "
          << s.positions(a, 2) << "\n";
  }
  if (!out) throw Error("failed writing trajectory: " + path);
}

SplitIndices split(std::size_t dataset_size, const SplitSpec &spec) {
  if (spec.n_train + spec.n_test > dataset_size)
    throw ConfigError("split: dataset holds " + std::to_string(dataset_size) +
                      " samples but the split needs " +
                      std::to_string(spec.n_train + spec.n_test));
  Rng rng(spec.seed);
  std::vector<std::size_t> drawn =
      rng.sample_without_replacement(dataset_size, spec.n_train + spec.n_test);
  SplitIndices out;
  out.train.assign(drawn.begin(), drawn.begin() + static_cast<std::ptrdiff_t>(spec.n_train));
  out.test.assign(drawn.begin() + static_cast<std::ptrdiff_t>(spec.n_train), drawn.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  std::vector<bool> used(dataset_size, false);
  for (std::size_t i : drawn) used[i] = true;
  for (std::size_t i = 0; i < dataset_size; ++i)
    if (!used[i]) out.pool.push_back(i);
  return out;
}

SineData synth_sine(std::size_t n_train, std::size_t n_test, double noise_std,
                    std::uint64_t seed) {
  if (n_train < 2) throw ContractViolation("synth_sine: n_train must be >= 2");
  if (noise_std < 0.0) throw ContractViolation("synth_sine: negative noise_std");

  Rng train_rng = Rng::derive(seed, 1);
  Rng noise_rng = Rng::derive(seed, 2);
  Rng test_rng = Rng::derive(seed, 3);

  SineData d;
  d.train_inputs.resize(static_cast<Eigen::Index>(n_train), 1);
  d.train_targets.resize(static_cast<Eigen::Index>(n_train));
  for (std::size_t i = 0; i < n_train; ++i) {
    const double x = train_rng.uniform(0.0, 2.0 * M_PI);
    d.train_inputs(static_cast<Eigen::Index>(i), 0) = x;
    d.train_targets[static_cast<Eigen::Index>(i)] =
        std::sin(x) + noise_std * noise_rng.normal();
  }
  d.test_inputs.resize(static_cast<Eigen::Index>(n_test), 1);
  for (std::size_t i = 0; i < n_test; ++i)
    d.test_inputs(static_cast<Eigen::Index>(i), 0) = test_rng.uniform(0.0, 2.0 * M_PI);
  return d;
}

Eigen::VectorXd draw_synthetic_targets(const GprModel &model, const FeatureSet &inputs,
                                       std::uint64_t seed,
                                       bool include_observation_noise) {
  const Eigen::VectorXd mean = predict_mean(model, inputs);
  const Eigen::VectorXd std_dev = predict_std(model, inputs);
  Rng rng(seed);
  Eigen::VectorXd out(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const double var = std_dev[i] * std_dev[i] +
                       (include_observation_noise ? model.noise_variance : 0.0);
    out[i] = mean[i] + std::sqrt(var) * rng.normal();
  }
  return out;
}

}  // namespace mlipuq
