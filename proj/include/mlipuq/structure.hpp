#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace mlipuq {

/// One molecular configuration: nuclear charges, Cartesian positions in
/// Angstrom, and an optional scalar energy label in eV.
struct Structure {
  std::vector<int> atomic_numbers;
  Eigen::Matrix<double, Eigen::Dynamic, 3> positions;
  std::optional<double> energy;

  Eigen::Index n_atoms() const { return positions.rows(); }

  /// Throws ContractViolation unless sizes agree, Z >= 1 everywhere, and all
  /// coordinates are finite.
  void validate() const;
};

/// An ordered collection of structures sharing one chemical identity.
/// Energies are always stored in eV; unit conversion happens at ingestion.
struct Dataset {
  std::vector<Structure> structures;
  std::string name;

  std::size_t size() const { return structures.size(); }
};

/// Throws ContractViolation unless every structure has the same atom count
/// and the same atomic-number sequence (fixed atom ordering), as required by
/// the unsorted Coulomb representation.
void validate_consistent(const Dataset &ds);

/// Sorted list of distinct atomic numbers appearing in the dataset.
std::vector<int> collect_species(const Dataset &ds);

/// Chemical symbol for Z in [1, 118]; throws ContractViolation otherwise.
const char *element_symbol(int atomic_number);

/// Atomic number for a chemical symbol ("H", "He", ...); also accepts a bare
/// integer token.  Throws ParseError for unknown symbols.
int atomic_number_from_symbol(const std::string &symbol);

}  // namespace mlipuq
