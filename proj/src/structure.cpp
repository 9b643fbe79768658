#include "mlipuq/structure.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "mlipuq/errors.hpp"

namespace mlipuq {

namespace {

constexpr int kMaxZ = 118;

const char *const kSymbols[kMaxZ + 1] = {
    "",   "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
    "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
    "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
    "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
    "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
    "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
    "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
    "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
    "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

}  // namespace

void Structure::validate() const {
  if (positions.rows() < 1)
    throw ContractViolation("Structure: must contain at least one atom");
  if (static_cast<Eigen::Index>(atomic_numbers.size()) != positions.rows())
    throw ContractViolation(
        "Structure: atomic_numbers length must match position row count");
  for (int z : atomic_numbers)
    if (z < 1) throw ContractViolation("Structure: atomic numbers must be >= 1");
  if (!positions.allFinite())
    throw ContractViolation("Structure: positions must be finite");
  if (energy && !std::isfinite(*energy))
    throw ContractViolation("Structure: energy must be finite when present");
}

void validate_consistent(const Dataset &ds) {
  if (ds.structures.empty()) return;
  const auto &ref = ds.structures.front().atomic_numbers;
  for (std::size_t i = 0; i < ds.structures.size(); ++i) {
    ds.structures[i].validate();
    if (ds.structures[i].atomic_numbers != ref)
      throw ContractViolation(
          "Dataset: structure " + std::to_string(i) +
          " differs in atom count or atom ordering from the first structure");
  }
}

std::vector<int> collect_species(const Dataset &ds) {
  std::set<int> zs;
  for (const auto &s : ds.structures)
    zs.insert(s.atomic_numbers.begin(), s.atomic_numbers.end());
  return std::vector<int>(zs.begin(), zs.end());
}

const char *element_symbol(int atomic_number) {
  if (atomic_number < 1 || atomic_number > kMaxZ)
    throw ContractViolation("element_symbol: atomic number out of range: " +
                            std::to_string(atomic_number));
  return kSymbols[atomic_number];
}

int atomic_number_from_symbol(const std::string &symbol) {
  for (int z = 1; z <= kMaxZ; ++z)
    if (symbol == kSymbols[z]) return z;
  // Tolerate a bare atomic number in place of a symbol.
  if (!symbol.empty() &&
      std::all_of(symbol.begin(), symbol.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    const int z = std::stoi(symbol);
    if (z >= 1 && z <= kMaxZ) return z;
  }
  throw ParseError("unknown element symbol: '" + symbol + "'");
}

}  // namespace mlipuq
