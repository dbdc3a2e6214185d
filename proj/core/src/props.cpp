//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/props.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <mutex>
#include <string>

#include "crippen_table.hpp"
#include "forge/element.hpp"
#include "forge/error.hpp"
#include "forge/query.hpp"

namespace forge {
namespace {

constexpr std::array kAllProperties = {
  PropertyId::kMolWeight, PropertyId::kHeavyAtoms, PropertyId::kRingCount,
  PropertyId::kAromaticRings, PropertyId::kRotBonds, PropertyId::kHba,
  PropertyId::kHbd, PropertyId::kFsp3, PropertyId::kTpsa, PropertyId::kClogp,
};

struct BondCounts {
  int single = 0;
  int dbl = 0;
  int triple = 0;
  int aromatic = 0;
  int heavy_neighbors = 0;
  int hydrogens = 0;
};

BondCounts count_bonds(const MolGraph &mol, int atom) {
  BondCounts c;
  c.hydrogens = mol.atom(atom).hydrogens;
  for (const Neighbor &nb: mol.neighbors(atom)) {
    if (mol.atom(nb.atom).atomic_number == 1) {
      ++c.hydrogens;
      continue;
    }
    ++c.heavy_neighbors;
    switch (mol.bond(nb.bond).order) {
    case BondOrder::kSingle:
      ++c.single;
      break;
    case BondOrder::kDouble:
      ++c.dbl;
      break;
    case BondOrder::kTriple:
      ++c.triple;
      break;
    case BondOrder::kAromatic:
      ++c.aromatic;
      break;
    }
  }
  return c;
}

double nitrogen_psa(const BondCounts &c, int chg, bool in3) {
  const int h = c.hydrogens;
  switch (c.heavy_neighbors) {
  case 1:
    if (h == 0 && chg == 0 && c.triple == 1)
      return 23.79;
    if (h == 1 && chg == 0 && c.dbl == 1)
      return 23.85;
    if (h == 2 && chg == 0 && c.single == 1)
      return 26.02;
    if (h == 2 && chg == 1 && c.dbl == 1)
      return 25.59;
    if (h == 3 && chg == 1 && c.single == 1)
      return 27.64;
    break;
  case 2:
    if (h == 0 && chg == 0 && c.single == 1 && c.dbl == 1)
      return 12.36;
    if (h == 0 && chg == 0 && c.triple == 1 && c.dbl == 1)
      return 13.60;
    if (h == 1 && chg == 0 && c.single == 2)
      return in3 ? 21.94 : 12.03;
    if (h == 0 && chg == 1 && c.triple == 1 && c.single == 1)
      return 4.36;
    if (h == 1 && chg == 1 && c.dbl == 1 && c.single == 1)
      return 13.97;
    if (h == 2 && chg == 1 && c.single == 2)
      return 16.61;
    if (h == 0 && chg == 0 && c.aromatic == 2)
      return 12.89;
    if (h == 1 && chg == 0 && c.aromatic == 2)
      return 15.79;
    if (h == 1 && chg == 1 && c.aromatic == 2)
      return 14.14;
    break;
  case 3:
    if (h == 0 && chg == 0 && c.single == 3)
      return in3 ? 3.01 : 3.24;
    if (h == 0 && chg == 0 && c.single == 1 && c.dbl == 2)
      return 11.68;
    if (h == 0 && chg == 1 && c.single == 2 && c.dbl == 1)
      return 3.01;
    if (h == 1 && chg == 1 && c.single == 3)
      return 4.44;
    if (h == 0 && chg == 0 && c.aromatic == 3)
      return 4.41;
    if (h == 0 && chg == 0 && c.single == 1 && c.aromatic == 2)
      return 4.93;
    if (h == 0 && chg == 0 && c.dbl == 1 && c.aromatic == 2)
      return 8.39;
    if (h == 0 && chg == 1 && c.aromatic == 3)
      return 4.10;
    if (h == 0 && chg == 1 && c.single == 1 && c.aromatic == 2)
      return 3.88;
    break;
  case 4:
    if (h == 0 && chg == 1 && c.single == 4)
      return 0.0;
    break;
  default:
    break;
  }
  return std::max(0.0, 30.5 - c.heavy_neighbors * 8.2 + h * 1.5);
}

double oxygen_psa(const BondCounts &c, int chg, bool in3) {
  const int h = c.hydrogens;
  switch (c.heavy_neighbors) {
  case 1:
    if (h == 0 && chg == 0 && c.dbl == 1)
      return 17.07;
    if (h == 1 && chg == 0 && c.single == 1)
      return 20.23;
    if (h == 0 && chg == -1 && c.single == 1)
      return 23.06;
    break;
  case 2:
    if (h == 0 && chg == 0 && c.single == 2)
      return in3 ? 12.53 : 9.23;
    if (h == 0 && chg == 0 && c.aromatic == 2)
      return 13.14;
    break;
  default:
    break;
  }
  return std::max(0.0, 28.5 - c.heavy_neighbors * 8.6 + h * 1.5);
}

double sulfur_psa(const BondCounts &c, int chg) {
  const int h = c.hydrogens;
  if (chg != 0)
    return 0.0;
  switch (c.heavy_neighbors) {
  case 1:
    if (h == 0 && c.dbl == 1)
      return 32.09;
    if (h == 1 && c.single == 1)
      return 38.80;
    break;
  case 2:
    if (h == 0 && c.single == 2)
      return 25.30;
    if (h == 0 && c.aromatic == 2)
      return 28.24;
    break;
  case 3:
    if (h == 0 && c.aromatic == 2 && c.dbl == 1)
      return 21.70;
    if (h == 0 && c.single == 2 && c.dbl == 1)
      return 19.21;
    break;
  case 4:
    if (h == 0 && c.single == 2 && c.dbl == 2)
      return 8.38;
    break;
  default:
    break;
  }
  return 0.0;
}

double phosphorus_psa(const BondCounts &c, int chg) {
  const int h = c.hydrogens;
  if (chg != 0)
    return 0.0;
  switch (c.heavy_neighbors) {
  case 2:
    if (h == 0 && c.single == 1 && c.dbl == 1)
      return 34.14;
    break;
  case 3:
    if (h == 0 && c.single == 3)
      return 13.59;
    if (h == 1 && c.single == 2 && c.dbl == 1)
      return 23.47;
    break;
  case 4:
    if (h == 0 && c.single == 3 && c.dbl == 1)
      return 9.81;
    break;
  default:
    break;
  }
  return 0.0;
}

struct CompiledType {
  double logp;
  Query query;
};

const std::vector<CompiledType> &compiled_crippen() {
  static const std::vector<CompiledType> kCompiled = [] {
    std::vector<CompiledType> out;
    for (const auto &t: detail::crippen_types())
      out.push_back({ t.logp, Query::from_smarts(t.smarts) });
    return out;
  }();
  return kCompiled;
}

// Copy of `mol` with every hydrogen as an explicit atom; parent[i] is the
// heavy atom an added hydrogen hangs off (or i itself).
MolGraph expand_hydrogens(const MolGraph &mol, std::vector<int> &parent) {
  std::vector<Atom> atoms = mol.atoms();
  std::vector<Bond> bonds = mol.bonds();
  parent.resize(atoms.size());
  for (int i = 0; i < mol.num_atoms(); ++i)
    parent[i] = i;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const int h = atoms[i].hydrogens;
    atoms[i].hydrogens = 0;
    for (int k = 0; k < h; ++k) {
      Atom hydrogen;
      hydrogen.atomic_number = 1;
      atoms.push_back(hydrogen);
      parent.push_back(i);
      bonds.push_back({ i, static_cast<int>(atoms.size()) - 1,
                        BondOrder::kSingle, 0 });
    }
  }
  return MolGraph(std::move(atoms), std::move(bonds));
}

void require_no_dummy(const MolGraph &mol) {
  if (mol.has_dummy())
    throw Error(ErrorCode::kDummyAtomPresent,
                "property oracles are undefined on fragments with dummy atoms");
}

bool is_amide_cn(const MolGraph &mol, int c, int n) {
  if (mol.atom(c).atomic_number != 6 || mol.atom(n).atomic_number != 7)
    return false;
  for (const Neighbor &nb: mol.neighbors(c)) {
    const Bond &b = mol.bond(nb.bond);
    const int z = mol.atom(nb.atom).atomic_number;
    if (b.order == BondOrder::kDouble && (z == 8 || z == 16))
      return true;
  }
  return false;
}

int heavy_degree(const MolGraph &mol, int atom) {
  int d = 0;
  for (const Neighbor &nb: mol.neighbors(atom))
    if (mol.atom(nb.atom).is_heavy())
      ++d;
  return d;
}

}  // namespace

std::span<const PropertyId> all_properties() {
  return kAllProperties;
}

std::string_view property_name(PropertyId id) {
  switch (id) {
  case PropertyId::kMolWeight:
    return "mol_weight";
  case PropertyId::kHeavyAtoms:
    return "heavy_atoms";
  case PropertyId::kRingCount:
    return "ring_count";
  case PropertyId::kAromaticRings:
    return "aromatic_rings";
  case PropertyId::kRotBonds:
    return "rot_bonds";
  case PropertyId::kHba:
    return "hba";
  case PropertyId::kHbd:
    return "hbd";
  case PropertyId::kFsp3:
    return "fsp3";
  case PropertyId::kTpsa:
    return "tpsa";
  case PropertyId::kClogp:
    return "clogp";
  }
  return "unknown";
}

std::optional<PropertyId> property_from_name(std::string_view name) {
  for (PropertyId id: kAllProperties)
    if (property_name(id) == name)
      return id;
  return std::nullopt;
}

std::string_view property_description(PropertyId id) {
  switch (id) {
  case PropertyId::kMolWeight:
    return "molecular weight";
  case PropertyId::kHeavyAtoms:
    return "number of heavy atoms";
  case PropertyId::kRingCount:
    return "number of rings";
  case PropertyId::kAromaticRings:
    return "number of aromatic rings";
  case PropertyId::kRotBonds:
    return "number of rotatable bonds";
  case PropertyId::kHba:
    return "number of hydrogen bond acceptors";
  case PropertyId::kHbd:
    return "number of hydrogen bond donors";
  case PropertyId::kFsp3:
    return "fraction of sp3 carbons";
  case PropertyId::kTpsa:
    return "topological polar surface area";
  case PropertyId::kClogp:
    return "lipophilicity (cLogP)";
  }
  return "unknown";
}

double mol_weight(const MolGraph &mol) {
  const double h_weight = element(1).atomic_weight;
  double w = 0.0;
  for (const Atom &a: mol.atoms()) {
    if (a.is_dummy())
      continue;
    w += a.isotope ? static_cast<double>(*a.isotope)
                   : element(a.atomic_number).atomic_weight;
    w += a.hydrogens * h_weight;
  }
  return w;
}

int heavy_atoms(const MolGraph &mol) {
  return mol.num_heavy_atoms();
}

int ring_count(const MolGraph &mol) {
  return static_cast<int>(mol.rings().size());
}

int aromatic_rings(const MolGraph &mol) {
  int n = 0;
  for (const auto &ring: mol.ring_bond_sets()) {
    const bool all = std::all_of(ring.begin(), ring.end(), [&](int b) {
      return mol.bond(b).order == BondOrder::kAromatic;
    });
    n += all ? 1 : 0;
  }
  return n;
}

int rot_bonds(const MolGraph &mol) {
  int n = 0;
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond &bond = mol.bond(b);
    if (bond.order != BondOrder::kSingle || mol.bond_in_ring(b))
      continue;
    if (!mol.atom(bond.begin).is_heavy() || !mol.atom(bond.end).is_heavy())
      continue;
    if (heavy_degree(mol, bond.begin) < 2 || heavy_degree(mol, bond.end) < 2)
      continue;
    if (is_amide_cn(mol, bond.begin, bond.end)
        || is_amide_cn(mol, bond.end, bond.begin))
      continue;
    ++n;
  }
  return n;
}

int hba(const MolGraph &mol) {
  int n = 0;
  for (const Atom &a: mol.atoms())
    n += (a.atomic_number == 7 || a.atomic_number == 8) ? 1 : 0;
  return n;
}

int hbd(const MolGraph &mol) {
  int n = 0;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const int z = mol.atom(i).atomic_number;
    if (z == 7 || z == 8)
      n += count_bonds(mol, i).hydrogens;
  }
  return n;
}

double fsp3(const MolGraph &mol) {
  int carbons = 0;
  int sp3 = 0;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom &a = mol.atom(i);
    if (a.atomic_number != 6)
      continue;
    ++carbons;
    if (a.aromatic)
      continue;
    bool saturated = true;
    for (const Neighbor &nb: mol.neighbors(i))
      if (mol.bond(nb.bond).order != BondOrder::kSingle)
        saturated = false;
    sp3 += saturated ? 1 : 0;
  }
  return carbons == 0 ? 0.0 : static_cast<double>(sp3) / carbons;
}

std::vector<double> tpsa_contributions(const MolGraph &mol,
                                       bool include_s_and_p) {
  std::vector<double> out(mol.num_atoms(), 0.0);
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom &a = mol.atom(i);
    const BondCounts c = count_bonds(mol, i);
    const bool in3 = mol.atom_in_ring_of_size(i, 3);
    switch (a.atomic_number) {
    case 7:
      out[i] = nitrogen_psa(c, a.formal_charge, in3);
      break;
    case 8:
      out[i] = oxygen_psa(c, a.formal_charge, in3);
      break;
    case 15:
      if (include_s_and_p)
        out[i] = phosphorus_psa(c, a.formal_charge);
      break;
    case 16:
      if (include_s_and_p)
        out[i] = sulfur_psa(c, a.formal_charge);
      break;
    default:
      break;
    }
  }
  return out;
}

double tpsa(const MolGraph &mol, bool include_s_and_p) {
  double total = 0.0;
  for (double v: tpsa_contributions(mol, include_s_and_p))
    total += v;
  return total;
}

std::vector<double> clogp_contributions(const MolGraph &mol) {
  std::vector<int> parent;
  const MolGraph full = expand_hydrogens(mol, parent);
  const auto &types = compiled_crippen();
  std::vector<double> out(mol.num_atoms(), 0.0);
  for (int i = 0; i < full.num_atoms(); ++i) {
    if (full.atom(i).is_dummy())
      continue;
    for (const CompiledType &t: types) {
      if (!t.query.atom_matches(0, full, i))
        continue;
      if (matches_at(t.query, full, i)) {
        out[parent[i]] += t.logp;
        break;
      }
    }
  }
  return out;
}

double clogp(const MolGraph &mol) {
  double total = 0.0;
  for (double v: clogp_contributions(mol))
    total += v;
  return total;
}

double evaluate(PropertyId id, const MolGraph &mol) {
  require_no_dummy(mol);
  switch (id) {
  case PropertyId::kMolWeight:
    return mol_weight(mol);
  case PropertyId::kHeavyAtoms:
    return heavy_atoms(mol);
  case PropertyId::kRingCount:
    return ring_count(mol);
  case PropertyId::kAromaticRings:
    return aromatic_rings(mol);
  case PropertyId::kRotBonds:
    return rot_bonds(mol);
  case PropertyId::kHba:
    return hba(mol);
  case PropertyId::kHbd:
    return hbd(mol);
  case PropertyId::kFsp3:
    return fsp3(mol);
  case PropertyId::kTpsa:
    return tpsa(mol);
  case PropertyId::kClogp:
    return clogp(mol);
  }
  return 0.0;
}

double evaluate(const PropertyOracle &oracle, const MolGraph &mol) {
  return evaluate(oracle.id, mol);
}

double normalize_score(double value, double prop_min, double prop_max,
                       Direction direction) {
  if (prop_min == prop_max)
    throw Error(ErrorCode::kDegenerateRange,
                "property range is degenerate (" + std::to_string(prop_min)
                    + ")");
  if (prop_min > prop_max)
    throw Error(ErrorCode::kInvalidArgument, "prop_min exceeds prop_max");
  double t = (value - prop_min) / (prop_max - prop_min);
  t = std::clamp(t, 0.0, 1.0);
  return direction == Direction::kHigherBetter ? t : 1.0 - t;
}

}  // namespace forge
