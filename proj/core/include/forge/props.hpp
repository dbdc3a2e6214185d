//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_PROPS_HPP_
#define FORGE_PROPS_HPP_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "forge/molgraph.hpp"

namespace forge {

enum class PropertyId {
  kMolWeight,
  kHeavyAtoms,
  kRingCount,
  kAromaticRings,
  kRotBonds,
  kHba,
  kHbd,
  kFsp3,
  kTpsa,
  kClogp,
};

enum class Direction { kHigherBetter, kLowerBetter };

struct PropertyOracle {
  PropertyId id = PropertyId::kClogp;
  Direction direction = Direction::kHigherBetter;
};

std::span<const PropertyId> all_properties();
std::string_view property_name(PropertyId id);
std::optional<PropertyId> property_from_name(std::string_view name);
/// Human-readable description used in prompts ("number of rings").
std::string_view property_description(PropertyId id);

/// Throws Error(kDummyAtomPresent) when `mol` contains dummy atoms.
double evaluate(const PropertyOracle &oracle, const MolGraph &mol);
double evaluate(PropertyId id, const MolGraph &mol);

double mol_weight(const MolGraph &mol);
int heavy_atoms(const MolGraph &mol);
int ring_count(const MolGraph &mol);
int aromatic_rings(const MolGraph &mol);
int rot_bonds(const MolGraph &mol);
int hba(const MolGraph &mol);
int hbd(const MolGraph &mol);
double fsp3(const MolGraph &mol);
/// Ertl N/O contributions; S and P terms only when requested.
double tpsa(const MolGraph &mol, bool include_s_and_p = false);
double clogp(const MolGraph &mol);

/// Per-atom contributions (hydrogen terms folded into their heavy atom).
std::vector<double> tpsa_contributions(const MolGraph &mol,
                                       bool include_s_and_p = false);
std::vector<double> clogp_contributions(const MolGraph &mol);

/// Clamped min-max map to [0, 1], sign-flipped for lower-is-better.
/// Throws Error(kDegenerateRange) when prop_min == prop_max.
double normalize_score(double value, double prop_min, double prop_max,
                       Direction direction);

}  // namespace forge

#endif  // FORGE_PROPS_HPP_
