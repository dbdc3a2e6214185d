//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_FRAGMENT_HPP_
#define FORGE_FRAGMENT_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/molgraph.hpp"
#include "forge/props.hpp"
#include "forge/random.hpp"

namespace forge {

enum class DecompositionMethod { kMurcko, kBrics, kEfg };
enum class Removal { kReplaceWithH, kDeleteWithCap };

std::string_view method_name(DecompositionMethod method);
std::optional<DecompositionMethod> method_from_name(std::string_view name);
std::string_view removal_name(Removal removal);
std::optional<Removal> removal_from_name(std::string_view name);

struct AttachmentPair {
  int label;          // k of the fragment's `[k*]`
  int host_atom;      // host atom on the remainder side of the cut
  int fragment_atom;  // host atom on the fragment side of the cut
  BondOrder order;    // order of the severed bond
};

struct Fragment {
  MolGraph graph;  // fragment atoms followed by one dummy per attachment
  std::vector<int> host_atom_indices;  // ascending
  std::vector<AttachmentPair> attachment_pairs;

  /// Canonical SMILES keeping the decomposition's labels.
  std::string smiles() const;
  int num_heavy_atoms() const;
};

struct Decomposition {
  DecompositionMethod method = DecompositionMethod::kBrics;
  std::vector<Fragment> fragments;
};

/// Label-independent canonical form of a fragment: labels are reassigned
/// 1..n following canonical rank order, then the graph is re-canonicalized.
/// Two fragments with equal keys are isomorphic up to label renaming.
std::string fragment_key(const MolGraph &fragment);
std::string fragment_key(std::string_view fragment_smiles);

/// Bonds cut by each method (all acyclic).
std::vector<int> murcko_cut_bonds(const MolGraph &mol);
std::vector<int> brics_cut_bonds(const MolGraph &mol);
std::vector<int> efg_cut_bonds(const MolGraph &mol);

/// Splits `mol` at the given acyclic bonds. Cut i receives label i + 1
/// (in ascending bond order). Throws Error(kInvalidArgument) on ring bonds.
std::vector<Fragment> split_at_bonds(const MolGraph &mol,
                                     std::span<const int> bonds);

/// The fragment spanned by `atoms` (connected, no dummies), with one labelled
/// dummy per bond leaving the set (labels 1.. in ascending bond order).
Fragment extract_fragment(const MolGraph &mol, std::span<const int> atoms);

Decomposition decompose(const MolGraph &mol, DecompositionMethod method);

/// Tries the methods in rng-shuffled order; the first with >= 3 fragments
/// wins, otherwise the one with most fragments (earliest on ties).
Decomposition auto_decompose(const MolGraph &mol, Rng &rng);

/// Joins dummy pairs with equal labels.
MolGraph reassemble(std::span<const Fragment> fragments);

/// Deletes the fragment's atoms and caps every severed bond with hydrogen
/// or a methyl carbon. If the remainder falls apart the largest component
/// (heavy atoms, then canonical string) is kept. Throws kEmptyRemainder.
MolGraph remove_fragment(const MolGraph &mol, const Fragment &frag,
                         Removal removal);

struct AttributionRecord {
  Fragment fragment;
  PropertyId property;
  Removal removal;
  double raw_delta;
  double per_atom_score;
};

std::vector<AttributionRecord> attribute(const MolGraph &mol,
                                         const Decomposition &decomp,
                                         const PropertyOracle &oracle,
                                         Removal removal);

/// The dummy-wildcard pattern list used by the EFG method (name, SMARTS).
struct FunctionalGroup {
  std::string_view name;
  std::string_view smarts;
};
std::span<const FunctionalGroup> functional_groups();

}  // namespace forge

#endif  // FORGE_FRAGMENT_HPP_
