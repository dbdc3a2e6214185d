//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_SMILES_HPP_
#define FORGE_SMILES_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/molgraph.hpp"

namespace forge {

/// Parses SMILES: organic subset, bracket atoms (isotope, chirality, H count,
/// charge, atom class), ring closures `0-9` and `%nn`, branches, bonds
/// `- = # : / \`, dot-disconnection and dummy atoms `*`, `[k*]`, `[*:k]`.
///
/// Explicit neutral `[H]` atoms bonded to one heavy atom are folded into that
/// atom's hydrogen count.
///
/// Throws Error with kUnbalancedRing, kUnbalancedParen, kValenceError or
/// kUnknownToken (byte offset attached).
MolGraph parse_smiles(std::string_view text);

/// Strips isotopes from organic-subset atoms, giving uncharged ones the
/// hydrogen count of the equivalent bare atom. Attachment labels are kept.
MolGraph normalize(const MolGraph &mol);

/// Canonical atom ranks (a permutation of 0..n-1). Isomorphic graphs receive
/// ranks that map onto each other; stereo annotations are ignored.
std::vector<int> canonical_ranks(const MolGraph &mol);

/// Writes SMILES by depth-first traversal, starting each component at its
/// lowest-ranked atom and visiting neighbours in rank order.
std::string write_smiles(const MolGraph &mol, std::span<const int> ranks);

/// Deterministic string identical for all isomorphic graphs.
std::string canonical_smiles(const MolGraph &mol);

/// parse + canonical in one step.
std::string canonicalize(std::string_view smiles);

}  // namespace forge

#endif  // FORGE_SMILES_HPP_
