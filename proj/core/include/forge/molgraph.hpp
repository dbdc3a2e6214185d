//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_MOLGRAPH_HPP_
#define FORGE_MOLGRAPH_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace forge {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

/// Integer valence contribution of a bond; aromatic bonds count as 1 and the
/// aromatic atom model adds the extra electron separately.
constexpr int valence_contribution(BondOrder order) noexcept {
  return order == BondOrder::kAromatic ? 1 : static_cast<int>(order);
}

enum class Chirality : std::uint8_t {
  kNone,
  kAnticlockwise,  // @
  kClockwise,      // @@
};

struct Atom {
  int atomic_number = 6;  // 0 for the dummy atom `*`
  bool aromatic = false;
  int formal_charge = 0;
  int hydrogens = 0;  // total attached hydrogens (implicit + bracket)
  std::optional<int> isotope;
  std::optional<int> attachment_label;  // k of `[k*]`
  // Retained from input; ignored by canonicalization and matching.
  Chirality chirality = Chirality::kNone;

  bool is_dummy() const noexcept { return atomic_number == 0; }
  bool is_heavy() const noexcept { return atomic_number > 1; }

  friend bool operator==(const Atom &, const Atom &) = default;
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;
  char direction = 0;  // '/' or '\\' as written, 0 otherwise

  int other(int atom) const noexcept { return atom == begin ? end : begin; }

  friend bool operator==(const Bond &, const Bond &) = default;
};

struct Neighbor {
  int atom;
  int bond;
};

/// Immutable attributed molecular graph. Adjacency and ring information are
/// computed once at construction; edits build a new graph.
class MolGraph {
public:
  MolGraph() = default;

  /// Throws Error(kInvalidArgument) on self-loops, parallel bonds or
  /// out-of-range indices.
  MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds);

  int num_atoms() const noexcept { return static_cast<int>(atoms_.size()); }
  int num_bonds() const noexcept { return static_cast<int>(bonds_.size()); }
  bool empty() const noexcept { return atoms_.empty(); }

  const Atom &atom(int i) const { return atoms_[i]; }
  const std::vector<Atom> &atoms() const noexcept { return atoms_; }
  const Bond &bond(int i) const { return bonds_[i]; }
  const std::vector<Bond> &bonds() const noexcept { return bonds_; }

  std::span<const Neighbor> neighbors(int atom) const {
    return { nbrs_.data() + offsets_[atom],
             nbrs_.data() + offsets_[atom + 1] };
  }
  int degree(int atom) const { return offsets_[atom + 1] - offsets_[atom]; }
  std::optional<int> bond_between(int a, int b) const;

  bool atom_in_ring(int atom) const { return atom_ring_count_[atom] > 0; }
  bool bond_in_ring(int bond) const { return bond_in_ring_[bond]; }
  /// Number of smallest-set-of-smallest-rings members containing `atom`.
  int atom_ring_count(int atom) const { return atom_ring_count_[atom]; }
  bool atom_in_ring_of_size(int atom, int size) const;
  /// SSSR rings as cyclically ordered atom indices.
  const std::vector<std::vector<int>> &rings() const noexcept {
    return rings_;
  }
  /// Bond indices of each SSSR ring, parallel to rings().
  const std::vector<std::vector<int>> &ring_bond_sets() const noexcept {
    return ring_bonds_;
  }

  int num_heavy_atoms() const;
  bool has_dummy() const;
  /// Sum of bond valence contributions (see valence_contribution).
  int explicit_valence(int atom) const;

  /// Connected components, each sorted ascending; ordered by smallest member.
  std::vector<std::vector<int>> components() const;

  /// Induced subgraph over `atoms` (new index i = position in `atoms`).
  MolGraph subgraph(std::span<const int> atoms) const;

  /// Same graph with atoms reordered: new atom i is old atom order[i].
  MolGraph permuted(std::span<const int> order) const;

private:
  void build_adjacency();
  void perceive_rings();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> offsets_ { 0 };
  std::vector<Neighbor> nbrs_;
  std::vector<bool> bond_in_ring_;
  std::vector<int> atom_ring_count_;
  std::vector<std::vector<int>> rings_;
  std::vector<std::vector<int>> ring_bonds_;
};

/// Hydrogen count the SMILES valence model assigns to a bare organic-subset
/// atom with the given bonds; nullopt when the bonds exceed every allowed
/// valence.
std::optional<int> implicit_hydrogens(const MolGraph &mol, int atom);

/// Same model evaluated from raw values (used while a graph is being built).
std::optional<int> implicit_hydrogens(int atomic_number, bool aromatic,
                                      int explicit_valence);

/// Throws Error(kValenceError) naming the first atom whose bonds plus
/// hydrogens exceed the largest allowed valence for its element and charge.
void check_valence(const MolGraph &mol);

}  // namespace forge

#endif  // FORGE_MOLGRAPH_HPP_
