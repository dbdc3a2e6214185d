//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_QUERY_HPP_
#define FORGE_QUERY_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "forge/molgraph.hpp"

namespace forge {

/// Substructure query. Built either from a SMARTS subset used by the
/// property and fragmentation rule tables, or from a MolGraph pattern in
/// which dummy atoms act as wildcards.
///
/// Supported SMARTS: `*`, `a`, `A`, `#n`, element symbols (aliphatic upper,
/// aromatic lower), `D X H R r v` with optional counts, charges, recursive
/// `$(...)`, operators `! & , ;`, bonds `- = # : ~ @` (also negated and
/// combined), branches, ring closures and atom maps (ignored).
///
/// Hydrogen primitives count both implicit hydrogens and explicit hydrogen
/// neighbours, so queries also work on hydrogen-expanded graphs.
class Query {
public:
  struct Node {
    enum Kind : std::uint8_t {
      kTrue,
      kAnd,
      kOr,
      kNot,
      // atom primitives
      kAtomicNum,
      kAromatic,
      kAliphatic,
      kDegree,
      kTotalH,
      kConnectivity,
      kCharge,
      kInRing,
      kRingCount,
      kRingSize,
      kValence,
      kRecursive,
      // bond primitives
      kBondOrder,
      kRingBond,
    };
    Kind kind = kTrue;
    int value = 0;
    int lhs = -1;
    int rhs = -1;
  };

  struct QueryBond {
    int begin;
    int end;
    int expr;
  };

  static Query from_smarts(std::string_view smarts);
  /// Dummy atoms match any host atom; other atoms match element, aromaticity
  /// and formal charge; bonds match their exact order.
  static Query from_graph(const MolGraph &pattern);

  int num_atoms() const noexcept { return static_cast<int>(atom_expr_.size()); }
  const std::string &source() const noexcept { return source_; }

  bool atom_matches(int query_atom, const MolGraph &mol, int atom) const;

private:
  friend class Matcher;

  int add_node(Node node);
  bool eval_atom(int node, const MolGraph &mol, int atom) const;
  bool eval_bond(int node, const MolGraph &mol, int bond) const;

  std::string source_;
  std::vector<Node> nodes_;
  std::vector<int> atom_expr_;
  std::vector<int> atom_degree_;  // pattern degree, for exact-degree matching
  std::vector<int> atom_hydrogens_;  // -1 when unconstrained
  std::vector<bool> atom_is_wildcard_;
  std::vector<QueryBond> bonds_;
  std::vector<std::shared_ptr<const Query>> recursive_;

  friend class SmartsParser;
};

struct MatchOptions {
  /// Keep one mapping per distinct host atom set.
  bool unique = false;
  /// Non-wildcard query atoms must have the same degree in the host as in
  /// the pattern.
  bool exact_degree = false;
  /// Non-wildcard atoms of a graph-built query must carry the same hydrogen
  /// count as the pattern atom (ignored for SMARTS queries).
  bool match_hydrogens = false;
  std::size_t max_matches = std::numeric_limits<std::size_t>::max();
};

/// All injective mappings query atom -> host atom, sorted lexicographically.
std::vector<std::vector<int>> find_matches(const Query &query,
                                           const MolGraph &mol,
                                           const MatchOptions &options = {});

bool has_match(const Query &query, const MolGraph &mol);

/// True when some mapping sends query atom 0 onto `atom`.
bool matches_at(const Query &query, const MolGraph &mol, int atom);

/// Pattern-graph matching (dummy atoms are wildcards), see Query::from_graph.
std::vector<std::vector<int>> subgraph_match(const MolGraph &pattern,
                                             const MolGraph &host);

}  // namespace forge

#endif  // FORGE_QUERY_HPP_
