//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/fragment.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "forge/error.hpp"
#include "forge/query.hpp"
#include "forge/smiles.hpp"

namespace forge {

namespace {

// BRICS environments, keyed by the rule label.
struct BricsEnv {
  std::string_view label;
  std::string_view smarts;
};

constexpr std::array<BricsEnv, 18> kBricsEnvs = { {
  { "1", "[C;D3]([#0,#6,#7,#8])(=O)" },
  { "3", "[O;D2]-;!@[#0,#6,#1]" },
  { "4", "[C;!D1;!$(C=*)]-;!@[#6]" },
  { "5", "[N;!D1;!$(N=*);!$(N-[!#6;!#16;!#0;!#1]);!$([N;R]@[C;R]=O)]" },
  { "6", "[C;D3;!R](=O)-;!@[#0,#6,#7,#8]" },
  { "7a", "[C;D2,D3]-[#6]" },
  { "7b", "[C;D2,D3]-[#6]" },
  { "8", "[C;!R;!D1;!$(C!-*)]" },
  { "9", "[n;+0;$(n(:[c,n,o,s]):[c,n,o,s])]" },
  { "10", "[N;R;$(N(@C(=O))@[C,N,O,S])]" },
  { "11", "[S;D2](-;!@[#0,#6])" },
  { "12", "[S;D4]([#6,#0])(=O)(=O)" },
  { "13", "[C;$(C(-;@[C,N,O,S])-;@[N,O,S])]" },
  { "14", "[c;$(c(:[c,n,o,s]):[n,o,s])]" },
  { "14b", "[c;$(c(:[c,n,o,s]):[n,o,s])]" },
  { "15", "[C;$(C(-;@C)-;@C)]" },
  { "16", "[c;$(c(:c):c)]" },
  { "16b", "[c;$(c(:c):c)]" },
} };

struct BricsRule {
  std::string_view a, b;
  char bond;
};

constexpr std::array<BricsRule, 46> kBricsRules = { {
  { "1", "3", '-' }, { "1", "5", '-' }, { "1", "10", '-' },
  { "3", "4", '-' }, { "3", "13", '-' }, { "3", "14", '-' },
  { "3", "15", '-' }, { "3", "16", '-' },
  { "4", "5", '-' }, { "4", "11", '-' },
  { "5", "12", '-' }, { "5", "14", '-' }, { "5", "16", '-' },
  { "5", "13", '-' }, { "5", "15", '-' },
  { "6", "13", '-' }, { "6", "14", '-' }, { "6", "15", '-' },
  { "6", "16", '-' },
  { "7a", "7b", '=' },
  { "8", "9", '-' }, { "8", "10", '-' }, { "8", "13", '-' },
  { "8", "14", '-' }, { "8", "15", '-' }, { "8", "16", '-' },
  { "9", "13", '-' }, { "9", "14", '-' }, { "9", "15", '-' },
  { "9", "16", '-' },
  { "10", "13", '-' }, { "10", "14", '-' }, { "10", "15", '-' },
  { "10", "16", '-' },
  { "11", "13", '-' }, { "11", "14", '-' }, { "11", "15", '-' },
  { "11", "16", '-' },
  { "13", "14", '-' }, { "13", "15", '-' }, { "13", "16", '-' },
  { "14", "14", '-' }, { "14", "15", '-' }, { "14", "16", '-' },
  { "15", "16", '-' }, { "16", "16", '-' },
} };

std::string_view brics_env(std::string_view label) {
  for (const BricsEnv &e: kBricsEnvs)
    if (e.label == label)
      return e.smarts;
  return {};
}

const std::vector<Query> &brics_queries() {
  static const std::vector<Query> queries = [] {
    std::vector<Query> out;
    auto add = [&](const BricsRule &r) {
      std::string s = "[$(";
      s += brics_env(r.a);
      s += ")]";
      s += r.bond;
      s += ";!@[$(";
      s += brics_env(r.b);
      s += ")]";
      out.push_back(Query::from_smarts(s));
    };
    for (const BricsRule &r: kBricsRules)
      add(r);
    return out;
  }();
  return queries;
}

constexpr std::array<FunctionalGroup, 32> kFunctionalGroups = { {
  { "fluoro", "[F]" },
  { "chloro", "[Cl]" },
  { "bromo", "[Br]" },
  { "iodo", "[I]" },
  { "hydroxyl", "[OX2H]" },
  { "ether", "[OX2;!a;$(O([#6])[#6])]" },
  { "carboxyl", "[CX3](=[OX1])[OX2]" },
  { "carboxylate", "[CX3](=[OX1])[O-]" },
  { "amide", "[CX3](=[OX1])[#7]" },
  { "carbonyl", "[#6X3]=[OX1]" },
  { "thiocarbonyl", "[#6X3]=[SX1]" },
  { "imine", "[#6]=[#7]" },
  { "nitrile", "[CX2]#[NX1]" },
  { "nitro", "[#7+](=O)[O-]" },
  { "nitro_neutral", "[#7](=O)=O" },
  { "nitroso", "[#7]=[OX1]" },
  { "azo", "[#7]=[#7]" },
  { "sulfonyl", "[SX4](=O)=O" },
  { "sulfonamide", "[SX4](=O)(=O)[#7]" },
  { "sulfoxide", "[SX3]=O" },
  { "thioether", "[#16X2;!a]" },
  { "amine", "[NX3;!a]" },
  { "ammonium", "[NX4+]" },
  { "aromatic_heteroatom", "[n,o,s]" },
  { "phosphorus", "[#15]" },
  { "boron", "[#5]" },
  { "alkene", "[CX3;!a]=[CX3;!a]" },
  { "alkyne", "[CX2]#[CX2]" },
  { "acetal", "[CX4]([OX2])[OX2]" },
  { "oxygen_anion", "[OX1-]" },
  { "isocyanate", "[#7]=[#6]=[#8,#16]" },
  { "other_heteroatom", "[!#1;!#6;!#0]" },
} };

const std::vector<Query> &efg_queries() {
  static const std::vector<Query> queries = [] {
    std::vector<Query> out;
    for (const FunctionalGroup &g: kFunctionalGroups)
      out.push_back(Query::from_smarts(g.smarts));
    return out;
  }();
  return queries;
}

struct DisjointSet {
  explicit DisjointSet(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b)
      parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> parent;
};

// Builds the fragment over sorted `atoms`, adding a dummy for each listed
// cut bond, as (bond index, label) pairs.
Fragment build_fragment(const MolGraph &mol, std::vector<int> atoms,
                        const std::vector<std::pair<int, int>> &cuts) {
  std::sort(atoms.begin(), atoms.end());
  std::vector<int> local(mol.num_atoms(), -1);
  for (std::size_t i = 0; i < atoms.size(); ++i)
    local[atoms[i]] = static_cast<int>(i);

  std::vector<Atom> new_atoms;
  std::vector<Bond> new_bonds;
  for (int a: atoms)
    new_atoms.push_back(mol.atom(a));
  for (const Bond &b: mol.bonds())
    if (local[b.begin] >= 0 && local[b.end] >= 0)
      new_bonds.push_back({ local[b.begin], local[b.end], b.order, 0 });

  Fragment frag;
  for (const auto &[bond_index, label]: cuts) {
    const Bond &b = mol.bond(bond_index);
    const bool begin_inside = local[b.begin] >= 0;
    const int inside = begin_inside ? b.begin : b.end;
    const int outside = begin_inside ? b.end : b.begin;
    Atom dummy;
    dummy.atomic_number = 0;
    dummy.attachment_label = label;
    new_atoms.push_back(dummy);
    new_bonds.push_back({ local[inside],
                          static_cast<int>(new_atoms.size()) - 1, b.order, 0 });
    frag.attachment_pairs.push_back({ label, outside, inside, b.order });
  }
  frag.graph = MolGraph(std::move(new_atoms), std::move(new_bonds));
  frag.host_atom_indices = std::move(atoms);
  return frag;
}

std::vector<std::vector<int>> groups_from(DisjointSet &ds, int n) {
  std::map<int, std::vector<int>> by_root;
  for (int i = 0; i < n; ++i)
    by_root[ds.find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto &[root, members]: by_root)
    out.push_back(std::move(members));
  return out;
}

// Explicit hydrogen atoms always travel with their neighbour.
void tie_hydrogens(const MolGraph &mol, DisjointSet &ds) {
  for (const Bond &b: mol.bonds())
    if (mol.atom(b.begin).atomic_number == 1
        || mol.atom(b.end).atomic_number == 1)
      ds.unite(b.begin, b.end);
}

std::vector<int> cut_bonds_of(const MolGraph &mol, DisjointSet &ds) {
  std::vector<int> cuts;
  for (int i = 0; i < mol.num_bonds(); ++i)
    if (ds.find(mol.bond(i).begin) != ds.find(mol.bond(i).end))
      cuts.push_back(i);
  return cuts;
}

}  // namespace

std::string_view method_name(DecompositionMethod method) {
  switch (method) {
  case DecompositionMethod::kMurcko:
    return "murcko";
  case DecompositionMethod::kBrics:
    return "brics";
  case DecompositionMethod::kEfg:
    return "efg";
  }
  return "?";
}

std::optional<DecompositionMethod> method_from_name(std::string_view name) {
  for (auto m: { DecompositionMethod::kMurcko, DecompositionMethod::kBrics,
                 DecompositionMethod::kEfg })
    if (method_name(m) == name)
      return m;
  return std::nullopt;
}

std::string_view removal_name(Removal removal) {
  return removal == Removal::kReplaceWithH ? "replace_with_h"
                                           : "delete_with_cap";
}

std::optional<Removal> removal_from_name(std::string_view name) {
  if (name == "replace_with_h")
    return Removal::kReplaceWithH;
  if (name == "delete_with_cap")
    return Removal::kDeleteWithCap;
  return std::nullopt;
}

std::span<const FunctionalGroup> functional_groups() {
  return kFunctionalGroups;
}

std::string Fragment::smiles() const {
  return canonical_smiles(graph);
}

int Fragment::num_heavy_atoms() const {
  return graph.num_heavy_atoms();
}

std::string fragment_key(const MolGraph &fragment) {
  std::vector<Atom> atoms = fragment.atoms();
  for (Atom &a: atoms)
    if (a.is_dummy())
      a.attachment_label.reset();
  const MolGraph bare(atoms, fragment.bonds());
  const std::vector<int> ranks = canonical_ranks(bare);
  std::vector<int> dummies;
  for (int i = 0; i < bare.num_atoms(); ++i)
    if (atoms[i].is_dummy())
      dummies.push_back(i);
  std::sort(dummies.begin(), dummies.end(),
            [&](int a, int b) { return ranks[a] < ranks[b]; });
  for (std::size_t k = 0; k < dummies.size(); ++k)
    atoms[dummies[k]].attachment_label = static_cast<int>(k) + 1;
  return canonical_smiles(MolGraph(std::move(atoms), fragment.bonds()));
}

std::string fragment_key(std::string_view fragment_smiles) {
  return fragment_key(parse_smiles(fragment_smiles));
}

std::vector<int> murcko_cut_bonds(const MolGraph &mol) {
  const int n = mol.num_atoms();
  std::vector<bool> keep(n, true);
  std::vector<int> deg(n);
  for (int i = 0; i < n; ++i)
    deg[i] = mol.degree(i);
  bool any_ring = false;
  for (int i = 0; i < n; ++i)
    any_ring = any_ring || mol.atom_in_ring(i);
  if (!any_ring)
    return {};
  // Prune terminal chain atoms until only rings and linkers remain.
  std::vector<int> stack;
  for (int i = 0; i < n; ++i)
    if (deg[i] <= 1 && !mol.atom_in_ring(i))
      stack.push_back(i);
  while (!stack.empty()) {
    const int a = stack.back();
    stack.pop_back();
    if (!keep[a])
      continue;
    keep[a] = false;
    for (const Neighbor &nb: mol.neighbors(a))
      if (keep[nb.atom] && --deg[nb.atom] <= 1 && !mol.atom_in_ring(nb.atom))
        stack.push_back(nb.atom);
  }
  std::vector<int> cuts;
  for (int i = 0; i < mol.num_bonds(); ++i) {
    const Bond &b = mol.bond(i);
    if (keep[b.begin] != keep[b.end]) {
      const int side = keep[b.begin] ? b.end : b.begin;
      if (mol.atom(side).atomic_number != 1)
        cuts.push_back(i);
    }
  }
  return cuts;
}

std::vector<int> brics_cut_bonds(const MolGraph &mol) {
  std::vector<bool> cut(mol.num_bonds(), false);
  for (const Query &q: brics_queries())
    for (const std::vector<int> &m: find_matches(q, mol, { .unique = true }))
      if (auto b = mol.bond_between(m[0], m[1]))
        cut[*b] = true;
  std::vector<int> out;
  for (int i = 0; i < mol.num_bonds(); ++i)
    if (cut[i] && !mol.bond_in_ring(i)
        && mol.atom(mol.bond(i).begin).atomic_number != 1
        && mol.atom(mol.bond(i).end).atomic_number != 1)
      out.push_back(i);
  return out;
}

std::vector<int> efg_cut_bonds(const MolGraph &mol) {
  const int n = mol.num_atoms();
  DisjointSet ds(n);
  std::vector<bool> marked(n, false);
  for (const Query &q: efg_queries()) {
    for (const std::vector<int> &m: find_matches(q, mol, { .unique = true })) {
      for (int a: m) {
        marked[a] = true;
        ds.unite(a, m[0]);
      }
    }
  }
  tie_hydrogens(mol, ds);
  for (int i = 0; i < mol.num_bonds(); ++i) {
    const Bond &b = mol.bond(i);
    if (mol.bond_in_ring(i)) {
      ds.unite(b.begin, b.end);
    } else if (marked[b.begin] && marked[b.end]) {
      ds.unite(b.begin, b.end);
    } else if (!marked[b.begin] && !marked[b.end]
               && mol.atom_in_ring(b.begin) == mol.atom_in_ring(b.end)) {
      ds.unite(b.begin, b.end);
    }
  }
  return cut_bonds_of(mol, ds);
}

std::vector<Fragment> split_at_bonds(const MolGraph &mol,
                                     std::span<const int> bonds) {
  std::vector<int> sorted(bonds.begin(), bonds.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<bool> is_cut(mol.num_bonds(), false);
  for (int b: sorted) {
    if (b < 0 || b >= mol.num_bonds())
      throw Error(ErrorCode::kInvalidArgument, "bond index out of range");
    if (mol.bond_in_ring(b))
      throw Error(ErrorCode::kInvalidArgument, "cannot cut a ring bond");
    is_cut[b] = true;
  }
  DisjointSet ds(mol.num_atoms());
  for (int i = 0; i < mol.num_bonds(); ++i)
    if (!is_cut[i])
      ds.unite(mol.bond(i).begin, mol.bond(i).end);

  std::vector<Fragment> out;
  for (std::vector<int> &group: groups_from(ds, mol.num_atoms())) {
    const int root = ds.find(group.front());
    std::vector<std::pair<int, int>> cuts;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      const Bond &b = mol.bond(sorted[k]);
      if (ds.find(b.begin) == root || ds.find(b.end) == root)
        cuts.emplace_back(sorted[k], static_cast<int>(k) + 1);
    }
    out.push_back(build_fragment(mol, std::move(group), cuts));
  }
  return out;
}

Fragment extract_fragment(const MolGraph &mol, std::span<const int> atoms) {
  std::vector<bool> inside(mol.num_atoms(), false);
  for (int a: atoms)
    inside[a] = true;
  std::vector<std::pair<int, int>> cuts;
  for (int i = 0; i < mol.num_bonds(); ++i)
    if (inside[mol.bond(i).begin] != inside[mol.bond(i).end])
      cuts.emplace_back(i, static_cast<int>(cuts.size()) + 1);
  return build_fragment(mol, { atoms.begin(), atoms.end() }, cuts);
}

Decomposition decompose(const MolGraph &mol, DecompositionMethod method) {
  if (mol.has_dummy())
    throw Error(ErrorCode::kDummyAtomPresent,
                "cannot decompose a molecule with dummy atoms");
  std::vector<int> cuts;
  switch (method) {
  case DecompositionMethod::kMurcko:
    cuts = murcko_cut_bonds(mol);
    break;
  case DecompositionMethod::kBrics:
    cuts = brics_cut_bonds(mol);
    break;
  case DecompositionMethod::kEfg:
    cuts = efg_cut_bonds(mol);
    break;
  }
  return { method, split_at_bonds(mol, cuts) };
}

Decomposition auto_decompose(const MolGraph &mol, Rng &rng) {
  std::array<DecompositionMethod, 3> order = {
    DecompositionMethod::kMurcko, DecompositionMethod::kBrics,
    DecompositionMethod::kEfg
  };
  shuffle(std::span<DecompositionMethod>(order), rng);
  Decomposition best;
  bool have = false;
  for (DecompositionMethod m: order) {
    Decomposition d = decompose(mol, m);
    if (d.fragments.size() >= 3)
      return d;
    if (!have || d.fragments.size() > best.fragments.size()) {
      best = std::move(d);
      have = true;
    }
  }
  return best;
}

MolGraph reassemble(std::span<const Fragment> fragments) {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::map<int, std::vector<int>> dummies_by_label;
  for (const Fragment &f: fragments) {
    const int base = static_cast<int>(atoms.size());
    for (int i = 0; i < f.graph.num_atoms(); ++i) {
      atoms.push_back(f.graph.atom(i));
      if (f.graph.atom(i).is_dummy() && f.graph.atom(i).attachment_label)
        dummies_by_label[*f.graph.atom(i).attachment_label].push_back(base + i);
    }
    for (const Bond &b: f.graph.bonds())
      bonds.push_back({ b.begin + base, b.end + base, b.order, 0 });
  }
  const MolGraph joined(atoms, bonds);
  std::vector<bool> drop(atoms.size(), false);
  for (const auto &[label, ds]: dummies_by_label) {
    if (ds.size() != 2)
      continue;
    const Neighbor a = joined.neighbors(ds[0])[0];
    const Neighbor b = joined.neighbors(ds[1])[0];
    bonds.push_back({ a.atom, b.atom, joined.bond(a.bond).order, 0 });
    drop[ds[0]] = drop[ds[1]] = true;
  }
  std::vector<int> remap(atoms.size(), -1);
  std::vector<Atom> out_atoms;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (drop[i])
      continue;
    remap[i] = static_cast<int>(out_atoms.size());
    out_atoms.push_back(atoms[i]);
  }
  std::vector<Bond> out_bonds;
  for (const Bond &b: bonds)
    if (!drop[b.begin] && !drop[b.end])
      out_bonds.push_back({ remap[b.begin], remap[b.end], b.order, 0 });
  return MolGraph(std::move(out_atoms), std::move(out_bonds));
}

MolGraph remove_fragment(const MolGraph &mol, const Fragment &frag,
                         Removal removal) {
  std::vector<bool> removed(mol.num_atoms(), false);
  for (int a: frag.host_atom_indices) {
    if (a < 0 || a >= mol.num_atoms())
      throw Error(ErrorCode::kInvalidArgument,
                  "fragment does not belong to the molecule");
    removed[a] = true;
  }
  std::vector<Atom> atoms = mol.atoms();
  std::vector<Bond> bonds;
  for (const Bond &b: mol.bonds())
    if (!removed[b.begin] && !removed[b.end])
      bonds.push_back({ b.begin, b.end, b.order, 0 });
  for (const AttachmentPair &p: frag.attachment_pairs) {
    if (removed[p.host_atom])
      continue;
    if (removal == Removal::kReplaceWithH) {
      atoms[p.host_atom].hydrogens += valence_contribution(p.order);
    } else {
      Atom cap;
      cap.atomic_number = 6;
      cap.hydrogens = 4 - valence_contribution(p.order);
      atoms.push_back(cap);
      removed.push_back(false);
      bonds.push_back({ p.host_atom, static_cast<int>(atoms.size()) - 1,
                        p.order == BondOrder::kAromatic ? BondOrder::kSingle
                                                        : p.order,
                        0 });
    }
  }
  std::vector<int> keep;
  for (int i = 0; i < static_cast<int>(atoms.size()); ++i)
    if (!removed[i])
      keep.push_back(i);
  if (keep.empty())
    throw Error(ErrorCode::kEmptyRemainder, "removing the fragment leaves nothing");
  const MolGraph rest = MolGraph(std::move(atoms), std::move(bonds)).subgraph(keep);

  const auto comps = rest.components();
  if (comps.size() == 1)
    return rest;
  MolGraph best;
  int best_heavy = -1;
  std::string best_smiles;
  for (const std::vector<int> &c: comps) {
    MolGraph part = rest.subgraph(c);
    const int heavy = part.num_heavy_atoms();
    std::string s = canonical_smiles(part);
    if (heavy > best_heavy || (heavy == best_heavy && s < best_smiles)) {
      best = std::move(part);
      best_heavy = heavy;
      best_smiles = std::move(s);
    }
  }
  return best;
}

std::vector<AttributionRecord> attribute(const MolGraph &mol,
                                         const Decomposition &decomp,
                                         const PropertyOracle &oracle,
                                         Removal removal) {
  const double base = evaluate(oracle, mol);
  std::vector<AttributionRecord> out;
  out.reserve(decomp.fragments.size());
  for (const Fragment &f: decomp.fragments) {
    double rest;
    try {
      rest = evaluate(oracle, remove_fragment(mol, f, removal));
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kEmptyRemainder)
        throw;
      rest = evaluate(oracle, MolGraph());
    }
    const double delta = base - rest;
    const int heavy = std::max(1, f.num_heavy_atoms());
    out.push_back({ f, oracle.id, removal, delta, delta / heavy });
  }
  return out;
}

}  // namespace forge
