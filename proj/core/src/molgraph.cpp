//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/molgraph.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "forge/element.hpp"
#include "forge/error.hpp"

namespace forge {

MolGraph::MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  const int n = num_atoms();
  for (const Bond &b: bonds_) {
    if (b.begin < 0 || b.end < 0 || b.begin >= n || b.end >= n)
      throw Error(ErrorCode::kInvalidArgument, "bond index out of range");
    if (b.begin == b.end)
      throw Error(ErrorCode::kInvalidArgument,
                  "self-loop on atom " + std::to_string(b.begin));
  }
  build_adjacency();
  for (int a = 0; a < n; ++a) {
    auto nb = neighbors(a);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (nb[i].atom == nb[j].atom)
          throw Error(ErrorCode::kInvalidArgument,
                      "parallel bonds between atoms " + std::to_string(a)
                          + " and " + std::to_string(nb[i].atom));
  }
  perceive_rings();
}

void MolGraph::build_adjacency() {
  const int n = num_atoms();
  offsets_.assign(n + 1, 0);
  for (const Bond &b: bonds_) {
    ++offsets_[b.begin + 1];
    ++offsets_[b.end + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  nbrs_.resize(offsets_.back());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int i = 0; i < num_bonds(); ++i) {
    const Bond &b = bonds_[i];
    nbrs_[fill[b.begin]++] = { b.end, i };
    nbrs_[fill[b.end]++] = { b.begin, i };
  }
}

std::optional<int> MolGraph::bond_between(int a, int b) const {
  for (const Neighbor &nb: neighbors(a))
    if (nb.atom == b)
      return nb.bond;
  return std::nullopt;
}

bool MolGraph::atom_in_ring_of_size(int atom, int size) const {
  for (const auto &ring: rings_)
    if (static_cast<int>(ring.size()) == size
        && std::find(ring.begin(), ring.end(), atom) != ring.end())
      return true;
  return false;
}

int MolGraph::num_heavy_atoms() const {
  return static_cast<int>(std::count_if(
      atoms_.begin(), atoms_.end(), [](const Atom &a) { return a.is_heavy(); }));
}

bool MolGraph::has_dummy() const {
  return std::any_of(atoms_.begin(), atoms_.end(),
                     [](const Atom &a) { return a.is_dummy(); });
}

int MolGraph::explicit_valence(int atom) const {
  int v = 0;
  for (const Neighbor &nb: neighbors(atom))
    v += valence_contribution(bonds_[nb.bond].order);
  return v;
}

std::vector<std::vector<int>> MolGraph::components() const {
  const int n = num_atoms();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0)
      continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack { s };
    comp[s] = id;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      out[id].push_back(a);
      for (const Neighbor &nb: neighbors(a)) {
        if (comp[nb.atom] < 0) {
          comp[nb.atom] = id;
          stack.push_back(nb.atom);
        }
      }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

MolGraph MolGraph::subgraph(std::span<const int> atoms) const {
  std::vector<int> index(num_atoms(), -1);
  std::vector<Atom> new_atoms;
  new_atoms.reserve(atoms.size());
  for (int a: atoms) {
    index[a] = static_cast<int>(new_atoms.size());
    new_atoms.push_back(atoms_[a]);
  }
  std::vector<Bond> new_bonds;
  for (const Bond &b: bonds_) {
    if (index[b.begin] >= 0 && index[b.end] >= 0) {
      Bond nb = b;
      nb.begin = index[b.begin];
      nb.end = index[b.end];
      new_bonds.push_back(nb);
    }
  }
  return MolGraph(std::move(new_atoms), std::move(new_bonds));
}

MolGraph MolGraph::permuted(std::span<const int> order) const {
  std::vector<int> index(num_atoms(), -1);
  std::vector<Atom> new_atoms;
  new_atoms.reserve(order.size());
  for (int a: order) {
    index[a] = static_cast<int>(new_atoms.size());
    new_atoms.push_back(atoms_[a]);
  }
  std::vector<Bond> new_bonds = bonds_;
  for (Bond &b: new_bonds) {
    b.begin = index[b.begin];
    b.end = index[b.end];
  }
  return MolGraph(std::move(new_atoms), std::move(new_bonds));
}

namespace {

using BitRow = std::vector<std::uint64_t>;

void set_bit(BitRow &row, int i) {
  row[i >> 6] |= std::uint64_t { 1 } << (i & 63);
}

bool test_bit(const BitRow &row, int i) {
  return (row[i >> 6] >> (i & 63)) & 1U;
}

// Bridges via iterative Tarjan low-link.
std::vector<bool> find_ring_bonds(const MolGraph &mol) {
  const int n = mol.num_atoms();
  std::vector<bool> in_ring(mol.num_bonds(), true);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0)
      continue;
    std::vector<Frame> stack { { root, -1, 0 } };
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame &f = stack.back();
      auto nb = mol.neighbors(f.atom);
      if (f.next < nb.size()) {
        const Neighbor e = nb[f.next++];
        if (e.bond == f.parent_bond)
          continue;
        if (disc[e.atom] < 0) {
          disc[e.atom] = low[e.atom] = timer++;
          stack.push_back({ e.atom, e.bond, 0 });
        } else {
          low[f.atom] = std::min(low[f.atom], disc[e.atom]);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          Frame &parent = stack.back();
          low[parent.atom] = std::min(low[parent.atom], low[done.atom]);
          if (low[done.atom] > disc[parent.atom])
            in_ring[done.parent_bond] = false;
        }
      }
    }
  }
  return in_ring;
}

struct Cycle {
  std::vector<int> bonds;  // sorted
  BitRow bits;
};

}  // namespace

// Horton candidate cycles followed by GF(2) elimination in order of length
// yields a minimum cycle basis (the SSSR for molecular graphs).
void MolGraph::perceive_rings() {
  const int n = num_atoms();
  const int m = num_bonds();
  bond_in_ring_ = find_ring_bonds(*this);
  atom_ring_count_.assign(n, 0);
  rings_.clear();
  ring_bonds_.clear();

  const int rank = m - n + static_cast<int>(components().size());
  if (rank <= 0)
    return;

  const std::size_t words = (m + 63) / 64;
  std::vector<Cycle> candidates;
  std::vector<int> dist(n), parent_bond(n);
  for (int root = 0; root < n; ++root) {
    bool has_ring_bond = false;
    for (const Neighbor &nb: neighbors(root))
      has_ring_bond |= bond_in_ring_[nb.bond];
    if (!has_ring_bond)
      continue;
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent_bond.begin(), parent_bond.end(), -1);
    std::queue<int> q;
    q.push(root);
    dist[root] = 0;
    while (!q.empty()) {
      const int a = q.front();
      q.pop();
      for (const Neighbor &nb: neighbors(a)) {
        if (!bond_in_ring_[nb.bond] || dist[nb.atom] >= 0)
          continue;
        dist[nb.atom] = dist[a] + 1;
        parent_bond[nb.atom] = nb.bond;
        q.push(nb.atom);
      }
    }
    auto path_to_root = [&](int a) {
      std::vector<int> path;
      while (a != root) {
        const int b = parent_bond[a];
        path.push_back(b);
        a = bonds_[b].other(a);
      }
      return path;
    };
    for (int bi = 0; bi < m; ++bi) {
      if (!bond_in_ring_[bi])
        continue;
      const int x = bonds_[bi].begin, y = bonds_[bi].end;
      if (dist[x] < 0 || dist[y] < 0 || parent_bond[x] == bi
          || parent_bond[y] == bi)
        continue;
      std::vector<int> px = path_to_root(x), py = path_to_root(y);
      // Paths must meet only at the root.
      std::vector<int> sx = px, sy = py;
      std::sort(sx.begin(), sx.end());
      std::sort(sy.begin(), sy.end());
      std::vector<int> common;
      std::set_intersection(sx.begin(), sx.end(), sy.begin(), sy.end(),
                            std::back_inserter(common));
      if (!common.empty())
        continue;
      std::vector<bool> seen(n, false);
      bool simple = true;
      int a = x;
      seen[a] = true;
      for (int b: px) {
        a = bonds_[b].other(a);
        seen[a] = true;
      }
      a = y;
      if (seen[a])
        simple = false;
      for (int b: py) {
        if (!simple)
          break;
        a = bonds_[b].other(a);
        if (seen[a] && a != root)
          simple = false;
      }
      if (!simple)
        continue;
      Cycle c;
      c.bonds = px;
      c.bonds.insert(c.bonds.end(), py.begin(), py.end());
      c.bonds.push_back(bi);
      std::sort(c.bonds.begin(), c.bonds.end());
      candidates.push_back(std::move(c));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Cycle &l, const Cycle &r) {
              if (l.bonds.size() != r.bonds.size())
                return l.bonds.size() < r.bonds.size();
              return l.bonds < r.bonds;
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const Cycle &l, const Cycle &r) {
                                 return l.bonds == r.bonds;
                               }),
                   candidates.end());

  std::vector<BitRow> basis;  // row-reduced, each with a distinct pivot
  std::vector<int> pivots;
  for (Cycle &c: candidates) {
    if (static_cast<int>(rings_.size()) >= rank)
      break;
    c.bits.assign(words, 0);
    for (int b: c.bonds)
      set_bit(c.bits, b);
    BitRow row = c.bits;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (test_bit(row, pivots[i]))
        for (std::size_t w = 0; w < words; ++w)
          row[w] ^= basis[i][w];
    int pivot = -1;
    for (int b = 0; b < m; ++b) {
      if (test_bit(row, b)) {
        pivot = b;
        break;
      }
    }
    if (pivot < 0)
      continue;
    basis.push_back(std::move(row));
    pivots.push_back(pivot);

    // Walk the cycle to produce an ordered atom list.
    std::vector<int> order;
    std::vector<bool> used(c.bonds.size(), false);
    int start = bonds_[c.bonds[0]].begin, cur = start;
    used[0] = true;
    order.push_back(start);
    cur = bonds_[c.bonds[0]].end;
    while (cur != start) {
      order.push_back(cur);
      for (std::size_t i = 0; i < c.bonds.size(); ++i) {
        if (!used[i]
            && (bonds_[c.bonds[i]].begin == cur
                || bonds_[c.bonds[i]].end == cur)) {
          used[i] = true;
          cur = bonds_[c.bonds[i]].other(cur);
          break;
        }
      }
    }
    for (int a: order)
      ++atom_ring_count_[a];
    rings_.push_back(std::move(order));
    ring_bonds_.push_back(c.bonds);
  }
}

std::optional<int> implicit_hydrogens(int atomic_number, bool aromatic,
                                      int explicit_valence) {
  std::span<const int> valences = element(atomic_number).valences;
  if (valences.empty())
    return 0;
  if (aromatic) {
    if (explicit_valence > valences.back())
      return std::nullopt;
    return std::max(0, valences.front() - explicit_valence - 1);
  }
  for (int v: valences)
    if (v >= explicit_valence)
      return v - explicit_valence;
  return std::nullopt;
}

std::optional<int> implicit_hydrogens(const MolGraph &mol, int atom) {
  const Atom &a = mol.atom(atom);
  return implicit_hydrogens(a.atomic_number, a.aromatic,
                            mol.explicit_valence(atom));
}

void check_valence(const MolGraph &mol) {
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom &a = mol.atom(i);
    if (a.is_dummy())
      continue;
    if (a.hydrogens < 0)
      throw Error(ErrorCode::kValenceError,
                  "negative hydrogen count on atom " + std::to_string(i));
    std::span<const int> allowed =
        allowed_valences(a.atomic_number, a.formal_charge);
    if (allowed.empty())
      continue;
    const int total = mol.explicit_valence(i) + a.hydrogens;
    if (total > allowed.back())
      throw Error(ErrorCode::kValenceError,
                  "atom " + std::to_string(i) + " ("
                      + std::string(element(a.atomic_number).symbol)
                      + ") has valence " + std::to_string(total));
  }
}

}  // namespace forge
