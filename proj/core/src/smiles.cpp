//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>

#include "forge/element.hpp"
#include "forge/error.hpp"

namespace forge {
namespace {

struct PendingBond {
  BondOrder order;
  char direction;
  std::size_t offset;
};

struct RingOpen {
  int atom;
  std::optional<PendingBond> bond;
  std::size_t offset;
};

class SmilesParser {
public:
  explicit SmilesParser(std::string_view text): text_(text) { }

  MolGraph parse() {
    while (pos_ < text_.size())
      step();
    if (!branches_.empty())
      throw Error(ErrorCode::kUnbalancedParen, "unclosed branch '('",
                  branch_offsets_.back());
    if (!rings_.empty())
      throw Error(ErrorCode::kUnbalancedRing,
                  "unclosed ring bond " + std::to_string(rings_.begin()->first),
                  rings_.begin()->second.offset);
    if (pending_)
      throw Error(ErrorCode::kUnknownToken, "bond without a following atom",
                  pending_->offset);
    return finish();
  }

private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void step() {
    const char c = peek();
    const std::size_t start = pos_;
    switch (c) {
    case '(':
      if (prev_ < 0)
        throw Error(ErrorCode::kUnbalancedParen, "branch without a preceding atom",
                    start);
      if (pending_)
        throw Error(ErrorCode::kUnknownToken, "bond before '('", start);
      branches_.push_back(prev_);
      branch_offsets_.push_back(start);
      ++pos_;
      return;
    case ')':
      if (branches_.empty())
        throw Error(ErrorCode::kUnbalancedParen, "unmatched ')'", start);
      if (pending_)
        throw Error(ErrorCode::kUnknownToken, "bond before ')'", start);
      prev_ = branches_.back();
      branches_.pop_back();
      branch_offsets_.pop_back();
      ++pos_;
      return;
    case '-':
    case '=':
    case '#':
    case ':':
    case '/':
    case '\\':
      set_pending(c, start);
      ++pos_;
      return;
    case '.':
      if (pending_ || prev_ < 0)
        throw Error(ErrorCode::kUnknownToken, "misplaced '.'", start);
      prev_ = -1;
      ++pos_;
      return;
    case '%': {
      if (!std::isdigit(static_cast<unsigned char>(peek(1)))
          || !std::isdigit(static_cast<unsigned char>(peek(2))))
        throw Error(ErrorCode::kUnknownToken, "malformed '%nn' ring bond",
                    start);
      const int num = (peek(1) - '0') * 10 + (peek(2) - '0');
      pos_ += 3;
      ring_bond(num, start);
      return;
    }
    case '[':
      bracket_atom();
      return;
    default:
      break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ++pos_;
      ring_bond(c - '0', start);
      return;
    }
    organic_atom();
  }

  void set_pending(char c, std::size_t offset) {
    if (pending_)
      throw Error(ErrorCode::kUnknownToken, "consecutive bond symbols", offset);
    if (prev_ < 0)
      throw Error(ErrorCode::kUnknownToken, "bond without a preceding atom",
                  offset);
    BondOrder order = BondOrder::kSingle;
    char dir = 0;
    switch (c) {
    case '=':
      order = BondOrder::kDouble;
      break;
    case '#':
      order = BondOrder::kTriple;
      break;
    case ':':
      order = BondOrder::kAromatic;
      break;
    case '/':
    case '\\':
      dir = c;
      break;
    default:
      break;
    }
    pending_ = PendingBond { order, dir, offset };
  }

  void organic_atom() {
    const std::size_t start = pos_;
    const char c = peek();
    Atom atom;
    std::size_t len = 1;
    switch (c) {
    case 'B':
      if (peek(1) == 'r') {
        atom.atomic_number = 35;
        len = 2;
      } else {
        atom.atomic_number = 5;
      }
      break;
    case 'C':
      if (peek(1) == 'l') {
        atom.atomic_number = 17;
        len = 2;
      } else {
        atom.atomic_number = 6;
      }
      break;
    case 'N':
      atom.atomic_number = 7;
      break;
    case 'O':
      atom.atomic_number = 8;
      break;
    case 'P':
      atom.atomic_number = 15;
      break;
    case 'S':
      atom.atomic_number = 16;
      break;
    case 'F':
      atom.atomic_number = 9;
      break;
    case 'I':
      atom.atomic_number = 53;
      break;
    case 'b':
    case 'c':
    case 'n':
    case 'o':
    case 'p':
    case 's':
      atom.atomic_number = *atomic_number_of(
          std::string(1, static_cast<char>(std::toupper(c))));
      atom.aromatic = true;
      break;
    case '*':
      atom.atomic_number = 0;
      break;
    default:
      throw Error(ErrorCode::kUnknownToken,
                  std::string("unexpected character '") + c + "'", start);
    }
    pos_ += len;
    add_atom(atom, /*bracket=*/atom.is_dummy(), start);
  }

  int read_number() {
    int value = 0;
    bool any = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (peek() - '0');
      ++pos_;
      any = true;
      if (value > 100000)
        throw Error(ErrorCode::kUnknownToken, "number too large", pos_);
    }
    return any ? value : -1;
  }

  void bracket_atom() {
    const std::size_t start = pos_;
    ++pos_;  // '['
    Atom atom;
    const int isotope = read_number();

    // Element symbol.
    const char c = peek();
    if (c == '*') {
      atom.atomic_number = 0;
      ++pos_;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      std::string sym(1, static_cast<char>(std::toupper(c)));
      // Two-letter aromatic symbols: se, as.
      if ((c == 's' && peek(1) == 'e') || (c == 'a' && peek(1) == 's')) {
        sym += peek(1);
        pos_ += 2;
      } else {
        ++pos_;
      }
      const auto z = atomic_number_of(sym);
      if (!z || !can_be_aromatic(*z))
        throw Error(ErrorCode::kUnknownToken,
                    "unknown aromatic symbol '" + sym + "'", start + 1);
      atom.atomic_number = *z;
      atom.aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::optional<int> z;
      if (std::islower(static_cast<unsigned char>(peek(1)))) {
        z = atomic_number_of(text_.substr(pos_, 2));
        if (z)
          pos_ += 2;
      }
      if (!z) {
        z = atomic_number_of(text_.substr(pos_, 1));
        if (!z)
          throw Error(ErrorCode::kUnknownToken,
                      "unknown element in bracket atom", pos_);
        ++pos_;
      }
      atom.atomic_number = *z;
    } else {
      throw Error(ErrorCode::kUnknownToken, "missing element in bracket atom",
                  pos_);
    }

    if (peek() == '@') {
      ++pos_;
      atom.chirality = Chirality::kAnticlockwise;
      if (peek() == '@') {
        ++pos_;
        atom.chirality = Chirality::kClockwise;
      }
    }

    if (peek() == 'H') {
      ++pos_;
      const int h = read_number();
      atom.hydrogens = h < 0 ? 1 : h;
    }

    if (peek() == '+' || peek() == '-') {
      const int sign = peek() == '+' ? 1 : -1;
      const char sym = peek();
      ++pos_;
      int magnitude = 1;
      if (peek() == sym) {
        ++pos_;
        magnitude = 2;
      } else {
        const int n = read_number();
        if (n >= 0)
          magnitude = n;
      }
      atom.formal_charge = sign * magnitude;
    }

    int atom_class = -1;
    if (peek() == ':') {
      ++pos_;
      atom_class = read_number();
      if (atom_class < 0)
        throw Error(ErrorCode::kUnknownToken, "missing atom class", pos_);
    }

    if (peek() != ']')
      throw Error(ErrorCode::kUnknownToken, "malformed bracket atom", pos_);
    ++pos_;

    if (atom.is_dummy()) {
      if (isotope >= 0)
        atom.attachment_label = isotope;
      else if (atom_class >= 0)
        atom.attachment_label = atom_class;
    } else if (isotope >= 0) {
      atom.isotope = isotope;
    }
    add_atom(atom, /*bracket=*/true, start);
  }

  void add_atom(const Atom &atom, bool bracket, std::size_t offset) {
    const int idx = static_cast<int>(atoms_.size());
    atoms_.push_back(atom);
    bracket_.push_back(bracket);
    offsets_.push_back(offset);
    if (prev_ >= 0)
      add_bond(prev_, idx, pending_, offset);
    else if (pending_)
      throw Error(ErrorCode::kUnknownToken, "bond without a preceding atom",
                  pending_->offset);
    pending_.reset();
    prev_ = idx;
  }

  void add_bond(int a, int b, const std::optional<PendingBond> &spec,
                std::size_t offset) {
    if (a == b)
      throw Error(ErrorCode::kUnbalancedRing, "ring bond to itself", offset);
    for (const Bond &existing: bonds_)
      if ((existing.begin == a && existing.end == b)
          || (existing.begin == b && existing.end == a))
        throw Error(ErrorCode::kUnbalancedRing, "duplicate bond", offset);
    Bond bond { a, b, BondOrder::kSingle, 0 };
    const bool both_aromatic = atoms_[a].aromatic && atoms_[b].aromatic;
    if (spec) {
      bond.order = spec->order;
      bond.direction = spec->direction;
      if (bond.order == BondOrder::kAromatic && !both_aromatic)
        throw Error(ErrorCode::kUnknownToken,
                    "aromatic bond between non-aromatic atoms", spec->offset);
    } else if (both_aromatic) {
      bond.order = BondOrder::kAromatic;
    }
    bonds_.push_back(bond);
  }

  void ring_bond(int num, std::size_t offset) {
    if (prev_ < 0)
      throw Error(ErrorCode::kUnbalancedRing, "ring bond without an atom",
                  offset);
    auto it = rings_.find(num);
    if (it == rings_.end()) {
      rings_.emplace(num, RingOpen { prev_, pending_, offset });
      pending_.reset();
      return;
    }
    std::optional<PendingBond> spec = it->second.bond;
    if (pending_) {
      if (spec
          && (spec->order != pending_->order
              || (spec->direction == 0) != (pending_->direction == 0)))
        throw Error(ErrorCode::kUnknownToken, "conflicting ring bond symbols",
                    offset);
      spec = pending_;
    }
    add_bond(it->second.atom, prev_, spec, offset);
    rings_.erase(it);
    pending_.reset();
  }

  MolGraph finish() {
    // Fold explicit neutral [H] atoms into their heavy neighbour.
    std::vector<int> h_neighbor(atoms_.size(), -1);
    std::vector<int> degree(atoms_.size(), 0);
    for (const Bond &b: bonds_) {
      ++degree[b.begin];
      ++degree[b.end];
    }
    for (const Bond &b: bonds_) {
      for (auto [h, other]: { std::pair { b.begin, b.end },
                              std::pair { b.end, b.begin } }) {
        const Atom &a = atoms_[h];
        if (a.atomic_number == 1 && !a.isotope && a.formal_charge == 0
            && a.hydrogens == 0 && degree[h] == 1 && atoms_[other].is_heavy()
            && b.order == BondOrder::kSingle)
          h_neighbor[h] = other;
      }
    }
    std::vector<int> remap(atoms_.size(), -1);
    std::vector<Atom> atoms;
    std::vector<bool> bracket;
    std::vector<std::size_t> offsets;
    std::vector<int> extra_h(atoms_.size(), 0);
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (h_neighbor[i] >= 0 && bracket_[h_neighbor[i]])
        ++extra_h[h_neighbor[i]];
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (h_neighbor[i] >= 0)
        continue;
      remap[i] = static_cast<int>(atoms.size());
      atoms.push_back(atoms_[i]);
      atoms.back().hydrogens += extra_h[i];
      bracket.push_back(bracket_[i]);
      offsets.push_back(offsets_[i]);
    }
    std::vector<Bond> bonds;
    for (const Bond &b: bonds_) {
      if (remap[b.begin] < 0 || remap[b.end] < 0)
        continue;
      Bond nb = b;
      nb.begin = remap[b.begin];
      nb.end = remap[b.end];
      bonds.push_back(nb);
    }

    MolGraph skeleton(atoms, bonds);
    for (int i = 0; i < skeleton.num_atoms(); ++i) {
      if (bracket[i])
        continue;
      const auto h = implicit_hydrogens(skeleton, i);
      if (!h)
        throw Error(ErrorCode::kValenceError,
                    "too many bonds on "
                        + std::string(element(atoms[i].atomic_number).symbol)
                        + " atom",
                    offsets[i]);
      atoms[i].hydrogens = *h;
    }
    MolGraph mol(std::move(atoms), std::move(bonds));
    try {
      check_valence(mol);
    } catch (const Error &) {
      for (int i = 0; i < mol.num_atoms(); ++i) {
        const Atom &a = mol.atom(i);
        const auto allowed = allowed_valences(a.atomic_number, a.formal_charge);
        if (!a.is_dummy() && !allowed.empty()
            && mol.explicit_valence(i) + a.hydrogens > allowed.back())
          throw Error(ErrorCode::kValenceError,
                      "valence exceeded on "
                          + std::string(element(a.atomic_number).symbol)
                          + " atom",
                      offsets[i]);
      }
      throw;
    }
    return mol;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int prev_ = -1;
  std::optional<PendingBond> pending_;
  std::vector<int> branches_;
  std::vector<std::size_t> branch_offsets_;
  std::map<int, RingOpen> rings_;
  std::vector<Atom> atoms_;
  std::vector<bool> bracket_;
  std::vector<std::size_t> offsets_;
  std::vector<Bond> bonds_;
};

// ---------------------------------------------------------------------------
// Canonical ranking

int bond_code(BondOrder order) {
  return static_cast<int>(order);
}

// Dense ranks of `keys` (equal keys share a rank).
template <class Key>
std::vector<int> dense_ranks(const std::vector<Key> &keys, int *num_classes) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> rank(n);
  int cls = -1;
  for (int i = 0; i < n; ++i) {
    if (i == 0 || keys[idx[i - 1]] < keys[idx[i]])
      ++cls;
    rank[idx[i]] = cls;
  }
  *num_classes = cls + 1;
  return rank;
}

std::vector<int> refine(const MolGraph &mol, std::vector<int> cls,
                        int *num_classes) {
  const int n = mol.num_atoms();
  using Key = std::pair<int, std::vector<std::int64_t>>;
  int count = *num_classes;
  while (true) {
    std::vector<Key> keys(n);
    for (int a = 0; a < n; ++a) {
      keys[a].first = cls[a];
      auto &sig = keys[a].second;
      for (const Neighbor &nb: mol.neighbors(a))
        sig.push_back(static_cast<std::int64_t>(cls[nb.atom]) * 8
                      + bond_code(mol.bond(nb.bond).order));
      std::sort(sig.begin(), sig.end());
    }
    int next_count = 0;
    std::vector<int> next = dense_ranks(keys, &next_count);
    cls = std::move(next);
    if (next_count == count)
      break;
    count = next_count;
  }
  *num_classes = count;
  return cls;
}

}  // namespace

MolGraph parse_smiles(std::string_view text) {
  if (text.empty())
    return MolGraph();
  return SmilesParser(text).parse();
}

MolGraph normalize(const MolGraph &mol) {
  std::vector<Atom> atoms = mol.atoms();
  bool changed = false;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    Atom &a = atoms[i];
    if (!a.isotope || !is_organic_subset(a.atomic_number))
      continue;
    a.isotope.reset();
    if (a.formal_charge == 0) {
      if (auto h = implicit_hydrogens(mol, i))
        a.hydrogens = *h;
    }
    changed = true;
  }
  if (!changed)
    return mol;
  return MolGraph(std::move(atoms), mol.bonds());
}

std::vector<int> canonical_ranks(const MolGraph &mol) {
  const int n = mol.num_atoms();
  using Init = std::tuple<int, int, int, int, int, int, int, int>;
  std::vector<Init> init(n);
  for (int a = 0; a < n; ++a) {
    const Atom &at = mol.atom(a);
    // Degree first so write-out starts at a chain terminus.
    init[a] = { mol.degree(a),
                at.atomic_number,
                at.isotope.value_or(0),
                at.attachment_label.value_or(-1),
                at.aromatic ? 1 : 0,
                at.formal_charge,
                at.hydrogens,
                mol.atom_in_ring(a) ? 1 : 0 };
  }
  int count = 0;
  std::vector<int> cls = dense_ranks(init, &count);
  cls = refine(mol, std::move(cls), &count);
  while (count < n) {
    // Break the lowest tied class by promoting its first member.
    std::vector<int> size(count, 0);
    for (int c: cls)
      ++size[c];
    int target = 0;
    while (size[target] < 2)
      ++target;
    int chosen = -1;
    for (int a = 0; a < n; ++a) {
      if (cls[a] == target) {
        chosen = a;
        break;
      }
    }
    for (int a = 0; a < n; ++a)
      cls[a] = cls[a] * 2 + ((cls[a] == target && a != chosen) ? 1 : 0);
    std::vector<int> compact = dense_ranks(cls, &count);
    cls = refine(mol, std::move(compact), &count);
  }
  return cls;
}

namespace {

std::string atom_text(const MolGraph &mol, int i) {
  const Atom &a = mol.atom(i);
  if (a.is_dummy()) {
    if (a.attachment_label)
      return "[" + std::to_string(*a.attachment_label) + "*]";
    return "*";
  }
  std::string sym(element(a.atomic_number).symbol);
  if (a.aromatic)
    sym[0] = static_cast<char>(std::tolower(sym[0]));
  const bool organic = is_organic_subset(a.atomic_number)
                       && (!a.aromatic || a.atomic_number != 9);
  if (organic && a.formal_charge == 0 && !a.isotope) {
    const auto h = implicit_hydrogens(mol, i);
    if (h && *h == a.hydrogens)
      return sym;
  }
  std::string out = "[";
  if (a.isotope)
    out += std::to_string(*a.isotope);
  out += sym;
  if (a.hydrogens > 0) {
    out += 'H';
    if (a.hydrogens > 1)
      out += std::to_string(a.hydrogens);
  }
  if (a.formal_charge != 0) {
    out += a.formal_charge > 0 ? '+' : '-';
    const int mag = a.formal_charge > 0 ? a.formal_charge : -a.formal_charge;
    if (mag > 1)
      out += std::to_string(mag);
  }
  out += ']';
  return out;
}

std::string bond_text(const MolGraph &mol, int bond) {
  const Bond &b = mol.bond(bond);
  const bool both_aromatic =
      mol.atom(b.begin).aromatic && mol.atom(b.end).aromatic;
  switch (b.order) {
  case BondOrder::kSingle:
    return both_aromatic ? "-" : "";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  case BondOrder::kAromatic:
    return both_aromatic ? "" : ":";
  }
  return "";
}

class SmilesWriter {
public:
  SmilesWriter(const MolGraph &mol, std::span<const int> ranks)
      : mol_(mol), ranks_(ranks.begin(), ranks.end()),
        visited_(mol.num_atoms(), false), closure_(mol.num_bonds(), false),
        preorder_(mol.num_atoms(), -1), children_(mol.num_atoms()),
        closures_(mol.num_atoms()) { }

  std::string write() {
    const int n = mol_.num_atoms();
    std::vector<int> by_rank(n);
    std::iota(by_rank.begin(), by_rank.end(), 0);
    std::sort(by_rank.begin(), by_rank.end(),
              [&](int a, int b) { return ranks_[a] < ranks_[b]; });
    std::string out;
    for (int start: by_rank) {
      if (visited_[start])
        continue;
      plan(start, -1);
      if (!out.empty())
        out += '.';
      emit(start, out);
    }
    return out;
  }

private:
  std::vector<Neighbor> sorted_neighbors(int a) const {
    auto nb = mol_.neighbors(a);
    std::vector<Neighbor> v(nb.begin(), nb.end());
    std::sort(v.begin(), v.end(), [&](const Neighbor &l, const Neighbor &r) {
      return ranks_[l.atom] < ranks_[r.atom];
    });
    return v;
  }

  void plan(int root, int parent_bond) {
    struct Frame {
      int atom;
      int parent_bond;
      std::vector<Neighbor> nbrs;
      std::size_t next;
    };
    std::vector<Frame> stack;
    visited_[root] = true;
    preorder_[root] = counter_++;
    stack.push_back({ root, parent_bond, sorted_neighbors(root), 0 });
    while (!stack.empty()) {
      Frame &f = stack.back();
      if (f.next == f.nbrs.size()) {
        stack.pop_back();
        continue;
      }
      const Neighbor nb = f.nbrs[f.next++];
      if (nb.bond == f.parent_bond || closure_[nb.bond])
        continue;
      if (visited_[nb.atom]) {
        closure_[nb.bond] = true;
        closures_[f.atom].push_back(nb);
        closures_[nb.atom].push_back({ f.atom, nb.bond });
        continue;
      }
      children_[f.atom].push_back(nb);
      visited_[nb.atom] = true;
      preorder_[nb.atom] = counter_++;
      const int child = nb.atom;
      stack.push_back({ child, nb.bond, sorted_neighbors(child), 0 });
    }
  }

  std::string ring_label(int digit) const {
    if (digit < 10)
      return std::string(1, static_cast<char>('0' + digit));
    return "%" + std::to_string(digit);
  }

  int alloc_digit() {
    for (int d = 1; d < 100; ++d) {
      if (!in_use_[d]) {
        in_use_[d] = true;
        return d;
      }
    }
    throw Error(ErrorCode::kInvalidArgument, "too many open ring bonds");
  }

  void emit(int root, std::string &out) {
    struct Frame {
      int atom;
      std::size_t next;  // next child to emit
    };
    std::vector<Frame> stack;
    auto open_atom = [&](int a) {
      out += atom_text(mol_, a);
      // Closing digits first (partners written earlier), then openings in
      // rank order of the partner.
      std::vector<Neighbor> closing, opening;
      for (const Neighbor &nb: closures_[a])
        (preorder_[nb.atom] < preorder_[a] ? closing : opening).push_back(nb);
      std::sort(closing.begin(), closing.end(),
                [&](const Neighbor &l, const Neighbor &r) {
                  return preorder_[l.atom] < preorder_[r.atom];
                });
      std::sort(opening.begin(), opening.end(),
                [&](const Neighbor &l, const Neighbor &r) {
                  return ranks_[l.atom] < ranks_[r.atom];
                });
      for (const Neighbor &nb: closing) {
        const int d = digit_of_bond_.at(nb.bond);
        out += ring_label(d);
        in_use_[d] = false;
      }
      for (const Neighbor &nb: opening) {
        const int d = alloc_digit();
        digit_of_bond_[nb.bond] = d;
        out += bond_text(mol_, nb.bond);
        out += ring_label(d);
      }
    };
    open_atom(root);
    stack.push_back({ root, 0 });
    while (!stack.empty()) {
      Frame &f = stack.back();
      const auto &kids = children_[f.atom];
      if (f.next == kids.size()) {
        stack.pop_back();
        if (!stack.empty()) {
          const Frame &p = stack.back();
          // A finished non-last child closes its branch.
          if (p.next < children_[p.atom].size())
            out += ')';
        }
        continue;
      }
      const Neighbor nb = kids[f.next++];
      if (f.next < kids.size())
        out += '(';
      out += bond_text(mol_, nb.bond);
      open_atom(nb.atom);
      stack.push_back({ nb.atom, 0 });
    }
  }

  const MolGraph &mol_;
  std::vector<int> ranks_;
  std::vector<bool> visited_;
  std::vector<bool> closure_;
  std::vector<int> preorder_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<Neighbor>> closures_;
  std::map<int, int> digit_of_bond_;
  bool in_use_[100] = {};
  int counter_ = 0;
};

}  // namespace

std::string write_smiles(const MolGraph &mol, std::span<const int> ranks) {
  return SmilesWriter(mol, ranks).write();
}

std::string canonical_smiles(const MolGraph &mol) {
  const std::vector<int> ranks = canonical_ranks(mol);
  return write_smiles(mol, ranks);
}

std::string canonicalize(std::string_view smiles) {
  return canonical_smiles(parse_smiles(smiles));
}

}  // namespace forge
