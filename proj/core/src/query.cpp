//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/query.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "forge/element.hpp"
#include "forge/error.hpp"

namespace forge {

int Query::add_node(Node node) {
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

namespace {

int total_hydrogens(const MolGraph &mol, int atom) {
  int h = mol.atom(atom).hydrogens;
  for (const Neighbor &nb: mol.neighbors(atom))
    if (mol.atom(nb.atom).atomic_number == 1)
      ++h;
  return h;
}

}  // namespace

bool Query::eval_atom(int n, const MolGraph &mol, int atom) const {
  const Node &node = nodes_[n];
  const Atom &a = mol.atom(atom);
  switch (node.kind) {
  case Node::kTrue:
    return true;
  case Node::kAnd:
    return eval_atom(node.lhs, mol, atom) && eval_atom(node.rhs, mol, atom);
  case Node::kOr:
    return eval_atom(node.lhs, mol, atom) || eval_atom(node.rhs, mol, atom);
  case Node::kNot:
    return !eval_atom(node.lhs, mol, atom);
  case Node::kAtomicNum:
    return a.atomic_number == node.value;
  case Node::kAromatic:
    return a.aromatic;
  case Node::kAliphatic:
    return !a.aromatic && !a.is_dummy();
  case Node::kDegree:
    return mol.degree(atom) == node.value;
  case Node::kTotalH:
    return total_hydrogens(mol, atom) == node.value;
  case Node::kConnectivity:
    return mol.degree(atom) + a.hydrogens == node.value;
  case Node::kCharge:
    return a.formal_charge == node.value;
  case Node::kInRing:
    return mol.atom_in_ring(atom);
  case Node::kRingCount:
    return mol.atom_ring_count(atom) == node.value;
  case Node::kRingSize:
    return mol.atom_in_ring_of_size(atom, node.value);
  case Node::kValence: {
    int v = a.hydrogens;
    int aromatic_bonds = 0;
    for (const Neighbor &nb: mol.neighbors(atom)) {
      const BondOrder order = mol.bond(nb.bond).order;
      if (order == BondOrder::kAromatic)
        ++aromatic_bonds;
      else
        v += static_cast<int>(order);
    }
    // Two aromatic bonds contribute three valence units (1.5 each).
    v += (aromatic_bonds * 3) / 2;
    return v == node.value;
  }
  case Node::kRecursive:
    return matches_at(*recursive_[node.value], mol, atom);
  case Node::kBondOrder:
  case Node::kRingBond:
    break;
  }
  return false;
}

bool Query::eval_bond(int n, const MolGraph &mol, int bond) const {
  const Node &node = nodes_[n];
  switch (node.kind) {
  case Node::kTrue:
    return true;
  case Node::kAnd:
    return eval_bond(node.lhs, mol, bond) && eval_bond(node.rhs, mol, bond);
  case Node::kOr:
    return eval_bond(node.lhs, mol, bond) || eval_bond(node.rhs, mol, bond);
  case Node::kNot:
    return !eval_bond(node.lhs, mol, bond);
  case Node::kBondOrder:
    return static_cast<int>(mol.bond(bond).order) == node.value;
  case Node::kRingBond:
    return mol.bond_in_ring(bond);
  default:
    break;
  }
  return false;
}

bool Query::atom_matches(int query_atom, const MolGraph &mol, int atom) const {
  return eval_atom(atom_expr_[query_atom], mol, atom);
}

// ---------------------------------------------------------------------------
// SMARTS parsing

class SmartsParser {
public:
  SmartsParser(std::string_view text, Query &q): text_(text), q_(q) { }

  void parse() {
    int prev = -1;
    int pending = -1;
    std::vector<int> stack;
    std::map<int, std::pair<int, int>> rings;  // digit -> (atom, bond expr)
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(') {
        if (prev < 0)
          fail("branch without atom");
        stack.push_back(prev);
        ++pos_;
      } else if (c == ')') {
        if (stack.empty())
          fail("unmatched ')'");
        prev = stack.back();
        stack.pop_back();
        ++pos_;
      } else if (c == '.') {
        prev = -1;
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        int num;
        if (c == '%') {
          if (pos_ + 2 >= text_.size())
            fail("bad ring number");
          num = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
          pos_ += 3;
        } else {
          num = c - '0';
          ++pos_;
        }
        if (prev < 0)
          fail("ring bond without atom");
        auto it = rings.find(num);
        if (it == rings.end()) {
          rings.emplace(num, std::pair { prev, pending });
        } else {
          int expr = pending >= 0 ? pending : it->second.second;
          if (expr < 0)
            expr = default_bond();
          q_.bonds_.push_back({ it->second.first, prev, expr });
          rings.erase(it);
        }
        pending = -1;
      } else if (is_bond_char(c)) {
        pending = parse_bond_expr();
      } else {
        const int atom = parse_atom();
        if (prev >= 0) {
          const int expr = pending >= 0 ? pending : default_bond();
          q_.bonds_.push_back({ prev, atom, expr });
        }
        pending = -1;
        prev = atom;
      }
    }
    if (!stack.empty() || !rings.empty())
      fail("unbalanced pattern");
    q_.atom_degree_.assign(q_.atom_expr_.size(), 0);
    for (const auto &b: q_.bonds_) {
      ++q_.atom_degree_[b.begin];
      ++q_.atom_degree_[b.end];
    }
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw Error(ErrorCode::kInvalidArgument,
                "bad SMARTS '" + std::string(text_) + "': " + msg, pos_);
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  static bool is_bond_char(char c) {
    return c == '-' || c == '=' || c == '#' || c == ':' || c == '~' || c == '@'
           || c == '!' || c == '/' || c == '\\';
  }

  int node(Query::Node::Kind kind, int value = 0, int lhs = -1, int rhs = -1) {
    return q_.add_node({ kind, value, lhs, rhs });
  }

  int default_bond() {
    return node(Query::Node::kOr, 0,
                node(Query::Node::kBondOrder,
                     static_cast<int>(BondOrder::kSingle)),
                node(Query::Node::kBondOrder,
                     static_cast<int>(BondOrder::kAromatic)));
  }

  int add_atom(int expr) {
    q_.atom_expr_.push_back(expr);
    q_.atom_is_wildcard_.push_back(false);
    return static_cast<int>(q_.atom_expr_.size()) - 1;
  }

  int element_expr(int z, std::optional<bool> aromatic) {
    const int e = node(Query::Node::kAtomicNum, z);
    if (!aromatic)
      return e;
    return node(Query::Node::kAnd, 0, e,
                node(*aromatic ? Query::Node::kAromatic
                               : Query::Node::kAliphatic));
  }

  int parse_atom() {
    const char c = peek();
    if (c == '[') {
      ++pos_;
      if (peek() == 'H' && peek(1) == ']') {
        pos_ += 2;
        return add_atom(element_expr(1, std::nullopt));
      }
      const int expr = parse_low(true);
      if (peek() == ':') {  // atom map
        ++pos_;
        while (std::isdigit(static_cast<unsigned char>(peek())))
          ++pos_;
      }
      if (peek() != ']')
        fail("expected ']'");
      ++pos_;
      return add_atom(expr);
    }
    if (c == '*') {
      ++pos_;
      return add_atom(node(Query::Node::kTrue));
    }
    if (c == 'a') {
      ++pos_;
      return add_atom(node(Query::Node::kAromatic));
    }
    if (c == 'A') {
      ++pos_;
      return add_atom(node(Query::Node::kAliphatic));
    }
    if (c == 'C' && peek(1) == 'l') {
      pos_ += 2;
      return add_atom(element_expr(17, false));
    }
    if (c == 'B' && peek(1) == 'r') {
      pos_ += 2;
      return add_atom(element_expr(35, false));
    }
    static constexpr std::string_view kOrganic = "BCNOPSFI";
    static constexpr std::string_view kAromatic = "bcnops";
    if (kOrganic.find(c) != std::string_view::npos) {
      ++pos_;
      return add_atom(element_expr(*atomic_number_of(std::string(1, c)), false));
    }
    if (kAromatic.find(c) != std::string_view::npos) {
      ++pos_;
      const char up = static_cast<char>(std::toupper(c));
      return add_atom(element_expr(*atomic_number_of(std::string(1, up)), true));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  // Atom expression grammar: low (;) < or (,) < high (& / juxtaposition) < !
  int parse_low(bool atom) {
    int lhs = parse_or(atom);
    while (peek() == ';') {
      ++pos_;
      lhs = node(Query::Node::kAnd, 0, lhs, parse_or(atom));
    }
    return lhs;
  }

  int parse_or(bool atom) {
    int lhs = parse_high(atom);
    while (peek() == ',') {
      ++pos_;
      lhs = node(Query::Node::kOr, 0, lhs, parse_high(atom));
    }
    return lhs;
  }

  bool starts_primitive(bool atom) const {
    const char c = peek();
    if (c == '\0' || c == ';' || c == ',' || c == ']' || c == ')')
      return false;
    if (atom)
      return c != ':';
    return is_bond_char(c);
  }

  int parse_high(bool atom) {
    int lhs = parse_not(atom);
    while (true) {
      if (peek() == '&') {
        ++pos_;
      } else if (!starts_primitive(atom)) {
        break;
      }
      lhs = node(Query::Node::kAnd, 0, lhs, parse_not(atom));
    }
    return lhs;
  }

  int parse_not(bool atom) {
    if (peek() == '!') {
      ++pos_;
      return node(Query::Node::kNot, 0, parse_not(atom));
    }
    return atom ? atom_primitive() : bond_primitive();
  }

  int read_int(int fallback) {
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      return fallback;
    int v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek())))
      v = v * 10 + (text_[pos_++] - '0');
    return v;
  }

  int atom_primitive() {
    const char c = peek();
    using N = Query::Node;
    switch (c) {
    case '*':
      ++pos_;
      return node(N::kTrue);
    case 'a':
      if (peek(1) == 's') {
        pos_ += 2;
        return element_expr(33, true);
      }
      ++pos_;
      return node(N::kAromatic);
    case 'A':
      if (std::islower(static_cast<unsigned char>(peek(1)))) {
        break;  // element such as Al, As
      }
      ++pos_;
      return node(N::kAliphatic);
    case '#': {
      ++pos_;
      const int z = read_int(-1);
      if (z < 0)
        fail("'#' without number");
      return node(N::kAtomicNum, z);
    }
    case 'D':
      ++pos_;
      return node(N::kDegree, read_int(1));
    case 'H':
      ++pos_;
      return node(N::kTotalH, read_int(1));
    case 'X':
      ++pos_;
      return node(N::kConnectivity, read_int(1));
    case 'v':
      ++pos_;
      return node(N::kValence, read_int(1));
    case 'R': {
      ++pos_;
      const int n = read_int(-1);
      if (n < 0)
        return node(N::kInRing);
      if (n == 0)
        return node(N::kNot, 0, node(N::kInRing));
      return node(N::kRingCount, n);
    }
    case 'r': {
      ++pos_;
      const int n = read_int(-1);
      if (n < 0)
        return node(N::kInRing);
      if (n == 0)
        return node(N::kNot, 0, node(N::kInRing));
      return node(N::kRingSize, n);
    }
    case '+':
    case '-': {
      const int sign = c == '+' ? 1 : -1;
      ++pos_;
      int mag = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        mag = read_int(1);
      } else {
        while (peek() == c) {
          ++pos_;
          ++mag;
        }
      }
      return node(N::kCharge, sign * mag);
    }
    case '@':
      while (peek() == '@')
        ++pos_;
      return node(N::kTrue);
    case '$': {
      if (peek(1) != '(')
        fail("expected '$('");
      pos_ += 2;
      const std::size_t start = pos_;
      int depth = 1;
      while (pos_ < text_.size() && depth > 0) {
        if (text_[pos_] == '(')
          ++depth;
        else if (text_[pos_] == ')')
          --depth;
        ++pos_;
      }
      if (depth != 0)
        fail("unbalanced '$('");
      auto sub = std::make_shared<Query>(
          Query::from_smarts(text_.substr(start, pos_ - 1 - start)));
      q_.recursive_.push_back(std::move(sub));
      return node(N::kRecursive, static_cast<int>(q_.recursive_.size()) - 1);
    }
    default:
      break;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      if (c == 's' && peek(1) == 'e') {
        pos_ += 2;
        return element_expr(34, true);
      }
      const std::string up(1, static_cast<char>(std::toupper(c)));
      const auto z = atomic_number_of(up);
      if (!z || !can_be_aromatic(*z))
        fail("unknown aromatic symbol");
      ++pos_;
      return element_expr(*z, true);
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (std::islower(static_cast<unsigned char>(peek(1)))) {
        if (auto z = atomic_number_of(text_.substr(pos_, 2))) {
          pos_ += 2;
          return element_expr(*z, false);
        }
      }
      if (auto z = atomic_number_of(text_.substr(pos_, 1))) {
        ++pos_;
        return element_expr(*z, false);
      }
    }
    fail(std::string("unsupported primitive '") + c + "'");
  }

  int bond_primitive() {
    using N = Query::Node;
    const char c = peek();
    ++pos_;
    switch (c) {
    case '-':
    case '/':
    case '\\':
      return node(N::kBondOrder, static_cast<int>(BondOrder::kSingle));
    case '=':
      return node(N::kBondOrder, static_cast<int>(BondOrder::kDouble));
    case '#':
      return node(N::kBondOrder, static_cast<int>(BondOrder::kTriple));
    case ':':
      return node(N::kBondOrder, static_cast<int>(BondOrder::kAromatic));
    case '~':
      return node(N::kTrue);
    case '@':
      return node(N::kRingBond);
    default:
      --pos_;
      fail(std::string("unsupported bond '") + c + "'");
    }
  }

  int parse_bond_expr() { return parse_low(false); }

  std::string_view text_;
  std::size_t pos_ = 0;
  Query &q_;
};

Query Query::from_smarts(std::string_view smarts) {
  Query q;
  q.source_ = std::string(smarts);
  SmartsParser(smarts, q).parse();
  return q;
}

Query Query::from_graph(const MolGraph &pattern) {
  Query q;
  for (int i = 0; i < pattern.num_atoms(); ++i) {
    const Atom &a = pattern.atom(i);
    int expr;
    if (a.is_dummy()) {
      expr = q.add_node({ Node::kTrue });
    } else {
      const int z = q.add_node({ Node::kAtomicNum, a.atomic_number });
      const int arom = q.add_node({ a.aromatic ? Node::kAromatic
                                               : Node::kAliphatic });
      const int chg = q.add_node({ Node::kCharge, a.formal_charge });
      expr = q.add_node({ Node::kAnd, 0, q.add_node({ Node::kAnd, 0, z, arom }),
                          chg });
    }
    q.atom_expr_.push_back(expr);
    q.atom_is_wildcard_.push_back(a.is_dummy());
    q.atom_degree_.push_back(pattern.degree(i));
    q.atom_hydrogens_.push_back(a.is_dummy() ? -1 : a.hydrogens);
  }
  for (const Bond &b: pattern.bonds())
    q.bonds_.push_back(
        { b.begin, b.end,
          q.add_node({ Node::kBondOrder, static_cast<int>(b.order) }) });
  return q;
}

// ---------------------------------------------------------------------------
// Backtracking matcher

class Matcher {
public:
  Matcher(const Query &q, const MolGraph &mol, const MatchOptions &opt)
      : q_(q), mol_(mol), opt_(opt), map_(q.num_atoms(), -1),
        used_(mol.num_atoms(), false) {
    const int n = q.num_atoms();
    adj_.resize(n);
    for (int b = 0; b < static_cast<int>(q.bonds_.size()); ++b) {
      adj_[q.bonds_[b].begin].push_back({ q.bonds_[b].end, b });
      adj_[q.bonds_[b].end].push_back({ q.bonds_[b].begin, b });
    }
    // BFS order per component; parent = earlier-placed neighbour.
    std::vector<bool> seen(n, false);
    for (int root = 0; root < n; ++root) {
      if (seen[root])
        continue;
      seen[root] = true;
      std::size_t head = order_.size();
      order_.push_back(root);
      parent_.push_back(-1);
      while (head < order_.size()) {
        const int a = order_[head++];
        for (const auto &[nbr, bond]: adj_[a]) {
          if (seen[nbr])
            continue;
          seen[nbr] = true;
          order_.push_back(nbr);
          parent_.push_back(a);
        }
      }
    }
  }

  std::vector<std::vector<int>> run(int root_atom = -1) {
    root_atom_ = root_atom;
    if (q_.num_atoms() == 0 || q_.num_atoms() > mol_.num_atoms())
      return {};
    extend(0);
    std::sort(results_.begin(), results_.end());
    return std::move(results_);
  }

private:
  bool done() const { return results_.size() >= opt_.max_matches; }

  bool feasible(int qa, int ha) const {
    if (used_[ha])
      return false;
    if (qa == 0 && root_atom_ >= 0 && ha != root_atom_)
      return false;
    if (opt_.exact_degree && !q_.atom_is_wildcard_[qa]
        && mol_.degree(ha) != q_.atom_degree_[qa])
      return false;
    if (opt_.match_hydrogens && !q_.atom_hydrogens_.empty()
        && q_.atom_hydrogens_[qa] >= 0
        && mol_.atom(ha).hydrogens != q_.atom_hydrogens_[qa])
      return false;
    if (!q_.atom_matches(qa, mol_, ha))
      return false;
    for (const auto &[nbr, qb]: adj_[qa]) {
      if (map_[nbr] < 0)
        continue;
      const auto hb = mol_.bond_between(ha, map_[nbr]);
      if (!hb || !q_.eval_bond(q_.bonds_[qb].expr, mol_, *hb))
        return false;
    }
    return true;
  }

  void extend(std::size_t depth) {
    if (done())
      return;
    if (depth == order_.size()) {
      if (opt_.unique) {
        std::vector<int> key = map_;
        std::sort(key.begin(), key.end());
        if (!seen_sets_.insert(std::move(key)).second)
          return;
      }
      results_.push_back(map_);
      return;
    }
    const int qa = order_[depth];
    const int parent = parent_[depth];
    auto attempt = [&](int ha) {
      if (!feasible(qa, ha))
        return;
      map_[qa] = ha;
      used_[ha] = true;
      extend(depth + 1);
      used_[ha] = false;
      map_[qa] = -1;
    };
    if (parent >= 0) {
      for (const Neighbor &nb: mol_.neighbors(map_[parent])) {
        attempt(nb.atom);
        if (done())
          return;
      }
    } else {
      for (int ha = 0; ha < mol_.num_atoms(); ++ha) {
        attempt(ha);
        if (done())
          return;
      }
    }
  }

  const Query &q_;
  const MolGraph &mol_;
  const MatchOptions &opt_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<int> order_;
  std::vector<int> parent_;
  std::vector<int> map_;
  std::vector<bool> used_;
  std::vector<std::vector<int>> results_;
  std::set<std::vector<int>> seen_sets_;
  int root_atom_ = -1;
};

std::vector<std::vector<int>> find_matches(const Query &query,
                                           const MolGraph &mol,
                                           const MatchOptions &options) {
  return Matcher(query, mol, options).run();
}

bool has_match(const Query &query, const MolGraph &mol) {
  MatchOptions opt;
  opt.max_matches = 1;
  return !find_matches(query, mol, opt).empty();
}

bool matches_at(const Query &query, const MolGraph &mol, int atom) {
  MatchOptions opt;
  opt.max_matches = 1;
  return !Matcher(query, mol, opt).run(atom).empty();
}

std::vector<std::vector<int>> subgraph_match(const MolGraph &pattern,
                                             const MolGraph &host) {
  return find_matches(Query::from_graph(pattern), host);
}

}  // namespace forge
