//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <utility>

#include "forge/error.hpp"
#include "forge/hash.hpp"

namespace forge {

int Fingerprint::count() const {
  int n = 0;
  for (std::uint64_t w: words)
    n += std::popcount(w);
  return n;
}

std::vector<int> Fingerprint::on_bits() const {
  std::vector<int> bits;
  for (int i = 0; i < length; ++i)
    if (test(i))
      bits.push_back(i);
  return bits;
}

Fingerprint make_fingerprint(int length, int radius) {
  if (length <= 0)
    throw Error(ErrorCode::kInvalidArgument, "fingerprint length must be > 0");
  Fingerprint fp;
  fp.length = length;
  fp.radius = radius;
  fp.words.assign((length + 63) / 64, 0);
  return fp;
}

std::vector<std::vector<std::uint64_t>> morgan_identifiers(const MolGraph &mol,
                                                           int radius) {
  if (radius < 0)
    throw Error(ErrorCode::kInvalidArgument, "radius must be >= 0");
  const int n = mol.num_atoms();
  std::vector<std::vector<std::uint64_t>> ids(radius + 1,
                                              std::vector<std::uint64_t>(n));
  for (int a = 0; a < n; ++a) {
    const Atom &atom = mol.atom(a);
    const std::uint64_t inv[] = {
      static_cast<std::uint64_t>(atom.atomic_number),
      static_cast<std::uint64_t>(mol.degree(a)),
      static_cast<std::uint64_t>(static_cast<std::int64_t>(atom.formal_charge)),
      static_cast<std::uint64_t>(atom.hydrogens),
      mol.atom_in_ring(a) ? 1U : 0U,
    };
    ids[0][a] = hash_range(inv);
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
  std::vector<std::uint64_t> buf;
  for (int r = 1; r <= radius; ++r) {
    for (int a = 0; a < n; ++a) {
      env.clear();
      for (const Neighbor &nb: mol.neighbors(a))
        env.emplace_back(static_cast<std::uint64_t>(mol.bond(nb.bond).order),
                         ids[r - 1][nb.atom]);
      std::sort(env.begin(), env.end());
      buf.assign({ static_cast<std::uint64_t>(r), ids[r - 1][a] });
      for (const auto &[order, id]: env) {
        buf.push_back(order);
        buf.push_back(id);
      }
      ids[r][a] = hash_range(buf);
    }
  }
  return ids;
}

Fingerprint morgan_fingerprint(const MolGraph &mol, int radius, int length) {
  Fingerprint fp = make_fingerprint(length, radius);
  for (const auto &layer: morgan_identifiers(mol, radius))
    for (std::uint64_t id: layer)
      fp.set(static_cast<int>(id % static_cast<std::uint64_t>(length)));
  return fp;
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.length != b.length)
    throw Error(ErrorCode::kLengthMismatch,
                "fingerprint lengths differ: " + std::to_string(a.length)
                    + " vs " + std::to_string(b.length));
  int both = 0;
  int either = 0;
  for (std::size_t i = 0; i < a.words.size(); ++i) {
    both += std::popcount(a.words[i] & b.words[i]);
    either += std::popcount(a.words[i] | b.words[i]);
  }
  if (either == 0)
    return 1.0;
  return static_cast<double>(both) / either;
}

}  // namespace forge
