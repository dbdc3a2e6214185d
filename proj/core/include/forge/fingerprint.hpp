//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_FINGERPRINT_HPP_
#define FORGE_FINGERPRINT_HPP_

#include <cstdint>
#include <vector>

#include "forge/molgraph.hpp"

namespace forge {

inline constexpr int kDefaultFingerprintLength = 2048;

struct Fingerprint {
  int length = 0;
  int radius = 0;
  std::vector<std::uint64_t> words;

  bool test(int bit) const { return (words[bit >> 6] >> (bit & 63)) & 1U; }
  void set(int bit) { words[bit >> 6] |= std::uint64_t { 1 } << (bit & 63); }
  int count() const;
  std::vector<int> on_bits() const;

  friend bool operator==(const Fingerprint &, const Fingerprint &) = default;
};

/// Empty fingerprint of `length` bits.
Fingerprint make_fingerprint(int length, int radius = 0);

/// Morgan identifiers per radius: result[r][atom] for r = 0..radius. Initial
/// invariants are element, degree, formal charge, hydrogen count and ring
/// membership; each iteration hashes the previous identifier with the sorted
/// (bond order, neighbour identifier) list.
std::vector<std::vector<std::uint64_t>> morgan_identifiers(const MolGraph &mol,
                                                           int radius);

/// Folds every identifier at radii 0..radius into `length` bits (modulo).
Fingerprint morgan_fingerprint(const MolGraph &mol, int radius = 2,
                               int length = kDefaultFingerprintLength);

/// |a & b| / |a | b|; 1.0 when both are empty. Throws kLengthMismatch.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

}  // namespace forge

#endif  // FORGE_FINGERPRINT_HPP_
