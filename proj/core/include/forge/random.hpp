//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_RANDOM_HPP_
#define FORGE_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "forge/hash.hpp"

namespace forge {

// mt19937_64 output is fixed by the standard, but the std distributions are
// not. The helpers below keep every seeded stream identical across standard
// library implementations.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) {
  return Rng(seed);
}

// Independent child stream for parallel work keyed by `stream`.
inline Rng split_rng(std::uint64_t master_seed, std::uint64_t stream) {
  return Rng(hash_combine(mix64(master_seed), stream));
}

/// Uniform double in [0, 1).
inline double uniform01(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n); n must be positive.
inline std::size_t uniform_index(Rng &rng, std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

inline bool bernoulli(Rng &rng, double p) {
  return uniform01(rng) < p;
}

template <class T>
void shuffle(std::span<T> items, Rng &rng) {
  for (std::size_t i = items.size(); i > 1; --i)
    std::swap(items[i - 1], items[uniform_index(rng, i)]);
}

/// Index drawn with probability proportional to `weights` (non-negative, not
/// all zero).
inline std::size_t weighted_index(std::span<const double> weights, Rng &rng) {
  double total = 0;
  for (double w: weights)
    total += w;
  double u = uniform01(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i])
      return i;
    u -= weights[i];
  }
  for (std::size_t i = weights.size(); i > 0; --i)
    if (weights[i - 1] > 0)
      return i - 1;
  return 0;
}

}  // namespace forge

#endif  // FORGE_RANDOM_HPP_
