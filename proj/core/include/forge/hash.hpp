//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_HASH_HPP_
#define FORGE_HASH_HPP_

#include <cstdint>
#include <span>
#include <string_view>

namespace forge {

inline constexpr std::uint64_t kHashSeed = 0x666f7267652d3031ULL;

// splitmix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed,
                                     std::uint64_t value) noexcept {
  return mix64(seed ^ mix64(value));
}

constexpr std::uint64_t hash_range(std::span<const std::uint64_t> values,
                                   std::uint64_t seed = kHashSeed) noexcept {
  std::uint64_t h = mix64(seed ^ values.size());
  for (std::uint64_t v: values)
    h = hash_combine(h, v);
  return h;
}

// FNV-1a followed by the mixer; used for string keys (seeds per fragment).
constexpr std::uint64_t hash_string(std::string_view s,
                                    std::uint64_t seed = kHashSeed) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (char c: s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

}  // namespace forge

#endif  // FORGE_HASH_HPP_
