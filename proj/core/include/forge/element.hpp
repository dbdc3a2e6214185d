//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_ELEMENT_HPP_
#define FORGE_ELEMENT_HPP_

#include <optional>
#include <span>
#include <string_view>

namespace forge {

struct ElementInfo {
  int atomic_number;
  std::string_view symbol;
  double atomic_weight;
  // Allowed neutral valences, ascending; empty for elements without a
  // well-defined valence model (transition metals, noble gases).
  std::span<const int> valences;
};

inline constexpr int kMaxAtomicNumber = 86;

/// Element 0 is the dummy atom `*`.
const ElementInfo &element(int atomic_number);

std::optional<int> atomic_number_of(std::string_view symbol);

/// B, C, N, O, P, S, F, Cl, Br, I.
bool is_organic_subset(int atomic_number);

/// Elements that may be written as lowercase aromatic symbols.
bool can_be_aromatic(int atomic_number);

/// Allowed valences after shifting `atomic_number` by `formal_charge` to its
/// isoelectronic main-group neighbour (N+ behaves like C, O- like F). Empty
/// when no model applies.
std::span<const int> allowed_valences(int atomic_number, int formal_charge);

}  // namespace forge

#endif  // FORGE_ELEMENT_HPP_
