//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/element.hpp"

#include <array>
#include <cassert>
#include <string_view>

namespace forge {
namespace {

constexpr int kMono[] = {1};
constexpr int kNoble[] = {0};
constexpr int kDi[] = {2};
constexpr int kTri[] = {3};
constexpr int kTetra[] = {4};
constexpr int kPnictogen[] = {3, 5};
constexpr int kChalcogen[] = {2, 4, 6};
constexpr int kTetrel[] = {2, 4};
constexpr int kHalogenHeavy[] = {1, 3, 5};
constexpr int kXenon[] = {0, 2, 4, 6};

// Average atomic weights (IUPAC conventional values).
constexpr ElementInfo kElements[] = {
    {0, "*", 0.0, {}},
    {1, "H", 1.0080, kMono},
    {2, "He", 4.0030, kNoble},
    {3, "Li", 6.9410, kMono},
    {4, "Be", 9.0120, kDi},
    {5, "B", 10.8120, kTri},
    {6, "C", 12.0110, kTetra},
    {7, "N", 14.0070, kTri},
    {8, "O", 15.9990, kDi},
    {9, "F", 18.9980, kMono},
    {10, "Ne", 20.1800, kNoble},
    {11, "Na", 22.9900, kMono},
    {12, "Mg", 24.3050, kDi},
    {13, "Al", 26.9820, kTri},
    {14, "Si", 28.0860, kTetra},
    {15, "P", 30.9740, kPnictogen},
    {16, "S", 32.0670, kChalcogen},
    {17, "Cl", 35.4530, kMono},
    {18, "Ar", 39.9480, kNoble},
    {19, "K", 39.0980, kMono},
    {20, "Ca", 40.0780, kDi},
    {21, "Sc", 44.9560, {}},
    {22, "Ti", 47.8670, {}},
    {23, "V", 50.9440, {}},
    {24, "Cr", 51.9960, {}},
    {25, "Mn", 54.9380, {}},
    {26, "Fe", 55.8450, {}},
    {27, "Co", 58.9330, {}},
    {28, "Ni", 58.6930, {}},
    {29, "Cu", 63.5460, {}},
    {30, "Zn", 65.3900, {}},
    {31, "Ga", 69.7230, kTri},
    {32, "Ge", 72.6100, kTetra},
    {33, "As", 74.9220, kPnictogen},
    {34, "Se", 78.9600, kChalcogen},
    {35, "Br", 79.9040, kMono},
    {36, "Kr", 83.8000, kNoble},
    {37, "Rb", 85.4680, kMono},
    {38, "Sr", 87.6200, kDi},
    {39, "Y", 88.9060, {}},
    {40, "Zr", 91.2240, {}},
    {41, "Nb", 92.9060, {}},
    {42, "Mo", 95.9400, {}},
    {43, "Tc", 98.0000, {}},
    {44, "Ru", 101.0700, {}},
    {45, "Rh", 102.9060, {}},
    {46, "Pd", 106.4200, {}},
    {47, "Ag", 107.8680, {}},
    {48, "Cd", 112.4120, {}},
    {49, "In", 114.8180, kTri},
    {50, "Sn", 118.7110, kTetrel},
    {51, "Sb", 121.7600, kPnictogen},
    {52, "Te", 127.6000, kChalcogen},
    {53, "I", 126.9040, kHalogenHeavy},
    {54, "Xe", 131.2900, kXenon},
    {55, "Cs", 132.9050, kMono},
    {56, "Ba", 137.3280, kDi},
    {57, "La", 138.9060, {}},
    {58, "Ce", 140.1160, {}},
    {59, "Pr", 140.9080, {}},
    {60, "Nd", 144.2400, {}},
    {61, "Pm", 145.0000, {}},
    {62, "Sm", 150.3600, {}},
    {63, "Eu", 151.9640, {}},
    {64, "Gd", 157.2500, {}},
    {65, "Tb", 158.9250, {}},
    {66, "Dy", 162.5000, {}},
    {67, "Ho", 164.9300, {}},
    {68, "Er", 167.2600, {}},
    {69, "Tm", 168.9340, {}},
    {70, "Yb", 173.0400, {}},
    {71, "Lu", 174.9670, {}},
    {72, "Hf", 178.4900, {}},
    {73, "Ta", 180.9480, {}},
    {74, "W", 183.8400, {}},
    {75, "Re", 186.2070, {}},
    {76, "Os", 190.2300, {}},
    {77, "Ir", 192.2170, {}},
    {78, "Pt", 195.0780, {}},
    {79, "Au", 196.9670, {}},
    {80, "Hg", 200.5900, {}},
    {81, "Tl", 204.3830, {}},
    {82, "Pb", 207.2000, kTetrel},
    {83, "Bi", 208.9800, kPnictogen},
    {84, "Po", 209.0000, kChalcogen},
    {85, "At", 210.0000, kHalogenHeavy},
    {86, "Rn", 222.0000, kNoble},
};

static_assert(std::size(kElements) == kMaxAtomicNumber + 1);

// Main-group column used for the isoelectronic valence shift.
bool is_shiftable(int z) {
  return (z >= 5 && z <= 9) || (z >= 13 && z <= 17) || (z >= 31 && z <= 35)
         || (z >= 49 && z <= 53);
}

}  // namespace

const ElementInfo &element(int atomic_number) {
  assert(atomic_number >= 0 && atomic_number <= kMaxAtomicNumber);
  return kElements[atomic_number];
}

std::optional<int> atomic_number_of(std::string_view symbol) {
  for (const ElementInfo &e: kElements)
    if (e.symbol == symbol)
      return e.atomic_number;
  return std::nullopt;
}

bool is_organic_subset(int z) {
  switch (z) {
  case 5:
  case 6:
  case 7:
  case 8:
  case 9:
  case 15:
  case 16:
  case 17:
  case 35:
  case 53:
    return true;
  default:
    return false;
  }
}

bool can_be_aromatic(int z) {
  switch (z) {
  case 5:
  case 6:
  case 7:
  case 8:
  case 15:
  case 16:
  case 33:
  case 34:
    return true;
  default:
    return false;
  }
}

std::span<const int> allowed_valences(int atomic_number, int formal_charge) {
  if (atomic_number <= 0 || atomic_number > kMaxAtomicNumber)
    return {};
  if (formal_charge == 0)
    return element(atomic_number).valences;
  if (!is_shiftable(atomic_number))
    return {};
  const int shifted = atomic_number - formal_charge;
  if (!is_shiftable(shifted)) {
    // Shifted past the row: B+ (like Be) and F+/Cl+ etc. fall out of model.
    if (shifted == 4)
      return kDi;
    return {};
  }
  return element(shifted).valences;
}

}  // namespace forge
