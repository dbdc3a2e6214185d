//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_EDITGRAMMAR_HPP_
#define FORGE_EDITGRAMMAR_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/molgraph.hpp"

namespace forge {

enum class ValueKey { kValue, kActivity };

std::string_view value_key_name(ValueKey key);

/// One "Modification / Result" answer:
///
///   Modification: <start_smiles>[1*]O<end_smiles> >> <start_smiles>[1*]N<end_smiles>
///   Result: <start_smiles>CCN<end_smiles> (value: 0.74)
struct ModificationBlock {
  std::string frag_src;
  std::string frag_tgt;
  std::string result_smiles;
  std::optional<double> value;
  ValueKey value_key = ValueKey::kValue;

  bool operator==(const ModificationBlock &) const = default;
};

/// Whitespace around tokens and blank lines are tolerated. Throws
/// kGrammarError for structural problems (missing `>>`, missing markers or
/// lines), kInvalidSmiles when a span does not parse, kMalformedValue for a
/// non-numeric or non-finite score.
ModificationBlock parse_block(std::string_view text);

/// Byte-exact single-space form; the value uses the shortest representation
/// that parses back to the same double.
std::string render_block(const ModificationBlock &block);

enum class Verdict { kOk, kMismatch, kInapplicable };

std::string_view verdict_name(Verdict v);

/// kOk iff apply_edit on the canonical form of src canonicalizes to the
/// result (also canonicalized); kInapplicable when frag_src does not match
/// src. Never throws.
Verdict verify_block(const MolGraph &src, const ModificationBlock &block);

inline constexpr std::size_t kMaxTurns = 6;

struct MultiTurnAnswer {
  std::vector<ModificationBlock> blocks;

  bool operator==(const MultiTurnAnswer &) const = default;
};

/// Consecutive blocks, 1 to 6 of them; throws like parse_block.
MultiTurnAnswer parse_multiturn(std::string_view text);
std::string render_multiturn(const MultiTurnAnswer &answer);

/// Verifies block i against src (i = 0) or the previous block's result.
/// Stops at the first non-ok verdict, which is returned last.
std::vector<Verdict> verify_multiturn(const MolGraph &src,
                                      const MultiTurnAnswer &answer);

}  // namespace forge

#endif  // FORGE_EDITGRAMMAR_HPP_
