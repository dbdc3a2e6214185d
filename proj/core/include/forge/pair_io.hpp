//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_PAIR_IO_HPP_
#define FORGE_PAIR_IO_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/mmpa.hpp"
#include "forge/smeplus.hpp"

namespace forge {

// One JSON object per line:
//   {src, tgt, frag_src, frag_tgt, property, score_src, score_tgt,
//    env_key_hex, env_radius, from_global}
// MMP lines use property "activity" and add target_id, target_desc,
// pchembl_src and pchembl_tgt.

std::string to_json_line(const EditPair &p);
std::string to_json_line(const MmpPair &p);

/// Throws Error(kMalformedValue) on missing or mistyped fields.
EditPair parse_edit_pair(std::string_view line);
MmpPair parse_mmp_pair(std::string_view line);

/// True when the line carries MMP fields.
bool is_mmp_line(std::string_view line);

std::string to_jsonl(std::span<const EditPair> pairs);
std::string to_jsonl(std::span<const MmpPair> pairs);

/// Blank lines are skipped; errors carry the 1-based line number.
std::vector<EditPair> read_edit_pairs(const std::filesystem::path &path);
std::vector<MmpPair> read_mmp_pairs(const std::filesystem::path &path);

/// An MMP pair viewed as an edit pair (scores are normalized activity).
EditPair as_edit_pair(const MmpPair &p);

}  // namespace forge

#endif  // FORGE_PAIR_IO_HPP_
