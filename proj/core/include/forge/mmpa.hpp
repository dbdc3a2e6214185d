//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_MMPA_HPP_
#define FORGE_MMPA_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/context.hpp"

namespace forge {

struct ActivityRecord {
  std::string smiles;
  std::string target_id;
  std::string target_desc;
  double pchembl = 0;
};

struct ActivityTable {
  std::vector<ActivityRecord> records;
  std::vector<int> skipped_lines;  // 1-based lines with unparseable SMILES
};

/// CSV with header `smiles,target_id,target_desc,pchembl` (column order is
/// taken from the header; extra columns are ignored). Throws kMalformedCsv
/// with the line number on missing columns, bad quoting or a non-finite
/// pchembl, and kIoError when the file cannot be read.
ActivityTable load_activity_table(const std::filesystem::path &path);
ActivityTable parse_activity_table(std::string_view text);

inline const std::vector<std::string> kDefaultLeakageKeywords = { "JNK", "DRD",
                                                                  "GSK" };

/// Drops records whose target_desc contains any keyword (case-insensitive).
std::vector<ActivityRecord> leakage_filter(
    std::span<const ActivityRecord> records,
    std::span<const std::string> keywords = kDefaultLeakageKeywords);

struct MmpPair {
  std::string src_smiles;
  std::string tgt_smiles;
  std::string frag_src;  // variable part of src, `[1*]`-labelled
  std::string frag_tgt;
  std::string target_id;
  std::string target_desc;
  double pchembl_src = 0;
  double pchembl_tgt = 0;
  double score_src = 0;  // per-target min-max normalized pchembl
  double score_tgt = 0;
  EnvironmentKey env_key;

  std::string edit_string() const { return frag_src + ">>" + frag_tgt; }
};

struct MmpConfig {
  double min_pchembl = 5.0;
  int max_variable_heavy = 15;
  double max_variable_fraction = 0.4;
  int radius = 2;
};

struct MmpReport {
  int molecules = 0;       // distinct (target, molecule) after averaging
  int candidate_pairs = 0; // molecule pairs sharing a constant part
  int equal_activity = 0;
  int below_pchembl = 0;
  int too_large = 0;
  int unverified = 0;
  int emitted = 0;
};

/// Single-cut matched pairs within each target, oriented low -> high
/// pchembl. Duplicate (target, molecule) rows are averaged; one pair per
/// (src, tgt, target) is kept, using the cut with the smallest variable
/// parts that apply_edit reproduces. Output is sorted by (target, src, tgt).
std::vector<MmpPair> mine_mmps(std::span<const ActivityRecord> records,
                               const MmpConfig &cfg = {},
                               MmpReport *report = nullptr);

}  // namespace forge

#endif  // FORGE_MMPA_HPP_
