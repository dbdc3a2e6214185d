//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_SMEPLUS_HPP_
#define FORGE_SMEPLUS_HPP_

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/context.hpp"
#include "forge/fragment.hpp"
#include "forge/molgraph.hpp"
#include "forge/props.hpp"

namespace forge {

struct EditPair {
  std::string src_smiles;
  std::string tgt_smiles;
  std::string frag_src;
  std::string frag_tgt;
  PropertyId property = PropertyId::kClogp;
  double score_src = 0;
  double score_tgt = 0;
  EnvironmentKey env_key;
  bool from_global = false;

  double improvement() const { return score_tgt - score_src; }
  /// "frag_src>>frag_tgt", the unit the occurrence cap applies to.
  std::string edit_string() const { return frag_src + ">>" + frag_tgt; }
};

struct Replacement {
  std::string frag_tgt;
  double mean_delta = 0;  // mean improvement, in oracle direction
  int support = 0;        // occurrences behind the target's mean
};

struct ReplacementPool {
  PropertyOracle oracle;
  int radius = 2;
  int min_bin = 3;
  double prop_min = 0;  // normalization range of the oracle
  double prop_max = 1;
  /// env -> frag_src -> candidates (dense bins only), best first.
  std::map<EnvironmentKey, std::map<std::string, std::vector<Replacement>>>
      by_env;
  /// frag_src -> candidates over the whole corpus, best first.
  std::map<std::string, std::vector<Replacement>> global;

  struct Lookup {
    std::span<const Replacement> candidates;
    bool from_global = false;
  };
  /// The env bin's list for frag_src when present and non-empty, otherwise
  /// the global list.
  Lookup lookup(const EnvironmentKey &env, const std::string &frag_src) const;

  double normalize(double value) const;

  bool empty() const { return global.empty(); }
};

struct MineConfig {
  std::optional<DecompositionMethod> method;  // nullopt: auto_decompose
  Removal removal = Removal::kReplaceWithH;
  int radius = 2;
  int min_bin = 3;
  int dedup_cap = 5;
  int max_candidates = 20;
  double min_improvement = 0.01;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct MiningReport {
  long molecules = 0;
  long sites = 0;
  long candidates_tried = 0;
  long apply_failures = 0;
  long below_threshold = 0;
  long duplicates = 0;
  long capped = 0;
  long from_global = 0;
  long emitted = 0;
};

/// Indexes attributed fragment occurrences per environment bin and globally.
/// Candidate deltas are mean(whole-fragment attribution of tgt) minus that
/// of src, signed by the oracle direction; only improving candidates with
/// the same attachment count are kept.
ReplacementPool build_pool(std::span<const MolGraph> corpus,
                           std::span<const Occurrence> occurrences,
                           const PropertyOracle &oracle,
                           const MineConfig &cfg);
ReplacementPool build_pool(std::span<const MolGraph> corpus,
                           const PropertyOracle &oracle,
                           const MineConfig &cfg = {});

/// Pool whose entries are the observed edits themselves (mean improvement
/// per frag_src -> frag_tgt), for policies driven by a mined pair file.
ReplacementPool pool_from_pairs(std::span<const EditPair> pairs, int radius = 2);

std::vector<EditPair> mine_pairs(std::span<const MolGraph> corpus,
                                 std::span<const Occurrence> occurrences,
                                 const ReplacementPool &pool,
                                 const MineConfig &cfg,
                                 MiningReport *report = nullptr);
std::vector<EditPair> mine_pairs(std::span<const MolGraph> corpus,
                                 const ReplacementPool &pool,
                                 const MineConfig &cfg = {},
                                 MiningReport *report = nullptr);

/// Replaces the lexicographically smallest exact match of frag_src in `src`
/// (fragment atoms must match degree and hydrogen count) by frag_tgt,
/// joining bonds at equal dummy labels. Throws kNoMatch, kLabelMismatch,
/// kValenceError, or parse errors of the fragment strings.
MolGraph apply_edit(const MolGraph &src, std::string_view frag_src,
                    std::string_view frag_tgt);
/// Canonical string of apply_edit.
std::string apply_edit_smiles(const MolGraph &src, std::string_view frag_src,
                              std::string_view frag_tgt);

/// The smallest mapping apply_edit would use (pattern atom -> host atom),
/// or nullopt.
std::optional<std::vector<int>> edit_site(const MolGraph &src,
                                          const MolGraph &frag_src);

struct Trajectory {
  std::vector<EditPair> steps;
};

inline constexpr int kMaxTrajectorySteps = 6;

/// Greedy chaining: each trajectory starts at a pair whose source is not a
/// target of any pair (then at any unused pair), and repeatedly follows the
/// outgoing pair of the same property with the highest target score above
/// the current one, never revisiting a molecule. Throws kInvalidArgument when
/// max_steps is outside [1, 6].
std::vector<Trajectory> chain_trajectories(std::span<const EditPair> pairs,
                                           int max_steps = kMaxTrajectorySteps);

}  // namespace forge

#endif  // FORGE_SMEPLUS_HPP_
