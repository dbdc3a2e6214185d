//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_CONTEXT_HPP_
#define FORGE_CONTEXT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forge/fragment.hpp"
#include "forge/molgraph.hpp"
#include "forge/props.hpp"
#include "forge/random.hpp"

namespace forge {

struct EnvironmentKey {
  int radius = 0;
  std::uint64_t digest = 0;

  friend bool operator==(const EnvironmentKey &, const EnvironmentKey &) = default;
  friend auto operator<=>(const EnvironmentKey &, const EnvironmentKey &) = default;
};

std::string to_hex(const EnvironmentKey &key);

/// Hash of the sorted radius-`radius` Morgan identifiers of the
/// remainder-side attachment atoms. The identifiers are computed on the
/// host with the fragment replaced by unlabelled dummies, so the key
/// describes the context only. Throws kNoAttachment, kInvalidArgument.
EnvironmentKey environment_key(const MolGraph &host, const Fragment &frag,
                               int radius);

struct ScoredSample {
  EnvironmentKey env;
  double score;
};

struct VarianceReport {
  std::string fragment_key;
  int n_occurrences = 0;
  int n_environments = 0;
  double sigma_original = 0;
  double sigma_grouped = 0;
  double vr = 0;
  double shuffled_vr_mean = 0;
  double delta = 0;
};

/// Population std of all scores versus the size-weighted pooled within-group
/// std; the baseline reassigns scores at random to groups of the same sizes.
/// Throws kTooFewSamples (fewer than 2 samples), kInvalidArgument.
VarianceReport variance_reduction(std::span<const ScoredSample> samples,
                                  int shuffles, Rng &rng);

/// One attributed fragment occurrence from a corpus molecule.
struct Occurrence {
  int molecule = 0;
  std::string fragment_key;
  Fragment fragment;
  double score = 0;      // per-atom attribution
  double raw_delta = 0;  // whole-fragment attribution
};

struct VrConfig {
  std::optional<DecompositionMethod> method;  // nullopt: auto_decompose
  Removal removal = Removal::kReplaceWithH;
  int shuffles = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// Decomposes and attributes every molecule. Molecules with dummy atoms or
/// oracle failures are skipped. Output is ordered by molecule, then fragment.
std::vector<Occurrence> collect_occurrences(std::span<const MolGraph> corpus,
                                            const PropertyOracle &oracle,
                                            const VrConfig &cfg);

struct VrStudy {
  std::vector<VarianceReport> reports;
  int n_fragments = 0;  // distinct fragments with >= 2 occurrences
  double mean_real_vr = 0;
  double mean_shuffled_vr = 0;
  double mean_delta = 0;
  double fraction_real_above_shuffled = 0;
  double mean_environments = 0;
};

/// Reports for the `top_k` most frequent fragments (ties by key), each with
/// its own rng stream split from cfg.seed.
VrStudy vr_study(std::span<const MolGraph> corpus,
                 std::span<const Occurrence> occurrences, int radius,
                 int top_k, const VrConfig &cfg);

VrStudy vr_study(std::span<const MolGraph> corpus, const PropertyOracle &oracle,
                 int radius, int top_k, const VrConfig &cfg = {});

}  // namespace forge

#endif  // FORGE_CONTEXT_HPP_
