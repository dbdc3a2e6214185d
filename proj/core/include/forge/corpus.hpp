//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_CORPUS_HPP_
#define FORGE_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/fragment.hpp"
#include "forge/mmpa.hpp"
#include "forge/props.hpp"
#include "forge/random.hpp"
#include "forge/smeplus.hpp"

namespace forge {

struct SampleMeta {
  int stage = 1;           // 1, 2, or 3 for multi-turn
  std::string family;      // mixture family
  std::string property;    // property name, or "activity:<target_id>"
  std::string variant;     // prompt variant (direct, icl_desc, ...)
  std::string task;        // ranking, vulnerability, decomposition, edit, ...
  bool scores = false;     // answer carries scores
  std::string source;      // source molecule of edit answers
};

struct CorpusSample {
  std::string instruction;
  std::string input;
  std::string output;
  SampleMeta meta;
};

/// `{"instruction":…,"input":…,"output":…,"meta":{…}}` with fixed key order.
std::string to_json_line(const CorpusSample &s);
std::string to_jsonl(std::span<const CorpusSample> samples);

// Stage-1 families.
inline constexpr std::string_view kRdkitAttr = "rdkit_attr";
inline constexpr std::string_view kOracleRank = "oracle_rank";
inline constexpr std::string_view kDecomp = "decomp";
inline constexpr std::string_view kIclRank = "icl_rank";
inline constexpr std::string_view kExternal = "external";
// Stage-2 families.
inline constexpr std::string_view kSmeplus = "smeplus";
inline constexpr std::string_view kMmp = "mmp";

struct MixtureSpec {
  std::vector<std::pair<std::string, double>> ratios;

  double ratio(std::string_view family) const;
  /// Throws kInvalidArgument on unknown families, negative ratios or a sum
  /// further than 1e-9 from 1.
  void validate(int stage) const;

  static MixtureSpec stage1_default();
  static MixtureSpec stage2_default();
};

/// `family = ratio` lines; families not listed get ratio 0.
MixtureSpec parse_mixture(std::string_view text, int stage);

// ---------------------------------------------------------------------------
// Sources

struct FragmentScore {
  std::string smiles;  // labelled fragment
  double score = 0;    // per-atom attribution
};

struct AttributedMolecule {
  std::string smiles;
  DecompositionMethod method = DecompositionMethod::kMurcko;
  PropertyId property = PropertyId::kClogp;
  Removal removal = Removal::kReplaceWithH;
  std::vector<FragmentScore> fragments;  // decomposition order
};

/// One record per (molecule, property, removal). Molecules are decomposed
/// with auto_decompose (rng split per molecule index); molecules with fewer
/// than two fragments are skipped.
std::vector<AttributedMolecule> collect_attributions(
    std::span<const MolGraph> corpus, std::span<const PropertyId> properties,
    std::uint64_t seed, unsigned threads = 0);

struct ExternalSample {
  std::string instruction;
  std::string input;
  std::string output;
};

/// Instruction JSONL passed through unmodified; throws kMalformedValue with
/// the line number on records lacking the three string fields.
std::vector<ExternalSample> parse_external_jsonl(std::string_view text);
std::vector<ExternalSample> load_external(const std::filesystem::path &path);

/// Substituent series: molecules on one target sharing a single-cut
/// constant part, from mined MMP pairs.
struct MmpSeries {
  std::string target_id;
  std::string target_desc;
  std::string scaffold;                  // constant part with [1*]
  std::vector<FragmentScore> members;    // substituent, normalized activity
};

std::vector<MmpSeries> mmp_series(std::span<const MmpPair> pairs);

// ---------------------------------------------------------------------------
// Emission

struct Stage1Sources {
  std::span<const AttributedMolecule> attributions;
  std::span<const MmpPair> mmp;
  std::span<const ExternalSample> external;
};

struct Stage1Options {
  double score_p = 0.35;          // answer carries normalized scores
  double vulnerability_p = 0.25;  // ranking prompt becomes "weakest fragment"
  double icl_desc_p = 0.5;
  double icl_nodesc_p = 0.3;      // remainder: direct, no demonstrations
  double icl_mmp_share = 5.0 / 6.0;  // MMP series vs attributions; series
                                     // short of k_demos demos fall back
  int k_demos = 5;
};

/// Throws kEmptySource when a family with positive ratio has no source.
std::vector<CorpusSample> emit_stage1(const Stage1Sources &sources,
                                      const MixtureSpec &spec,
                                      std::size_t total, Rng &rng,
                                      const Stage1Options &opt = {});

struct Stage2Options {
  double score_suffix_p = 0.8;
  double direct_p = 0.1;
  int k_demos = 5;
  bool dedup = false;   // drop repeated (instruction, input)
  unsigned threads = 0; // pair verification
};

struct EmitReport {
  std::size_t drawn = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t pairs_rejected = 0;  // failed verification after normalization
};

/// Each output is a rendered ModificationBlock verified against the source.
std::vector<CorpusSample> emit_stage2(std::span<const EditPair> smeplus,
                                      std::span<const MmpPair> mmp,
                                      const MixtureSpec &spec,
                                      std::size_t total, Rng &rng,
                                      const Stage2Options &opt = {},
                                      EmitReport *report = nullptr);

/// Every property is upsampled with replacement (or subsampled) to
/// per_property_target samples; outputs are chained blocks with values.
std::vector<CorpusSample> emit_multiturn(std::span<const Trajectory> trajectories,
                                         std::size_t per_property_target,
                                         Rng &rng);

/// Drops isotopes on non-dummy organic-subset atoms (B C N O P S F Cl Br I);
/// dummy labels are kept.
MolGraph strip_organic_isotopes(const MolGraph &mol);

/// Two decimals, always with a fractional part ("0.14", "0.0", "1.0").
std::string format_score(double x);

}  // namespace forge

#endif  // FORGE_CORPUS_HPP_
