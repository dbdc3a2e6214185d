//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_SEARCH_HPP_
#define FORGE_SEARCH_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/editgrammar.hpp"
#include "forge/fragment.hpp"
#include "forge/molgraph.hpp"
#include "forge/props.hpp"
#include "forge/random.hpp"
#include "forge/smeplus.hpp"

namespace forge {

struct ReplayEntry {
  std::string src_smiles;
  ModificationBlock block;
  std::string result_smiles;  // canonical
  double score = 0;
};

/// Score-ordered store of verified edits, one entry per result molecule.
class ReplayBuffer {
public:
  explicit ReplayBuffer(std::size_t capacity = 200);

  /// Keeps the better-scoring entry per result; evicts the lowest entry when
  /// full. Returns whether `entry` is held afterwards. Throws
  /// kInvalidArgument on a non-finite score.
  bool insert(ReplayEntry entry);

  /// Score descending, ties by result string.
  std::span<const ReplayEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  bool contains(const std::string &result_smiles) const;

private:
  std::size_t capacity_;
  std::vector<ReplayEntry> entries_;
};

/// Up to k entries without replacement, P ∝ exp(score / temperature),
/// skipping edits already drawn while other edits remain. temperature <= 0
/// takes the best remaining entry at every draw. Throws kEmptyBuffer.
std::vector<ReplayEntry> sample_demos(const ReplayBuffer &buffer, int k,
                                      double temperature, Rng &rng);

class ProposalPolicy {
public:
  virtual ~ProposalPolicy() = default;
  /// At most n blocks whose result fields are filled in; no oracle access.
  virtual std::vector<ModificationBlock> propose(const MolGraph &current,
                                                 std::span<const ReplayEntry> demos,
                                                 std::size_t n) = 0;
};

class Oracle {
public:
  virtual ~Oracle() = default;
  /// Higher is better.
  virtual double score(const MolGraph &mol) = 0;
  virtual std::string name() const = 0;
};

/// Property value, negated for lower-is-better properties.
class PropertyScoreOracle final: public Oracle {
public:
  explicit PropertyScoreOracle(PropertyOracle oracle): oracle_(oracle) {}
  double score(const MolGraph &mol) override;
  std::string name() const override;

private:
  PropertyOracle oracle_;
};

/// Runs `command` through /bin/sh and talks a line protocol: one canonical
/// SMILES written per request, one number read back; the command must not
/// buffer its input or output across lines. SIGPIPE is ignored in
/// the calling process once the first oracle starts. Throws kIoError when
/// the process cannot start or closes its output, kMalformedValue on a
/// reply that is not a finite number.
class ExternalProcessOracle final: public Oracle {
public:
  explicit ExternalProcessOracle(std::string command);
  ~ExternalProcessOracle() override;
  ExternalProcessOracle(const ExternalProcessOracle &) = delete;
  ExternalProcessOracle &operator=(const ExternalProcessOracle &) = delete;

  double score(const MolGraph &mol) override;
  std::string name() const override { return "ext:" + command_; }

private:
  std::string command_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;
};

struct PropertyBound {
  PropertyId property = PropertyId::kClogp;
  std::optional<double> min;
  std::optional<double> max;
};

struct SearchConfig {
  int budget = 1000;               // oracle calls, seeds included
  int k_demos = 5;
  int candidates_per_step = 8;
  std::optional<double> similarity_floor;  // Tanimoto to the originating seed
  std::vector<PropertyBound> extra_constraints;
  double temperature = 0.7;
  std::uint64_t seed = 0;
  std::size_t buffer_capacity = 200;
  int max_failed_rounds = 10;

  /// Throws kInvalidArgument.
  void validate() const;
};

struct OracleCall {
  std::string smiles;
  double score = 0;
  int round = 0;        // 0 for seeds
  double best_so_far = 0;
};

struct SearchReport {
  SearchConfig config;
  std::string oracle;
  std::vector<OracleCall> calls;
  std::vector<double> seed_scores;  // per input seed
  std::string best_smiles;
  double best_score = 0;
  double top10_auc = 0;
  int rounds = 0;
  long proposals = 0;
  long invalid = 0;     // failed verification
  long infeasible = 0;  // failed a constraint
  long repeated = 0;    // feasible but already scored
  bool policy_failure = false;  // max_failed_rounds rounds without candidates
  bool exhausted = false;       // every molecule expanded without news
};

/// Seeds are scored first (round 0). Each round expands the best scored
/// molecule that has not been exhausted (score, then canonical string): demos
/// are sampled from the buffer, the policy proposes, and every proposal is
/// verified against the current molecule, checked against the constraints
/// of its originating seed, and scored once if new. A molecule is exhausted
/// after a round that scores nothing and offers no proposal not already seen
/// from it. Stops at the budget, when all molecules are exhausted, or after
/// max_failed_rounds rounds in a row without a feasible proposal.
SearchReport run_optimization(std::span<const MolGraph> seeds, Oracle &oracle,
                              ProposalPolicy &policy, const SearchConfig &cfg);

/// Mean of the best min(10, i) scores after call i, averaged over i = 1..
/// budget; an early stop carries the last value forward.
double top10_auc(std::span<const OracleCall> calls, int budget);

/// Report as one JSON object (config echo, call log, best, top10_auc).
std::string to_json(const SearchReport &report);

struct EditTableConfig {
  /// Property used to rank fragments; without it fragments are ranked by
  /// the best expected improvement the pool offers.
  std::optional<PropertyOracle> surrogate;
  Removal removal = Removal::kReplaceWithH;
  int max_fragment_atoms = 12;  // single-cut substituents considered
  int max_result_atoms = 60;    // larger results are not proposed
};

/// Proposes pool replacements for the weakest fragments of the current
/// molecule, weakest first, falling back to the next fragment when one has
/// no applicable entry. Edits seen in demonstrations come first, best demo
/// first, when they apply. Table proposals for a molecule resume where the
/// previous call for it stopped, so use one policy per run. Deterministic.
std::unique_ptr<ProposalPolicy> edit_table_policy(const ReplacementPool &pool,
                                                  EditTableConfig cfg = {});

}  // namespace forge

#endif  // FORGE_SEARCH_HPP_
