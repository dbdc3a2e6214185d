//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/search.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "forge/context.hpp"
#include "forge/error.hpp"
#include "forge/fingerprint.hpp"
#include "forge/smiles.hpp"
#include "json.hpp"

namespace forge {

namespace {

bool entry_before(const ReplayEntry &a, const ReplayEntry &b) {
  if (a.score != b.score)
    return a.score > b.score;
  return a.result_smiles < b.result_smiles;
}

std::string edit_of(const ModificationBlock &b) {
  return b.frag_src + ">>" + b.frag_tgt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Replay buffer

ReplayBuffer::ReplayBuffer(std::size_t capacity): capacity_(capacity) {
  if (capacity == 0)
    throw Error(ErrorCode::kInvalidArgument, "buffer capacity must be positive");
}

bool ReplayBuffer::contains(const std::string &result_smiles) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const ReplayEntry &e) {
    return e.result_smiles == result_smiles;
  });
}

bool ReplayBuffer::insert(ReplayEntry entry) {
  if (!std::isfinite(entry.score))
    throw Error(ErrorCode::kInvalidArgument, "replay entries need a finite score");
  auto old = std::find_if(entries_.begin(), entries_.end(), [&](const ReplayEntry &e) {
    return e.result_smiles == entry.result_smiles;
  });
  if (old != entries_.end()) {
    if (old->score >= entry.score)
      return false;
    entries_.erase(old);
  }
  const std::string result = entry.result_smiles;
  entries_.insert(std::upper_bound(entries_.begin(), entries_.end(), entry,
                                   entry_before),
                  std::move(entry));
  if (entries_.size() > capacity_)
    entries_.pop_back();
  return contains(result);
}

std::vector<ReplayEntry> sample_demos(const ReplayBuffer &buffer, int k,
                                      double temperature, Rng &rng) {
  if (buffer.empty())
    throw Error(ErrorCode::kEmptyBuffer, "cannot sample demonstrations from an empty buffer");
  const auto entries = buffer.entries();
  std::vector<std::size_t> remaining(entries.size());
  for (std::size_t i = 0; i < remaining.size(); ++i)
    remaining[i] = i;
  std::set<std::string> used;
  std::vector<ReplayEntry> out;
  while (static_cast<int>(out.size()) < k && !remaining.empty()) {
    std::vector<std::size_t> cand;  // positions in `remaining`
    for (std::size_t p = 0; p < remaining.size(); ++p)
      if (!used.count(edit_of(entries[remaining[p]].block)))
        cand.push_back(p);
    if (cand.empty())
      for (std::size_t p = 0; p < remaining.size(); ++p)
        cand.push_back(p);

    std::size_t pick = cand.front();  // entries are best first
    if (temperature > 0 && cand.size() > 1) {
      double top = -INFINITY;
      for (std::size_t p: cand)
        top = std::max(top, entries[remaining[p]].score);
      std::vector<double> w;
      for (std::size_t p: cand)
        w.push_back(std::exp((entries[remaining[p]].score - top) / temperature));
      pick = cand[weighted_index(w, rng)];
    }
    const ReplayEntry &e = entries[remaining[pick]];
    used.insert(edit_of(e.block));
    out.push_back(e);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

double PropertyScoreOracle::score(const MolGraph &mol) {
  const double v = evaluate(oracle_, mol);
  return oracle_.direction == Direction::kHigherBetter ? v : -v;
}

std::string PropertyScoreOracle::name() const {
  return std::string(property_name(oracle_.id));
}

ExternalProcessOracle::ExternalProcessOracle(std::string command)
    : command_(std::move(command)) {
  static std::once_flag ignore_sigpipe;
  std::call_once(ignore_sigpipe, [] { ::signal(SIGPIPE, SIG_IGN); });

  int in[2], out[2];
  if (::pipe2(in, O_CLOEXEC) != 0)
    throw Error(ErrorCode::kIoError, "pipe: " + std::string(std::strerror(errno)));
  if (::pipe2(out, O_CLOEXEC) != 0) {
    ::close(in[0]);
    ::close(in[1]);
    throw Error(ErrorCode::kIoError, "pipe: " + std::string(std::strerror(errno)));
  }
  pid_ = ::fork();
  if (pid_ < 0) {
    for (int fd: { in[0], in[1], out[0], out[1] })
      ::close(fd);
    throw Error(ErrorCode::kIoError, "fork: " + std::string(std::strerror(errno)));
  }
  if (pid_ == 0) {
    ::dup2(in[0], STDIN_FILENO);
    ::dup2(out[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char *>(nullptr));
    ::_exit(127);
  }
  ::close(in[0]);
  ::close(out[1]);
  to_child_ = in[1];
  from_child_ = out[0];
}

ExternalProcessOracle::~ExternalProcessOracle() {
  if (to_child_ >= 0)
    ::close(to_child_);
  if (from_child_ >= 0)
    ::close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
  }
}

double ExternalProcessOracle::score(const MolGraph &mol) {
  const std::string request = canonical_smiles(mol) + "\n";
  for (std::size_t off = 0; off < request.size();) {
    const ssize_t n = ::write(to_child_, request.data() + off, request.size() - off);
    if (n < 0 && errno == EINTR)
      continue;
    if (n <= 0)
      throw Error(ErrorCode::kIoError, "oracle process '" + command_
                                           + "' stopped reading");
    off += static_cast<std::size_t>(n);
  }
  std::size_t nl;
  while ((nl = pending_.find('\n')) == std::string::npos) {
    char buf[4096];
    const ssize_t n = ::read(from_child_, buf, sizeof buf);
    if (n < 0 && errno == EINTR)
      continue;
    if (n <= 0)
      throw Error(ErrorCode::kIoError, "oracle process '" + command_
                                           + "' closed its output");
    pending_.append(buf, static_cast<std::size_t>(n));
  }
  std::string line = pending_.substr(0, nl);
  pending_.erase(0, nl + 1);
  const auto first = line.find_first_not_of(" \t\r");
  const auto last = line.find_last_not_of(" \t\r");
  const std::string text =
      first == std::string::npos ? "" : line.substr(first, last - first + 1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()
      || !std::isfinite(v))
    throw Error(ErrorCode::kMalformedValue,
                "oracle reply is not a finite number: '" + line + "'");
  return v;
}

// ---------------------------------------------------------------------------
// Search loop

void SearchConfig::validate() const {
  auto bad = [](const std::string &what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (budget <= 0)
    bad("budget must be positive");
  if (k_demos < 0)
    bad("k_demos must be non-negative");
  if (candidates_per_step <= 0)
    bad("candidates_per_step must be positive");
  if (similarity_floor && !(*similarity_floor >= 0 && *similarity_floor <= 1))
    bad("similarity floor must lie in [0, 1]");
  if (!std::isfinite(temperature))
    bad("temperature must be finite");
  if (buffer_capacity == 0)
    bad("buffer capacity must be positive");
  if (max_failed_rounds <= 0)
    bad("max_failed_rounds must be positive");
}

double top10_auc(std::span<const OracleCall> calls, int budget) {
  if (calls.empty() || budget <= 0)
    return 0;
  std::vector<double> top;  // ascending, at most 10
  double sum = 0, mean = 0;
  const std::size_t steps = std::max<std::size_t>(static_cast<std::size_t>(budget),
                                                  calls.size());
  for (std::size_t i = 0; i < steps; ++i) {
    if (i < calls.size()) {
      top.insert(std::upper_bound(top.begin(), top.end(), calls[i].score),
                 calls[i].score);
      if (top.size() > 10)
        top.erase(top.begin());
      double s = 0;
      for (double v: top)
        s += v;
      mean = s / static_cast<double>(top.size());
    }
    sum += mean;
  }
  return sum / static_cast<double>(steps);
}

SearchReport run_optimization(std::span<const MolGraph> seeds, Oracle &oracle,
                              ProposalPolicy &policy, const SearchConfig &cfg) {
  cfg.validate();
  if (seeds.empty())
    throw Error(ErrorCode::kInvalidArgument, "at least one seed molecule is required");

  SearchReport rep;
  rep.config = cfg;
  rep.oracle = oracle.name();
  Rng rng(cfg.seed);
  ReplayBuffer buffer(cfg.buffer_capacity);

  struct Known {
    double score;
    std::size_t origin;  // seed index
    bool exhausted = false;
    std::unordered_set<std::string> proposed;  // results offered from here
  };
  std::map<std::string, Known> known;
  std::vector<Fingerprint> seed_fps;
  double best = -INFINITY;

  auto record = [&](const std::string &smiles, double score, int round) {
    if (score > best) {
      best = score;
      rep.best_smiles = smiles;
      rep.best_score = score;
    }
    rep.calls.push_back({ smiles, score, round, best });
  };
  auto budget_left = [&] { return static_cast<int>(rep.calls.size()) < cfg.budget; };

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::string smi = canonical_smiles(seeds[i]);
    const MolGraph mol = parse_smiles(smi);
    seed_fps.push_back(morgan_fingerprint(mol));
    if (auto it = known.find(smi); it != known.end()) {
      rep.seed_scores.push_back(it->second.score);
      continue;
    }
    if (!budget_left()) {
      rep.seed_scores.push_back(NAN);
      continue;
    }
    const double s = oracle.score(mol);
    if (!std::isfinite(s))
      throw Error(ErrorCode::kMalformedValue, "oracle returned a non-finite score for " + smi);
    record(smi, s, 0);
    known.emplace(smi, Known{ s, i, false, {} });
    rep.seed_scores.push_back(s);
  }

  auto feasible = [&](const MolGraph &mol, std::size_t origin) {
    if (cfg.similarity_floor
        && tanimoto(morgan_fingerprint(mol), seed_fps[origin]) < *cfg.similarity_floor)
      return false;
    for (const PropertyBound &b: cfg.extra_constraints) {
      const double v = evaluate(b.property, mol);
      if ((b.min && v < *b.min) || (b.max && v > *b.max))
        return false;
    }
    return true;
  };

  int failed_rounds = 0;
  while (budget_left()) {
    // Best molecule not yet exhausted; std::map order breaks score ties.
    auto current = known.end();
    for (auto it = known.begin(); it != known.end(); ++it)
      if (!it->second.exhausted
          && (current == known.end() || it->second.score > current->second.score))
        current = it;
    if (current == known.end()) {
      rep.exhausted = true;
      break;
    }
    ++rep.rounds;
    const std::string cur_smiles = current->first;
    const std::size_t origin = current->second.origin;
    const MolGraph cur = parse_smiles(cur_smiles);
    std::vector<ReplayEntry> demos;
    if (!buffer.empty() && cfg.k_demos > 0)
      demos = sample_demos(buffer, cfg.k_demos, cfg.temperature, rng);
    const auto blocks = policy.propose(
        cur, demos, static_cast<std::size_t>(cfg.candidates_per_step));
    rep.proposals += static_cast<long>(blocks.size());

    int valid = 0, scored = 0, unseen = 0;
    for (const ModificationBlock &b: blocks)
      unseen += known.at(cur_smiles).proposed.insert(b.result_smiles).second;
    for (const ModificationBlock &b: blocks) {
      if (verify_block(cur, b) != Verdict::kOk) {
        ++rep.invalid;
        continue;
      }
      const MolGraph mol = parse_smiles(b.result_smiles);
      const std::string smi = canonical_smiles(mol);
      if (!feasible(mol, origin)) {
        ++rep.infeasible;
        continue;
      }
      ++valid;
      if (known.count(smi)) {
        ++rep.repeated;
        continue;
      }
      if (!budget_left())
        break;
      const double s = oracle.score(mol);
      if (!std::isfinite(s))
        throw Error(ErrorCode::kMalformedValue,
                    "oracle returned a non-finite score for " + smi);
      record(smi, s, rep.rounds);
      known.emplace(smi, Known{ s, origin, false, {} });
      ModificationBlock kept = b;
      kept.result_smiles = smi;
      buffer.insert({ cur_smiles, kept, smi, s });
      ++scored;
    }
    // Nothing scored and nothing new offered: asking again cannot help.
    if (scored == 0 && unseen == 0)
      known.at(cur_smiles).exhausted = true;
    failed_rounds = valid == 0 ? failed_rounds + 1 : 0;
    if (failed_rounds >= cfg.max_failed_rounds) {
      rep.policy_failure = true;
      break;
    }
  }
  rep.top10_auc = top10_auc(rep.calls, cfg.budget);
  return rep;
}

std::string to_json(const SearchReport &r) {
  using nlohmann::ordered_json;
  auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); };
  ordered_json cfg;
  cfg["budget"] = r.config.budget;
  cfg["k_demos"] = r.config.k_demos;
  cfg["candidates_per_step"] = r.config.candidates_per_step;
  cfg["similarity_floor"] =
      r.config.similarity_floor ? ordered_json(*r.config.similarity_floor) : ordered_json();
  ordered_json bounds = ordered_json::array();
  for (const PropertyBound &b: r.config.extra_constraints)
    bounds.push_back({ { "property", std::string(property_name(b.property)) },
                       { "min", b.min ? ordered_json(*b.min) : ordered_json() },
                       { "max", b.max ? ordered_json(*b.max) : ordered_json() } });
  cfg["extra_constraints"] = bounds;
  cfg["temperature"] = r.config.temperature;
  cfg["seed"] = r.config.seed;
  cfg["buffer_capacity"] = r.config.buffer_capacity;
  cfg["max_failed_rounds"] = r.config.max_failed_rounds;

  ordered_json calls = ordered_json::array();
  for (const OracleCall &c: r.calls)
    calls.push_back({ { "smiles", c.smiles }, { "score", c.score }, { "round", c.round } });
  ordered_json seeds = ordered_json::array();
  for (double s: r.seed_scores)
    seeds.push_back(num(s));

  ordered_json j;
  j["config"] = cfg;
  j["oracle"] = r.oracle;
  j["oracle_calls"] = r.calls.size();
  j["best"] = { { "smiles", r.best_smiles }, { "score", num(r.best_score) } };
  j["top10_auc"] = r.top10_auc;
  j["seed_scores"] = seeds;
  j["rounds"] = r.rounds;
  j["proposals"] = r.proposals;
  j["invalid"] = r.invalid;
  j["infeasible"] = r.infeasible;
  j["repeated"] = r.repeated;
  j["policy_failure"] = r.policy_failure;
  j["exhausted"] = r.exhausted;
  j["calls"] = calls;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Edit-table policy

namespace {

struct Site {
  Fragment fragment;
  std::string key;
  std::optional<EnvironmentKey> env;
  double weakness = 0;  // larger = replace first
  bool has_entries = false;
};

class EditTablePolicy final: public ProposalPolicy {
public:
  EditTablePolicy(ReplacementPool pool, EditTableConfig cfg)
      : pool_(std::move(pool)), cfg_(cfg) {}

  std::vector<ModificationBlock> propose(const MolGraph &current,
                                         std::span<const ReplayEntry> demos,
                                         std::size_t n) override {
    // Same graph the verifier sees.
    const std::string self = canonical_smiles(current);
    const MolGraph mol = parse_smiles(self);
    std::vector<ModificationBlock> out;
    std::unordered_set<std::string> results;
    auto push = [&](ModificationBlock b) {
      if (out.size() < n && results.insert(b.result_smiles).second)
        out.push_back(std::move(b));
    };

    std::vector<const ReplayEntry *> ranked;
    for (const ReplayEntry &d: demos)
      ranked.push_back(&d);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const ReplayEntry *a, const ReplayEntry *b) {
                       return entry_before(*a, *b);
                     });
    for (const ReplayEntry *d: ranked)
      if (auto b = make_block(mol, self, d->block.frag_src, d->block.frag_tgt))
        push(std::move(*b));

    // Table proposals continue where the previous call for this molecule
    // stopped.
    auto [it, fresh] = expansions_.try_emplace(self);
    Expansion &e = it->second;
    if (fresh)
      for (const Site &site: sites(mol))
        if (site.has_entries)
          e.lists.push_back({ site.key, candidates(site) });
    while (out.size() < n && e.list < e.lists.size()) {
      const auto &[key, cands] = e.lists[e.list];
      if (e.cand >= cands.size()) {
        ++e.list;
        e.cand = 0;
        continue;
      }
      const Replacement &r = cands[e.cand++];
      auto b = make_block(mol, self, key, r.frag_tgt);
      if (b && e.results.insert(b->result_smiles).second)
        push(std::move(*b));
    }
    return out;
  }

private:
  struct Expansion {
    std::vector<std::pair<std::string, std::span<const Replacement>>> lists;
    std::size_t list = 0, cand = 0;
    std::unordered_set<std::string> results;
  };

  std::optional<ModificationBlock> make_block(const MolGraph &mol,
                                              const std::string &self,
                                              const std::string &src,
                                              const std::string &tgt) {
    // Result size is known before the edit is made.
    const int src_heavy = heavy_atoms_of(src), tgt_heavy = heavy_atoms_of(tgt);
    if (src_heavy < 0 || tgt_heavy < 0
        || mol.num_heavy_atoms() - src_heavy + tgt_heavy > cfg_.max_result_atoms)
      return std::nullopt;
    std::string res;
    try {
      res = apply_edit_smiles(mol, src, tgt);
    } catch (const Error &) {
      return std::nullopt;
    }
    if (res == self)
      return std::nullopt;
    return ModificationBlock{ src, tgt, res, std::nullopt, ValueKey::kValue };
  }

  std::span<const Replacement> candidates(const Site &s) const {
    if (s.env)
      return pool_.lookup(*s.env, s.key).candidates;
    const auto it = pool_.global.find(s.key);
    return it == pool_.global.end() ? std::span<const Replacement>()
                                    : std::span<const Replacement>(it->second);
  }

  // Fragments of all decompositions plus every small single-cut substituent,
  // weakest first.
  std::vector<Site> sites(const MolGraph &mol) const {
    std::vector<Fragment> frags;
    std::set<std::vector<int>> seen;
    auto take = [&](Fragment f) {
      if (f.attachment_pairs.empty() || !seen.insert(f.host_atom_indices).second)
        return;
      frags.push_back(std::move(f));
    };
    for (DecompositionMethod m: { DecompositionMethod::kMurcko,
                                  DecompositionMethod::kBrics,
                                  DecompositionMethod::kEfg }) {
      Decomposition d = decompose(mol, m);
      if (d.fragments.size() >= 2)
        for (Fragment &f: d.fragments)
          take(std::move(f));
    }
    const int heavy = mol.num_heavy_atoms();
    for (int b = 0; b < mol.num_bonds(); ++b) {
      const Bond &bond = mol.bond(b);
      if (mol.bond_in_ring(b) || bond.order != BondOrder::kSingle
          || !mol.atom(bond.begin).is_heavy() || !mol.atom(bond.end).is_heavy())
        continue;
      if (!small_side(mol, bond.begin, bond.end) && !small_side(mol, bond.end, bond.begin))
        continue;
      const int cut[] = { b };
      for (Fragment &f: split_at_bonds(mol, cut))
        if (f.num_heavy_atoms() <= cfg_.max_fragment_atoms
            && f.num_heavy_atoms() < heavy)
          take(std::move(f));
    }

    std::vector<Site> out;
    for (Fragment &f: frags) {
      Site s;
      s.key = fragment_key(f.graph);
      try {
        s.env = environment_key(mol, f, pool_.radius);
      } catch (const Error &) {
      }
      const auto c = candidates(s);
      s.has_entries = !c.empty();
      s.weakness = c.empty() ? -INFINITY : c.front().mean_delta;
      s.fragment = std::move(f);
      out.push_back(std::move(s));
    }
    if (cfg_.surrogate) {
      Decomposition d;
      for (const Site &s: out)
        d.fragments.push_back(s.fragment);
      const auto rec = attribute(mol, d, *cfg_.surrogate, cfg_.removal);
      const double sign =
          cfg_.surrogate->direction == Direction::kHigherBetter ? -1.0 : 1.0;
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i].weakness = sign * rec[i].per_atom_score;
    }
    std::sort(out.begin(), out.end(), [](const Site &a, const Site &b) {
      if (a.weakness != b.weakness)
        return a.weakness > b.weakness;
      if (a.key != b.key)
        return a.key < b.key;
      return a.fragment.host_atom_indices < b.fragment.host_atom_indices;
    });
    return out;
  }

  // -1 for strings that do not parse.
  int heavy_atoms_of(const std::string &smiles) {
    auto [it, fresh] = heavy_cache_.try_emplace(smiles, -1);
    if (fresh) {
      try {
        it->second = parse_smiles(smiles).num_heavy_atoms();
      } catch (const Error &) {
      }
    }
    return it->second;
  }

  // Whether the side of bond (from, away) holding `from` has at most
  // max_fragment_atoms heavy atoms; stops counting early.
  bool small_side(const MolGraph &mol, int from, int away) const {
    std::vector<char> seen(static_cast<std::size_t>(mol.num_atoms()), 0);
    std::vector<int> stack = { from };
    seen[static_cast<std::size_t>(from)] = seen[static_cast<std::size_t>(away)] = 1;
    int count = 0;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      if (mol.atom(a).is_heavy() && ++count > cfg_.max_fragment_atoms)
        return false;
      for (const auto &nb: mol.neighbors(a))
        if (!seen[static_cast<std::size_t>(nb.atom)]) {
          seen[static_cast<std::size_t>(nb.atom)] = 1;
          stack.push_back(nb.atom);
        }
    }
    return true;
  }

  ReplacementPool pool_;
  EditTableConfig cfg_;
  std::unordered_map<std::string, int> heavy_cache_;
  std::unordered_map<std::string, Expansion> expansions_;
};

}  // namespace

std::unique_ptr<ProposalPolicy> edit_table_policy(const ReplacementPool &pool,
                                                  EditTableConfig cfg) {
  if (pool.empty())
    throw Error(ErrorCode::kInvalidArgument, "edit-table policy needs a non-empty pool");
  return std::make_unique<EditTablePolicy>(pool, cfg);
}

}  // namespace forge
