//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/smeplus.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "forge/error.hpp"
#include "forge/parallel.hpp"
#include "forge/query.hpp"
#include "forge/smiles.hpp"

namespace forge {

namespace {

// label -> dummy atom index; throws kLabelMismatch on unlabelled or
// repeated labels.
std::map<int, int> dummies_by_label(const MolGraph &g, const char *which) {
  std::map<int, int> out;
  for (int i = 0; i < g.num_atoms(); ++i) {
    const Atom &a = g.atom(i);
    if (!a.is_dummy())
      continue;
    if (!a.attachment_label || g.degree(i) != 1)
      throw Error(ErrorCode::kLabelMismatch,
                  std::string(which) + " has an unlabelled attachment point");
    if (!out.emplace(*a.attachment_label, i).second)
      throw Error(ErrorCode::kLabelMismatch,
                  std::string(which) + " repeats an attachment label");
  }
  return out;
}

MolGraph join_at(const MolGraph &src, const MolGraph &pattern,
                 const std::vector<int> &mapping, const MolGraph &tgt) {
  const auto src_dummies = dummies_by_label(pattern, "frag_src");
  const auto tgt_dummies = dummies_by_label(tgt, "frag_tgt");
  {
    std::vector<int> a, b;
    for (const auto &[k, i]: src_dummies)
      a.push_back(k);
    for (const auto &[k, i]: tgt_dummies)
      b.push_back(k);
    if (a != b)
      throw Error(ErrorCode::kLabelMismatch,
                  "frag_src and frag_tgt attachment labels differ");
  }

  std::vector<bool> removed(src.num_atoms(), false);
  for (int i = 0; i < pattern.num_atoms(); ++i)
    if (!pattern.atom(i).is_dummy())
      removed[mapping[i]] = true;

  std::vector<int> local(src.num_atoms(), -1);
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  for (int i = 0; i < src.num_atoms(); ++i)
    if (!removed[i]) {
      local[i] = static_cast<int>(atoms.size());
      atoms.push_back(src.atom(i));
    }
  for (const Bond &b: src.bonds())
    if (!removed[b.begin] && !removed[b.end])
      bonds.push_back({ local[b.begin], local[b.end], b.order, 0 });

  std::vector<int> tgt_local(tgt.num_atoms(), -1);
  for (int i = 0; i < tgt.num_atoms(); ++i)
    if (!tgt.atom(i).is_dummy()) {
      tgt_local[i] = static_cast<int>(atoms.size());
      atoms.push_back(tgt.atom(i));
    }
  for (const Bond &b: tgt.bonds())
    if (tgt_local[b.begin] >= 0 && tgt_local[b.end] >= 0)
      bonds.push_back({ tgt_local[b.begin], tgt_local[b.end], b.order, 0 });

  std::set<std::pair<int, int>> joined;
  for (const auto &[label, sd]: src_dummies) {
    const int td = tgt_dummies.at(label);
    const Neighbor sn = pattern.neighbors(sd)[0];
    const Neighbor tn = tgt.neighbors(td)[0];
    const BondOrder old_order = pattern.bond(sn.bond).order;
    const BondOrder new_order = tgt.bond(tn.bond).order;
    const int host = local[mapping[sd]];
    const int guest = tgt_local[tn.atom];
    if (host < 0 || guest < 0)
      throw Error(ErrorCode::kValenceError, "attachment joins two dummies");
    if (!joined.emplace(std::min(host, guest), std::max(host, guest)).second)
      throw Error(ErrorCode::kValenceError,
                  "two attachment points join the same atom pair");
    Atom &h = atoms[host];
    h.hydrogens += valence_contribution(old_order)
                   - valence_contribution(new_order);
    if (h.hydrogens < 0)
      throw Error(ErrorCode::kValenceError,
                  "attachment atom lacks hydrogens for the new bond");
    bonds.push_back({ host, guest, new_order, 0 });
  }
  MolGraph out(std::move(atoms), std::move(bonds));
  check_valence(out);
  return normalize(out);
}

MatchOptions exact_options() {
  MatchOptions opt;
  opt.exact_degree = true;
  opt.match_hydrogens = true;
  return opt;
}

int attachment_count(const std::string &key) {
  return static_cast<int>(std::count(key.begin(), key.end(), '*'));
}

struct Mean {
  double sum = 0;
  int n = 0;
  double value() const { return n ? sum / n : 0; }
};

// Candidates for `src` among `means` (same attachment count, positive
// delta), best first.
std::vector<Replacement> rank_candidates(const std::string &src,
                                         const std::map<std::string, Mean> &means,
                                         double sign, std::size_t cap) {
  const double mu = means.at(src).value();
  const int n_attach = attachment_count(src);
  std::vector<Replacement> out;
  for (const auto &[key, m]: means) {
    if (key == src || attachment_count(key) != n_attach)
      continue;
    const double delta = sign * (m.value() - mu);
    if (delta > 0)
      out.push_back({ key, delta, m.n });
  }
  auto better = [](const Replacement &a, const Replacement &b) {
    if (a.mean_delta != b.mean_delta)
      return a.mean_delta > b.mean_delta;
    return a.frag_tgt < b.frag_tgt;
  };
  if (out.size() > cap) {
    std::partial_sort(out.begin(), out.begin() + cap, out.end(), better);
    out.resize(cap);
  } else {
    std::sort(out.begin(), out.end(), better);
  }
  return out;
}

void sort_replacements(std::vector<Replacement> &v) {
  std::sort(v.begin(), v.end(), [](const Replacement &a, const Replacement &b) {
    if (a.mean_delta != b.mean_delta)
      return a.mean_delta > b.mean_delta;
    return a.frag_tgt < b.frag_tgt;
  });
}

VrConfig occurrence_config(const MineConfig &cfg) {
  VrConfig v;
  v.method = cfg.method;
  v.removal = cfg.removal;
  v.seed = cfg.seed;
  v.threads = cfg.threads;
  return v;
}

}  // namespace

ReplacementPool::Lookup ReplacementPool::lookup(const EnvironmentKey &env,
                                                const std::string &frag_src) const {
  if (auto bin = by_env.find(env); bin != by_env.end())
    if (auto it = bin->second.find(frag_src);
        it != bin->second.end() && !it->second.empty())
      return { it->second, false };
  if (auto it = global.find(frag_src); it != global.end())
    return { it->second, true };
  return { {}, true };
}

double ReplacementPool::normalize(double value) const {
  return normalize_score(value, prop_min, prop_max, oracle.direction);
}

std::optional<std::vector<int>> edit_site(const MolGraph &src,
                                          const MolGraph &frag_src) {
  const Query q = Query::from_graph(frag_src);
  auto matches = find_matches(q, src, exact_options());
  if (matches.empty())
    return std::nullopt;
  return std::move(matches.front());
}

MolGraph apply_edit(const MolGraph &src, std::string_view frag_src,
                    std::string_view frag_tgt) {
  const MolGraph pattern = parse_smiles(frag_src);
  const MolGraph tgt = parse_smiles(frag_tgt);
  // Label consistency is checked before matching so a mismatch is reported
  // even when frag_src is absent.
  {
    const auto a = dummies_by_label(pattern, "frag_src");
    const auto b = dummies_by_label(tgt, "frag_tgt");
    if (a.size() != b.size()
        || !std::equal(a.begin(), a.end(), b.begin(),
                       [](auto &x, auto &y) { return x.first == y.first; }))
      throw Error(ErrorCode::kLabelMismatch,
                  "frag_src and frag_tgt attachment labels differ");
  }
  if (pattern.empty())
    throw Error(ErrorCode::kNoMatch, "empty frag_src");
  const auto site = edit_site(src, pattern);
  if (!site)
    throw Error(ErrorCode::kNoMatch,
                "frag_src '" + std::string(frag_src) + "' not found");
  return join_at(src, pattern, *site, tgt);
}

std::string apply_edit_smiles(const MolGraph &src, std::string_view frag_src,
                              std::string_view frag_tgt) {
  return canonical_smiles(apply_edit(src, frag_src, frag_tgt));
}

ReplacementPool build_pool(std::span<const MolGraph> corpus,
                           std::span<const Occurrence> occurrences,
                           const PropertyOracle &oracle,
                           const MineConfig &cfg) {
  ReplacementPool pool;
  pool.oracle = oracle;
  pool.radius = cfg.radius;
  pool.min_bin = cfg.min_bin;

  // Normalization range over the corpus; a degenerate range is widened so
  // that tiny corpora still normalize.
  const auto values = parallel_map<std::optional<double>>(
      corpus.size(), cfg.threads, [&](std::size_t i) -> std::optional<double> {
        try {
          return evaluate(oracle, corpus[i]);
        } catch (const Error &) {
          return std::nullopt;
        }
      });
  bool any = false;
  for (const auto &v: values) {
    if (!v)
      continue;
    pool.prop_min = any ? std::min(pool.prop_min, *v) : *v;
    pool.prop_max = any ? std::max(pool.prop_max, *v) : *v;
    any = true;
  }
  if (!any) {
    pool.prop_min = 0;
    pool.prop_max = 1;
  } else if (pool.prop_max <= pool.prop_min) {
    pool.prop_min -= 0.5;
    pool.prop_max += 0.5;
  }

  const double sign = oracle.direction == Direction::kHigherBetter ? 1 : -1;
  const std::size_t cap = static_cast<std::size_t>(std::max(1, cfg.max_candidates));

  const auto envs = parallel_map<EnvironmentKey>(
      occurrences.size(), cfg.threads, [&](std::size_t i) {
        const Occurrence &o = occurrences[i];
        return environment_key(corpus[o.molecule], o.fragment, cfg.radius);
      });

  std::map<std::string, Mean> global_means;
  std::map<EnvironmentKey, std::map<std::string, Mean>> bins;
  std::map<EnvironmentKey, int> bin_sizes;
  for (std::size_t i = 0; i < occurrences.size(); ++i) {
    const Occurrence &o = occurrences[i];
    Mean &g = global_means[o.fragment_key];
    g.sum += o.raw_delta;
    ++g.n;
    Mean &b = bins[envs[i]][o.fragment_key];
    b.sum += o.raw_delta;
    ++b.n;
    ++bin_sizes[envs[i]];
  }

  for (const auto &[env, means]: bins) {
    if (bin_sizes[env] < cfg.min_bin || means.size() < 2)
      continue;
    auto &slot = pool.by_env[env];
    for (const auto &[src, m]: means) {
      std::vector<Replacement> c = rank_candidates(src, means, sign, cap);
      if (!c.empty())
        slot[src] = std::move(c);
    }
    if (slot.empty())
      pool.by_env.erase(env);
  }

  for (const auto &[src, m]: global_means) {
    std::vector<Replacement> c = rank_candidates(src, global_means, sign, cap);
    // Every env-bin candidate is also listed globally, with its global mean.
    std::set<std::string> present;
    for (const Replacement &r: c)
      present.insert(r.frag_tgt);
    for (const auto &[env, srcs]: pool.by_env) {
      auto it = srcs.find(src);
      if (it == srcs.end())
        continue;
      for (const Replacement &r: it->second)
        if (present.insert(r.frag_tgt).second) {
          const Mean &t = global_means.at(r.frag_tgt);
          c.push_back({ r.frag_tgt, sign * (t.value() - m.value()), t.n });
        }
    }
    sort_replacements(c);
    if (!c.empty())
      pool.global[src] = std::move(c);
  }
  return pool;
}

ReplacementPool build_pool(std::span<const MolGraph> corpus,
                           const PropertyOracle &oracle,
                           const MineConfig &cfg) {
  const auto occ = collect_occurrences(corpus, oracle, occurrence_config(cfg));
  return build_pool(corpus, occ, oracle, cfg);
}

ReplacementPool pool_from_pairs(std::span<const EditPair> pairs, int radius) {
  ReplacementPool pool;
  pool.radius = radius;
  pool.min_bin = 1;
  if (!pairs.empty())
    pool.oracle.id = pairs.front().property;
  std::map<EnvironmentKey, std::map<std::string, std::map<std::string, Mean>>> env_means;
  std::map<std::string, std::map<std::string, Mean>> global_means;
  for (const EditPair &p: pairs) {
    Mean &e = env_means[p.env_key][p.frag_src][p.frag_tgt];
    e.sum += p.improvement();
    ++e.n;
    Mean &g = global_means[p.frag_src][p.frag_tgt];
    g.sum += p.improvement();
    ++g.n;
  }
  for (const auto &[env, srcs]: env_means)
    for (const auto &[src, tgts]: srcs) {
      auto &v = pool.by_env[env][src];
      for (const auto &[tgt, m]: tgts)
        v.push_back({ tgt, m.value(), m.n });
      sort_replacements(v);
    }
  for (const auto &[src, tgts]: global_means) {
    auto &v = pool.global[src];
    for (const auto &[tgt, m]: tgts)
      v.push_back({ tgt, m.value(), m.n });
    sort_replacements(v);
  }
  return pool;
}

std::vector<EditPair> mine_pairs(std::span<const MolGraph> corpus,
                                 std::span<const Occurrence> occurrences,
                                 const ReplacementPool &pool,
                                 const MineConfig &cfg, MiningReport *report) {
  std::vector<std::vector<std::string>> keys_by_mol(corpus.size());
  for (const Occurrence &o: occurrences) {
    auto &v = keys_by_mol[o.molecule];
    if (std::find(v.begin(), v.end(), o.fragment_key) == v.end())
      v.push_back(o.fragment_key);
  }

  struct Local {
    std::vector<EditPair> pairs;
    MiningReport counts;
  };
  const std::size_t cap = static_cast<std::size_t>(std::max(0, cfg.max_candidates));
  auto per_mol = parallel_map<Local>(corpus.size(), cfg.threads, [&](std::size_t i) {
    Local out;
    if (keys_by_mol[i].empty())
      return out;
    ++out.counts.molecules;
    // Mine on the canonical parse so that apply_edit on src_smiles sees the
    // same atom order and hence the same site.
    std::string src_smiles;
    MolGraph mol;
    double score_src;
    try {
      src_smiles = canonical_smiles(corpus[i]);
      mol = parse_smiles(src_smiles);
      score_src = pool.normalize(evaluate(pool.oracle, mol));
    } catch (const Error &) {
      return out;
    }
    std::unordered_set<std::string> seen_tgt;
    for (const std::string &key: keys_by_mol[i]) {
      const MolGraph pattern = parse_smiles(key);
      const auto site = edit_site(mol, pattern);
      if (!site)
        continue;
      std::vector<int> atoms;
      for (int a = 0; a < pattern.num_atoms(); ++a)
        if (!pattern.atom(a).is_dummy())
          atoms.push_back((*site)[a]);
      EnvironmentKey env;
      try {
        env = environment_key(mol, extract_fragment(mol, atoms), pool.radius);
      } catch (const Error &) {
        continue;
      }
      ++out.counts.sites;
      const auto look = pool.lookup(env, key);
      const std::size_t n = std::min(cap, look.candidates.size());
      for (std::size_t c = 0; c < n; ++c) {
        const std::string &frag_tgt = look.candidates[c].frag_tgt;
        ++out.counts.candidates_tried;
        std::string tgt_smiles;
        double score_tgt;
        try {
          const MolGraph tgt = join_at(mol, pattern, *site, parse_smiles(frag_tgt));
          tgt_smiles = canonical_smiles(tgt);
          score_tgt = pool.normalize(evaluate(pool.oracle, tgt));
        } catch (const Error &) {
          ++out.counts.apply_failures;
          continue;
        }
        if (tgt_smiles == src_smiles || !seen_tgt.insert(tgt_smiles).second) {
          ++out.counts.duplicates;
          continue;
        }
        if (!(score_tgt - score_src > cfg.min_improvement)) {
          ++out.counts.below_threshold;
          continue;
        }
        EditPair p;
        p.src_smiles = src_smiles;
        p.tgt_smiles = std::move(tgt_smiles);
        p.frag_src = key;
        p.frag_tgt = frag_tgt;
        p.property = pool.oracle.id;
        p.score_src = score_src;
        p.score_tgt = score_tgt;
        p.env_key = env;
        p.from_global = look.from_global;
        out.pairs.push_back(std::move(p));
      }
    }
    return out;
  });

  MiningReport total;
  std::vector<EditPair> pairs;
  std::set<std::pair<std::string, std::string>> seen;
  std::unordered_map<std::string, int> per_edit;
  for (Local &l: per_mol) {
    total.molecules += l.counts.molecules;
    total.sites += l.counts.sites;
    total.candidates_tried += l.counts.candidates_tried;
    total.apply_failures += l.counts.apply_failures;
    total.below_threshold += l.counts.below_threshold;
    total.duplicates += l.counts.duplicates;
    for (EditPair &p: l.pairs) {
      if (!seen.emplace(p.src_smiles, p.tgt_smiles).second) {
        ++total.duplicates;
        continue;
      }
      int &count = per_edit[p.edit_string()];
      if (count >= cfg.dedup_cap) {
        ++total.capped;
        continue;
      }
      ++count;
      if (p.from_global)
        ++total.from_global;
      pairs.push_back(std::move(p));
    }
  }
  total.emitted = static_cast<long>(pairs.size());
  if (report)
    *report = total;
  return pairs;
}

std::vector<EditPair> mine_pairs(std::span<const MolGraph> corpus,
                                 const ReplacementPool &pool,
                                 const MineConfig &cfg, MiningReport *report) {
  const auto occ = collect_occurrences(corpus, pool.oracle,
                                       occurrence_config(cfg));
  return mine_pairs(corpus, occ, pool, cfg, report);
}

std::vector<Trajectory> chain_trajectories(std::span<const EditPair> pairs,
                                           int max_steps) {
  if (max_steps < 1 || max_steps > kMaxTrajectorySteps)
    throw Error(ErrorCode::kInvalidArgument, "max_steps must be in [1, 6]");
  using Node = std::pair<PropertyId, std::string>;
  std::map<Node, std::vector<int>> outgoing;
  std::set<Node> targets;
  for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
    outgoing[{ pairs[i].property, pairs[i].src_smiles }].push_back(i);
    targets.insert({ pairs[i].property, pairs[i].tgt_smiles });
  }

  std::vector<bool> used(pairs.size(), false);
  std::vector<Trajectory> out;
  auto grow = [&](int start) {
    Trajectory t;
    std::set<std::string> visited = { pairs[start].src_smiles,
                                      pairs[start].tgt_smiles };
    t.steps.push_back(pairs[start]);
    used[start] = true;
    while (static_cast<int>(t.steps.size()) < max_steps) {
      const EditPair &cur = t.steps.back();
      auto it = outgoing.find({ cur.property, cur.tgt_smiles });
      if (it == outgoing.end())
        break;
      int best = -1;
      for (int j: it->second) {
        const EditPair &p = pairs[j];
        if (p.score_tgt <= cur.score_tgt || visited.count(p.tgt_smiles))
          continue;
        if (best < 0 || p.score_tgt > pairs[best].score_tgt)
          best = j;
      }
      if (best < 0)
        break;
      used[best] = true;
      visited.insert(pairs[best].tgt_smiles);
      t.steps.push_back(pairs[best]);
    }
    out.push_back(std::move(t));
  };
  for (int i = 0; i < static_cast<int>(pairs.size()); ++i)
    if (!used[i] && !targets.count({ pairs[i].property, pairs[i].src_smiles })
        && pairs[i].score_tgt > pairs[i].score_src)
      grow(i);
  for (int i = 0; i < static_cast<int>(pairs.size()); ++i)
    if (!used[i] && pairs[i].score_tgt > pairs[i].score_src)
      grow(i);
  return out;
}

}  // namespace forge
