//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/context.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <unordered_map>

#include "forge/error.hpp"
#include "forge/fingerprint.hpp"
#include "forge/hash.hpp"
#include "forge/parallel.hpp"

namespace forge {

namespace {

// Population variance times n (sum of squared deviations).
double sum_sq(std::span<const double> xs) {
  if (xs.empty())
    return 0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double s = 0;
  for (double x: xs)
    s += (x - mean) * (x - mean);
  return s;
}

// Scores sliced into groups given by consecutive sizes.
double pooled_std(std::span<const double> scores,
                  std::span<const int> sizes) {
  double total = 0;
  std::size_t pos = 0;
  for (int n: sizes) {
    total += sum_sq(scores.subspan(pos, n));
    pos += n;
  }
  return std::sqrt(total / scores.size());
}

double vr_of(double grouped, double original) {
  if (original <= 0)
    return 0;
  return std::clamp(1.0 - grouped / original, 0.0, 1.0);
}

}  // namespace

std::string to_hex(const EnvironmentKey &key) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(key.digest));
  return buf;
}

EnvironmentKey environment_key(const MolGraph &host, const Fragment &frag,
                               int radius) {
  if (radius < 0)
    throw Error(ErrorCode::kInvalidArgument, "radius must be >= 0");
  std::vector<bool> removed(host.num_atoms(), false);
  for (int a: frag.host_atom_indices) {
    if (a < 0 || a >= host.num_atoms())
      throw Error(ErrorCode::kInvalidArgument,
                  "fragment does not belong to the molecule");
    removed[a] = true;
  }
  std::vector<int> local(host.num_atoms(), -1);
  std::vector<Atom> atoms;
  for (int i = 0; i < host.num_atoms(); ++i)
    if (!removed[i]) {
      local[i] = static_cast<int>(atoms.size());
      atoms.push_back(host.atom(i));
    }
  std::vector<Bond> bonds;
  for (const Bond &b: host.bonds())
    if (!removed[b.begin] && !removed[b.end])
      bonds.push_back({ local[b.begin], local[b.end], b.order, 0 });
  std::vector<int> anchors;
  for (const AttachmentPair &p: frag.attachment_pairs) {
    if (p.host_atom < 0 || p.host_atom >= host.num_atoms()
        || removed[p.host_atom])
      continue;
    Atom dummy;
    dummy.atomic_number = 0;
    atoms.push_back(dummy);
    bonds.push_back({ local[p.host_atom], static_cast<int>(atoms.size()) - 1,
                      p.order, 0 });
    anchors.push_back(local[p.host_atom]);
  }
  if (anchors.empty())
    throw Error(ErrorCode::kNoAttachment, "fragment has no attachment point");

  const MolGraph rest(std::move(atoms), std::move(bonds));
  const auto ids = morgan_identifiers(rest, radius);
  std::vector<std::uint64_t> values;
  values.reserve(anchors.size() + 1);
  for (int a: anchors)
    values.push_back(ids[radius][a]);
  std::sort(values.begin(), values.end());
  values.insert(values.begin(), static_cast<std::uint64_t>(radius));
  return { radius, hash_range(values) };
}

VarianceReport variance_reduction(std::span<const ScoredSample> samples,
                                  int shuffles, Rng &rng) {
  if (samples.size() < 2)
    throw Error(ErrorCode::kTooFewSamples,
                "variance reduction needs at least 2 samples");
  if (shuffles < 1)
    throw Error(ErrorCode::kInvalidArgument, "shuffles must be >= 1");

  // Group in key order; scores laid out group by group.
  std::map<EnvironmentKey, std::vector<double>> groups;
  for (const ScoredSample &s: samples)
    groups[s.env].push_back(s.score);
  std::vector<double> scores;
  std::vector<int> sizes;
  for (const auto &[key, xs]: groups) {
    scores.insert(scores.end(), xs.begin(), xs.end());
    sizes.push_back(static_cast<int>(xs.size()));
  }

  VarianceReport r;
  r.n_occurrences = static_cast<int>(samples.size());
  r.n_environments = static_cast<int>(groups.size());
  r.sigma_original = std::sqrt(sum_sq(scores) / scores.size());
  r.sigma_grouped = pooled_std(scores, sizes);
  r.vr = vr_of(r.sigma_grouped, r.sigma_original);

  double total = 0;
  std::vector<double> shuffled = scores;
  for (int k = 0; k < shuffles; ++k) {
    shuffle(std::span<double>(shuffled), rng);
    total += vr_of(pooled_std(shuffled, sizes), r.sigma_original);
  }
  r.shuffled_vr_mean = total / shuffles;
  r.delta = r.vr - r.shuffled_vr_mean;
  return r;
}

std::vector<Occurrence> collect_occurrences(std::span<const MolGraph> corpus,
                                            const PropertyOracle &oracle,
                                            const VrConfig &cfg) {
  auto per_mol = parallel_map<std::vector<Occurrence>>(
      corpus.size(), cfg.threads, [&](std::size_t i) {
        std::vector<Occurrence> out;
        const MolGraph &mol = corpus[i];
        if (mol.empty() || mol.has_dummy())
          return out;
        try {
          Decomposition d;
          if (cfg.method) {
            d = decompose(mol, *cfg.method);
          } else {
            Rng rng = split_rng(cfg.seed, i);
            d = auto_decompose(mol, rng);
          }
          if (d.fragments.size() < 2)
            return out;
          for (AttributionRecord &rec:
               attribute(mol, d, oracle, cfg.removal)) {
            Occurrence occ;
            occ.molecule = static_cast<int>(i);
            occ.fragment_key = fragment_key(rec.fragment.graph);
            occ.score = rec.per_atom_score;
            occ.raw_delta = rec.raw_delta;
            occ.fragment = std::move(rec.fragment);
            out.push_back(std::move(occ));
          }
        } catch (const Error &) {
          out.clear();
        }
        return out;
      });
  std::vector<Occurrence> all;
  for (auto &v: per_mol)
    for (Occurrence &o: v)
      all.push_back(std::move(o));
  return all;
}

VrStudy vr_study(std::span<const MolGraph> corpus,
                 std::span<const Occurrence> occurrences, int radius,
                 int top_k, const VrConfig &cfg) {
  std::map<std::string, std::vector<int>> by_key;
  for (std::size_t i = 0; i < occurrences.size(); ++i)
    by_key[occurrences[i].fragment_key].push_back(static_cast<int>(i));

  std::vector<const std::pair<const std::string, std::vector<int>> *> ranked;
  for (const auto &entry: by_key)
    if (entry.second.size() >= 2)
      ranked.push_back(&entry);
  std::stable_sort(ranked.begin(), ranked.end(), [](auto *a, auto *b) {
    return a->second.size() > b->second.size();
  });
  VrStudy study;
  study.n_fragments = static_cast<int>(ranked.size());
  if (top_k >= 0 && ranked.size() > static_cast<std::size_t>(top_k))
    ranked.resize(top_k);

  study.reports = parallel_map<VarianceReport>(
      ranked.size(), cfg.threads, [&](std::size_t f) {
        const auto &[key, members] = *ranked[f];
        std::vector<ScoredSample> samples;
        samples.reserve(members.size());
        for (int m: members) {
          const Occurrence &o = occurrences[m];
          samples.push_back({ environment_key(corpus[o.molecule], o.fragment,
                                              radius),
                              o.score });
        }
        Rng rng = split_rng(cfg.seed, hash_string(key));
        VarianceReport r = variance_reduction(samples, cfg.shuffles, rng);
        r.fragment_key = key;
        return r;
      });

  if (study.reports.empty())
    return study;
  int above = 0;
  for (const VarianceReport &r: study.reports) {
    study.mean_real_vr += r.vr;
    study.mean_shuffled_vr += r.shuffled_vr_mean;
    study.mean_environments += r.n_environments;
    if (r.vr > r.shuffled_vr_mean)
      ++above;
  }
  const double n = static_cast<double>(study.reports.size());
  study.mean_real_vr /= n;
  study.mean_shuffled_vr /= n;
  study.mean_environments /= n;
  study.mean_delta = study.mean_real_vr - study.mean_shuffled_vr;
  study.fraction_real_above_shuffled = above / n;
  return study;
}

VrStudy vr_study(std::span<const MolGraph> corpus, const PropertyOracle &oracle,
                 int radius, int top_k, const VrConfig &cfg) {
  const std::vector<Occurrence> occ = collect_occurrences(corpus, oracle, cfg);
  return vr_study(corpus, occ, radius, top_k, cfg);
}

}  // namespace forge
