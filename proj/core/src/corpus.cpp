//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "forge/editgrammar.hpp"
#include "forge/error.hpp"
#include "forge/io.hpp"
#include "forge/parallel.hpp"
#include "forge/smiles.hpp"
#include "forge/tokenizer.hpp"
#include "json.hpp"

namespace forge {

namespace {

using ojson = nlohmann::ordered_json;

const std::vector<std::string_view> kStage1Families = { kRdkitAttr, kOracleRank,
                                                        kDecomp, kIclRank,
                                                        kExternal };
const std::vector<std::string_view> kStage2Families = { kSmeplus, kMmp };

const std::vector<std::string_view> &families_of(int stage) {
  if (stage == 1)
    return kStage1Families;
  if (stage == 2)
    return kStage2Families;
  throw Error(ErrorCode::kInvalidArgument, "mixture stage must be 1 or 2");
}

std::string wrap(std::string_view smiles) {
  std::string s;
  s.reserve(smiles.size() + kStartSmiles.size() + kEndSmiles.size());
  s += kStartSmiles;
  s += smiles;
  s += kEndSmiles;
  return s;
}

std::string join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i)
      out += sep;
    out += parts[i];
  }
  return out;
}

double round2(double x) {
  return std::round(x * 100.0) / 100.0;
}

std::string method_label(DecompositionMethod m) {
  switch (m) {
  case DecompositionMethod::kMurcko:
    return "Murcko";
  case DecompositionMethod::kBrics:
    return "BRICS";
  case DecompositionMethod::kEfg:
    return "EFG";
  }
  return "?";
}

// k distinct indices from `pool` accepted by `keep` (all of them when fewer
// qualify), uniformly and in draw order.
template <class Keep>
std::vector<std::size_t> draw_demos(std::span<const std::size_t> pool, Keep keep,
                                    int k, Rng &rng) {
  const std::size_t want = static_cast<std::size_t>(std::max(k, 0));
  if (pool.size() > 8 * want + 64) {
    // Large pools: rejection sampling over positions, same distribution as
    // the scan below without touching every element.
    std::vector<std::size_t> pos, out;
    for (int tries = 0; out.size() < want && tries < 64 * (k + 1); ++tries) {
      const std::size_t i = uniform_index(rng, pool.size());
      if (std::find(pos.begin(), pos.end(), i) != pos.end())
        continue;
      pos.push_back(i);
      if (keep(pool[i]))
        out.push_back(pool[i]);
    }
    if (out.size() == want)
      return out;
  }
  std::vector<std::size_t> cand;
  cand.reserve(pool.size());
  for (std::size_t i: pool)
    if (keep(i))
      cand.push_back(i);
  const std::size_t n = std::min(want, cand.size());
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < n; ++i)
    std::swap(cand[i], cand[i + uniform_index(rng, cand.size() - i)]);
  cand.resize(n);
  return cand;
}

// ---------------------------------------------------------------------------
// Stage-1 ranking items: a list of (fragment, normalized score) plus context.

struct RankItem {
  std::string header;  // "Molecule SMILES: …" or "Scaffold: …"
  std::string list_label;
  std::vector<FragmentScore> ranked;  // best first, normalized scores
};

std::string ranking_answer(const RankItem &item, bool vulnerability,
                           bool scores) {
  auto one = [&](const FragmentScore &f) {
    std::string s = wrap(f.smiles);
    if (scores)
      s += " (score: " + format_score(f.score) + ")";
    return s;
  };
  if (vulnerability)
    return one(item.ranked.back());
  std::vector<std::string> parts;
  for (const FragmentScore &f: item.ranked)
    parts.push_back(one(f));
  return join(parts, " > ");
}

std::string ranking_input(const RankItem &item, Rng &rng) {
  std::vector<std::string> frags;
  for (const FragmentScore &f: item.ranked)
    frags.push_back(f.smiles);
  shuffle(std::span<std::string>(frags), rng);
  return item.header + "\n" + item.list_label + wrap(join(frags, "."));
}

const char *kScoreClause =
    " and include their normalized contribution scores (0 = lowest, 1 = "
    "highest observed contribution).";
const char *kScoreClauseOne =
    " and its normalized contribution score (0 = lowest, 1 = highest observed "
    "contribution).";
const char *kActivityClause =
    " and include their normalized activity scores (0 = lowest, 1 = highest "
    "observed activity on the target).";
const char *kActivityClauseOne =
    " and its normalized activity score (0 = lowest, 1 = highest observed "
    "activity on the target).";

std::string rank_instruction(const std::string &desc, bool vulnerability,
                             bool scores) {
  if (vulnerability)
    return "Which fragment contributes the least to '" + desc
           + "'? Return the weakest fragment" + (scores ? kScoreClauseOne : ".");
  return "Which fragment contributes the most to '" + desc
         + "'? Rank all fragments" + (scores ? kScoreClause : ".");
}

struct Stage1Index {
  std::vector<RankItem> attr_items;  // parallel to attributions
  std::map<std::pair<PropertyId, Removal>, std::vector<std::size_t>> cells;
  std::vector<std::size_t> decomp_items;  // one attribution per molecule
  std::vector<MmpSeries> series;
  std::vector<RankItem> series_items;
  std::map<std::string, std::vector<std::size_t>> series_by_target;
};

Stage1Index index_stage1(const Stage1Sources &src) {
  Stage1Index ix;
  // Scores are normalized over the (property, removal) cell.
  std::map<std::pair<PropertyId, Removal>, std::pair<double, double>> range;
  for (std::size_t i = 0; i < src.attributions.size(); ++i) {
    const AttributedMolecule &a = src.attributions[i];
    const auto key = std::make_pair(a.property, a.removal);
    ix.cells[key].push_back(i);
    auto [it, fresh] = range.try_emplace(key, a.fragments.at(0).score,
                                         a.fragments.at(0).score);
    for (const FragmentScore &f: a.fragments) {
      it->second.first = std::min(it->second.first, f.score);
      it->second.second = std::max(it->second.second, f.score);
    }
  }
  std::set<std::string> seen_mol;
  for (std::size_t i = 0; i < src.attributions.size(); ++i) {
    const AttributedMolecule &a = src.attributions[i];
    const auto [lo, hi] = range.at({ a.property, a.removal });
    RankItem item;
    item.header = "Molecule SMILES: " + wrap(a.smiles);
    item.list_label = "List of fragments to be ranked: ";
    for (const FragmentScore &f: a.fragments)
      item.ranked.push_back(
          { f.smiles, hi > lo ? normalize_score(f.score, lo, hi,
                                                Direction::kHigherBetter)
                              : 0.0 });
    // Order by raw per-atom score, ties by fragment string.
    std::vector<std::size_t> order(a.fragments.size());
    for (std::size_t k = 0; k < order.size(); ++k)
      order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (a.fragments[x].score != a.fragments[y].score)
        return a.fragments[x].score > a.fragments[y].score;
      return a.fragments[x].smiles < a.fragments[y].smiles;
    });
    std::vector<FragmentScore> ranked;
    for (std::size_t k: order)
      ranked.push_back(item.ranked[k]);
    item.ranked = std::move(ranked);
    ix.attr_items.push_back(std::move(item));
    if (seen_mol.insert(a.smiles + "|" + std::string(method_name(a.method))).second)
      ix.decomp_items.push_back(i);
  }

  ix.series = mmp_series(src.mmp);
  for (std::size_t i = 0; i < ix.series.size(); ++i) {
    const MmpSeries &s = ix.series[i];
    RankItem item;
    item.header = "Scaffold: " + wrap(s.scaffold);
    item.list_label = "Candidate fragments: ";
    item.ranked = s.members;
    ix.series_items.push_back(std::move(item));
    ix.series_by_target[s.target_id].push_back(i);
  }
  return ix;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string format_score(double x) {
  const double r = round2(x) + 0.0;  // folds -0
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, r, std::chars_format::fixed, 2);
  std::string s(buf, res.ptr);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.')
    s.pop_back();
  return s;
}

MolGraph strip_organic_isotopes(const MolGraph &mol) {
  std::vector<Atom> atoms = mol.atoms();
  bool changed = false;
  for (Atom &a: atoms) {
    switch (a.atomic_number) {
    case 5: case 6: case 7: case 8: case 9: case 15: case 16: case 17:
    case 35: case 53:
      if (a.isotope) {
        a.isotope.reset();
        changed = true;
      }
      break;
    default:
      break;
    }
  }
  if (!changed)
    return mol;
  return MolGraph(std::move(atoms), mol.bonds());
}

std::string to_json_line(const CorpusSample &s) {
  ojson meta;
  meta["stage"] = s.meta.stage;
  meta["family"] = s.meta.family;
  meta["property"] = s.meta.property;
  meta["variant"] = s.meta.variant;
  meta["task"] = s.meta.task;
  meta["scores"] = s.meta.scores;
  if (!s.meta.source.empty())
    meta["source"] = s.meta.source;
  ojson j;
  j["instruction"] = s.instruction;
  j["input"] = s.input;
  j["output"] = s.output;
  j["meta"] = std::move(meta);
  return j.dump();
}

std::string to_jsonl(std::span<const CorpusSample> samples) {
  std::string out;
  for (const CorpusSample &s: samples)
    out += to_json_line(s) + '\n';
  return out;
}

double MixtureSpec::ratio(std::string_view family) const {
  for (const auto &[name, r]: ratios)
    if (name == family)
      return r;
  return 0;
}

void MixtureSpec::validate(int stage) const {
  const auto &known = families_of(stage);
  double sum = 0;
  for (const auto &[name, r]: ratios) {
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown stage-" + std::to_string(stage) + " family '" + name
                      + "'");
    if (!(r >= 0) || !std::isfinite(r))
      throw Error(ErrorCode::kInvalidArgument,
                  "ratio of '" + name + "' must be a non-negative number");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::kInvalidArgument,
                "mixture ratios sum to " + std::to_string(sum) + ", not 1");
}

MixtureSpec MixtureSpec::stage1_default() {
  return { { { std::string(kRdkitAttr), 0.25 },
             { std::string(kOracleRank), 0.15 },
             { std::string(kDecomp), 0.10 },
             { std::string(kIclRank), 0.35 },
             { std::string(kExternal), 0.15 } } };
}

MixtureSpec MixtureSpec::stage2_default() {
  return { { { std::string(kSmeplus), 0.40 }, { std::string(kMmp), 0.60 } } };
}

MixtureSpec parse_mixture(std::string_view text, int stage) {
  MixtureSpec spec;
  for (std::string_view family: families_of(stage))
    spec.ratios.emplace_back(std::string(family), 0.0);
  for (const auto &[key, value]: parse_key_values(text)) {
    auto it = std::find_if(spec.ratios.begin(), spec.ratios.end(),
                           [&](const auto &r) { return r.first == key; });
    if (it == spec.ratios.end())
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown stage-" + std::to_string(stage) + " family '" + key
                      + "'");
    double v = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw Error(ErrorCode::kInvalidArgument,
                  "ratio of '" + key + "' is not a number: '" + value + "'");
    it->second = v;
  }
  spec.validate(stage);
  return spec;
}

// ---------------------------------------------------------------------------
// Sources

std::vector<AttributedMolecule> collect_attributions(
    std::span<const MolGraph> corpus, std::span<const PropertyId> properties,
    std::uint64_t seed, unsigned threads) {
  auto per_mol = parallel_map<std::vector<AttributedMolecule>>(
      corpus.size(), threads, [&](std::size_t i) {
        std::vector<AttributedMolecule> out;
        const MolGraph &mol = corpus[i];
        if (mol.empty() || mol.has_dummy())
          return out;
        try {
          const MolGraph norm = parse_smiles(
              canonical_smiles(strip_organic_isotopes(mol)));
          Rng rng = split_rng(seed, i);
          const Decomposition d = auto_decompose(norm, rng);
          if (d.fragments.size() < 2)
            return out;
          const std::string smiles = canonical_smiles(norm);
          for (PropertyId p: properties)
            for (Removal r: { Removal::kReplaceWithH, Removal::kDeleteWithCap }) {
              AttributedMolecule a;
              a.smiles = smiles;
              a.method = d.method;
              a.property = p;
              a.removal = r;
              for (const AttributionRecord &rec:
                   attribute(norm, d, PropertyOracle{ p }, r))
                a.fragments.push_back({ rec.fragment.smiles(), rec.per_atom_score });
              out.push_back(std::move(a));
            }
        } catch (const Error &) {
          out.clear();
        }
        return out;
      });
  std::vector<AttributedMolecule> all;
  for (auto &v: per_mol)
    for (AttributedMolecule &a: v)
      all.push_back(std::move(a));
  return all;
}

std::vector<ExternalSample> parse_external_jsonl(std::string_view text) {
  std::vector<ExternalSample> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty())
      continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    auto str = [&](const char *k) -> std::string {
      if (!j.is_object() || !j.contains(k) || !j[k].is_string())
        throw Error(ErrorCode::kMalformedValue,
                    "line " + std::to_string(line_no) + ": external record lacks "
                        + "string field '" + k + "'",
                    line_no);
      return j[k].get<std::string>();
    };
    out.push_back({ str("instruction"), str("input"), str("output") });
  }
  return out;
}

std::vector<ExternalSample> load_external(const std::filesystem::path &path) {
  return parse_external_jsonl(read_file(path));
}

std::vector<MmpSeries> mmp_series(std::span<const MmpPair> pairs) {
  struct Acc {
    std::string desc;
    std::map<std::string, double> members;
  };
  std::map<std::pair<std::string, std::string>, Acc> acc;
  for (const MmpPair &p: pairs) {
    try {
      const MolGraph src = parse_smiles(p.src_smiles);
      const MolGraph pattern = parse_smiles(p.frag_src);
      const auto site = edit_site(src, pattern);
      if (!site)
        continue;
      int dummy = -1;
      for (int a = 0; a < pattern.num_atoms(); ++a)
        if (pattern.atom(a).is_dummy()) {
          if (dummy >= 0)
            dummy = -2;
          else if (dummy == -1)
            dummy = a;
        }
      if (dummy < 0 || pattern.degree(dummy) != 1)
        continue;
      const int inner = pattern.neighbors(dummy)[0].atom;
      const auto bond = src.bond_between((*site)[dummy], (*site)[inner]);
      if (!bond)
        continue;
      const int cut[] = { *bond };
      const auto parts = split_at_bonds(src, cut);
      if (parts.size() != 2)
        continue;
      const auto &hosts = parts[0].host_atom_indices;
      const bool first_is_var =
          std::binary_search(hosts.begin(), hosts.end(), (*site)[inner]);
      const std::string scaffold = canonical_smiles(parts[first_is_var ? 1 : 0].graph);
      Acc &a = acc[{ p.target_id, scaffold }];
      a.desc = p.target_desc;
      a.members[p.frag_src] = p.score_src;
      a.members[p.frag_tgt] = p.score_tgt;
    } catch (const Error &) {
      continue;
    }
  }
  std::vector<MmpSeries> out;
  for (auto &[key, a]: acc) {
    MmpSeries s;
    s.target_id = key.first;
    s.target_desc = a.desc;
    s.scaffold = key.second;
    for (const auto &[frag, score]: a.members)
      s.members.push_back({ frag, score });
    std::stable_sort(s.members.begin(), s.members.end(),
                     [](const FragmentScore &x, const FragmentScore &y) {
                       return x.score > y.score;
                     });
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage 1

std::vector<CorpusSample> emit_stage1(const Stage1Sources &sources,
                                      const MixtureSpec &spec,
                                      std::size_t total, Rng &rng,
                                      const Stage1Options &opt) {
  spec.validate(1);
  const Stage1Index ix = index_stage1(sources);
  const bool have_attr = !ix.attr_items.empty();
  const bool have_series = !ix.series_items.empty();
  auto require = [&](std::string_view family, bool ok) {
    if (spec.ratio(family) > 0 && !ok)
      throw Error(ErrorCode::kEmptySource,
                  "no source records for family '" + std::string(family) + "'");
  };
  require(kRdkitAttr, have_attr);
  require(kOracleRank, have_attr);
  require(kDecomp, have_attr);
  require(kIclRank, have_attr || have_series);
  require(kExternal, !sources.external.empty());

  std::vector<double> weights;
  for (std::string_view f: kStage1Families)
    weights.push_back(spec.ratio(f));

  std::vector<CorpusSample> out;
  out.reserve(total);
  for (std::size_t n = 0; n < total; ++n) {
    const std::string_view family = kStage1Families[weighted_index(weights, rng)];
    CorpusSample s;
    s.meta.stage = 1;
    s.meta.family = std::string(family);

    if (family == kExternal) {
      const ExternalSample &e =
          sources.external[uniform_index(rng, sources.external.size())];
      s.instruction = e.instruction;
      s.input = e.input;
      s.output = e.output;
      s.meta.property = "external";
      s.meta.variant = "passthrough";
      s.meta.task = "instruction";
    } else if (family == kDecomp) {
      const std::size_t i = ix.decomp_items[uniform_index(rng, ix.decomp_items.size())];
      const AttributedMolecule &a = sources.attributions[i];
      std::vector<std::string> frags;
      for (const FragmentScore &f: a.fragments)
        frags.push_back(f.smiles);
      std::sort(frags.begin(), frags.end());
      s.instruction = "Decompose the molecule into fragments using the "
                      + method_label(a.method)
                      + " rules. Mark every cut with numbered attachment points.";
      s.input = "Molecule SMILES: " + wrap(a.smiles);
      s.output = wrap(join(frags, "."));
      s.meta.property = "none";
      s.meta.variant = std::string(method_name(a.method));
      s.meta.task = "decomposition";
    } else if (family == kOracleRank) {
      const std::size_t i = uniform_index(rng, ix.attr_items.size());
      const AttributedMolecule &a = sources.attributions[i];
      const bool scores = bernoulli(rng, opt.score_p);
      s.instruction = "Rank all fragments of the molecule by their attribution "
                      "score for '"
                      + std::string(property_description(a.property))
                      + "', from highest to lowest"
                      + (scores ? kScoreClause : ".");
      s.input = ranking_input(ix.attr_items[i], rng);
      s.output = ranking_answer(ix.attr_items[i], false, scores);
      s.meta.property = std::string(property_name(a.property));
      s.meta.variant = std::string(removal_name(a.removal));
      s.meta.task = "ranking";
      s.meta.scores = scores;
    } else if (family == kRdkitAttr) {
      const std::size_t i = uniform_index(rng, ix.attr_items.size());
      const AttributedMolecule &a = sources.attributions[i];
      const bool vuln = bernoulli(rng, opt.vulnerability_p);
      const bool scores = bernoulli(rng, opt.score_p);
      s.instruction = rank_instruction(std::string(property_description(a.property)),
                                       vuln, scores);
      s.input = ranking_input(ix.attr_items[i], rng);
      s.output = ranking_answer(ix.attr_items[i], vuln, scores);
      s.meta.property = std::string(property_name(a.property));
      s.meta.variant = std::string(removal_name(a.removal));
      s.meta.task = vuln ? "vulnerability" : "ranking";
      s.meta.scores = scores;
    } else {  // icl_rank
      const double u = uniform01(rng);
      const std::string variant = u < opt.icl_desc_p ? "icl_desc"
                                  : u < opt.icl_desc_p + opt.icl_nodesc_p
                                      ? "icl_nodesc"
                                      : "direct";
      const bool vuln = bernoulli(rng, opt.vulnerability_p);
      const bool scores = bernoulli(rng, opt.score_p);
      const bool icl = variant != "direct";
      bool use_mmp = have_series && (!have_attr || bernoulli(rng, opt.icl_mmp_share));

      const RankItem *query = nullptr;
      std::vector<const RankItem *> demos;
      std::string desc;
      if (use_mmp) {
        const std::size_t q = uniform_index(rng, ix.series_items.size());
        const MmpSeries &ser = ix.series[q];
        if (icl)
          for (std::size_t d: draw_demos(ix.series_by_target.at(ser.target_id),
                                         [q](std::size_t j) { return j != q; },
                                         opt.k_demos, rng))
            demos.push_back(&ix.series_items[d]);
        if (icl && demos.size() < static_cast<std::size_t>(opt.k_demos)
            && have_attr) {
          use_mmp = false;  // too few other scaffolds on this target
          demos.clear();
        } else {
          query = &ix.series_items[q];
          desc = ser.target_desc.empty() ? ser.target_id : ser.target_desc;
          s.meta.property = "activity:" + ser.target_id;
        }
      }
      if (!use_mmp) {
        const std::size_t q = uniform_index(rng, ix.attr_items.size());
        const AttributedMolecule &a = sources.attributions[q];
        if (icl)
          for (std::size_t d: draw_demos(ix.cells.at({ a.property, a.removal }),
                                         [q](std::size_t j) { return j != q; },
                                         opt.k_demos, rng))
            demos.push_back(&ix.attr_items[d]);
        query = &ix.attr_items[q];
        desc = std::string(property_description(a.property));
        s.meta.property = std::string(property_name(a.property));
      }

      const std::string what = use_mmp ? "substituents" : "fragments";
      if (!icl) {
        s.instruction = use_mmp
            ? (vuln ? "Which candidate substituent confers the lowest activity "
                      "against '" + desc + "' when attached to the scaffold? "
                      "Return the weakest substituent"
                    : "Rank the candidate substituents by the activity they "
                      "confer against '" + desc + "' when attached to the "
                      "scaffold")
                  + std::string(scores ? (vuln ? kActivityClauseOne : kActivityClause)
                                       : ".")
            : rank_instruction(desc, vuln, scores);
        s.input = ranking_input(*query, rng);
      } else {
        const std::string subject =
            variant == "icl_desc"
                ? (use_mmp ? "the activity they confer against '" + desc + "'"
                           : "their contribution to '" + desc + "'")
                : (use_mmp ? "the activity they confer against an undisclosed "
                             "target"
                           : "their contribution to an undisclosed property");
        s.instruction = "The examples rank " + what + " by " + subject + ". "
                        + (variant == "icl_nodesc"
                               ? "Infer the pattern from the examples alone. "
                               : "")
                        + (vuln ? "Return the weakest " + what.substr(0, what.size() - 1)
                                      + " of the query"
                                : "Rank all " + what + " of the query the same way")
                        + (!scores  ? "."
                           : use_mmp ? (vuln ? kActivityClauseOne : kActivityClause)
                                     : (vuln ? kScoreClauseOne : kScoreClause));
        std::string input;
        for (std::size_t d = 0; d < demos.size(); ++d)
          input += "Example " + std::to_string(d + 1) + ":\n"
                   + ranking_input(*demos[d], rng) + "\nAnswer: "
                   + ranking_answer(*demos[d], vuln, scores) + "\n\n";
        input += "Query:\n" + ranking_input(*query, rng);
        s.input = std::move(input);
      }
      s.output = ranking_answer(*query, vuln, scores);
      s.meta.variant = variant;
      s.meta.task = vuln ? "vulnerability" : "ranking";
      s.meta.scores = scores;
    }
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage 2

namespace {

struct EditItem {
  std::string src;
  ModificationBlock block;  // value filled per sample
  double score_tgt = 0;
  std::string group;        // property name or target id
  std::string desc;         // property description or target description
  std::string name;         // property name or target id
};

std::vector<EditItem> verified_items(std::vector<EditItem> items,
                                     unsigned threads, std::size_t &rejected) {
  const auto ok = parallel_map<char>(items.size(), threads, [&](std::size_t i) {
    try {
      EditItem &it = items[i];
      const MolGraph src = strip_organic_isotopes(parse_smiles(it.src));
      it.src = canonical_smiles(src);
      it.block.result_smiles =
          canonical_smiles(strip_organic_isotopes(parse_smiles(it.block.result_smiles)));
      return static_cast<char>(verify_block(parse_smiles(it.src), it.block)
                               == Verdict::kOk);
    } catch (const Error &) {
      return char{ 0 };
    }
  });
  std::vector<EditItem> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (ok[i])
      out.push_back(std::move(items[i]));
    else
      ++rejected;
  }
  return out;
}

std::string source_line(const std::string &smiles) {
  return "Source molecule: " + wrap(smiles);
}

}  // namespace

std::vector<CorpusSample> emit_stage2(std::span<const EditPair> smeplus,
                                      std::span<const MmpPair> mmp,
                                      const MixtureSpec &spec,
                                      std::size_t total, Rng &rng,
                                      const Stage2Options &opt,
                                      EmitReport *report) {
  spec.validate(2);
  EmitReport rep;

  std::vector<EditItem> sme_items;
  for (const EditPair &p: smeplus)
    sme_items.push_back({ p.src_smiles,
                          { p.frag_src, p.frag_tgt, p.tgt_smiles, std::nullopt,
                            ValueKey::kValue },
                          p.score_tgt, std::string(property_name(p.property)),
                          std::string(property_description(p.property)),
                          std::string(property_name(p.property)) });
  std::vector<EditItem> mmp_items;
  for (const MmpPair &p: mmp)
    mmp_items.push_back({ p.src_smiles,
                          { p.frag_src, p.frag_tgt, p.tgt_smiles, std::nullopt,
                            ValueKey::kActivity },
                          p.score_tgt, p.target_id,
                          p.target_desc.empty() ? p.target_id : p.target_desc,
                          p.target_id });
  sme_items = verified_items(std::move(sme_items), opt.threads, rep.pairs_rejected);
  mmp_items = verified_items(std::move(mmp_items), opt.threads, rep.pairs_rejected);

  if (spec.ratio(kSmeplus) > 0 && sme_items.empty())
    throw Error(ErrorCode::kEmptySource, "no verified SME+ pairs");
  if (spec.ratio(kMmp) > 0 && mmp_items.empty())
    throw Error(ErrorCode::kEmptySource, "no verified MMP pairs");

  auto group_index = [](const std::vector<EditItem> &items) {
    std::map<std::string, std::vector<std::size_t>> g;
    for (std::size_t i = 0; i < items.size(); ++i)
      g[items[i].group].push_back(i);
    return g;
  };
  const auto sme_groups = group_index(sme_items);
  const auto mmp_groups = group_index(mmp_items);

  const std::vector<double> weights = { spec.ratio(kSmeplus), spec.ratio(kMmp) };
  std::unordered_set<std::string> seen;
  std::vector<CorpusSample> out;
  out.reserve(total);
  for (std::size_t n = 0; n < total; ++n) {
    const bool is_mmp = weighted_index(weights, rng) == 1;
    const auto &items = is_mmp ? mmp_items : sme_items;
    const auto &groups = is_mmp ? mmp_groups : sme_groups;
    const std::size_t q = uniform_index(rng, items.size());
    const EditItem &it = items[q];
    const bool suffix = bernoulli(rng, opt.score_suffix_p);
    const bool direct = bernoulli(rng, opt.direct_p);

    auto block_of = [&](const EditItem &e) {
      ModificationBlock b = e.block;
      if (suffix)
        b.value = round2(e.score_tgt);
      return b;
    };

    CorpusSample s;
    s.meta.stage = 2;
    s.meta.family = std::string(is_mmp ? kMmp : kSmeplus);
    s.meta.property = is_mmp ? "activity:" + it.group : it.group;
    s.meta.task = "edit";
    s.meta.scores = suffix;
    s.meta.source = it.src;
    const std::string goal =
        is_mmp ? "increases activity against '" : "improves '";
    if (direct) {
      // Named or described, evenly.
      const bool by_name = bernoulli(rng, 0.5);
      const std::string label = by_name ? it.name : it.desc;
      s.instruction = "Propose one fragment replacement that " + goal + label
                      + "' and give the resulting molecule.";
      s.input = source_line(it.src);
      s.meta.variant = by_name ? "direct_name" : "direct_desc";
    } else {
      // Demonstrations from the same property / target with another source.
      const auto demos = draw_demos(
          groups.at(it.group),
          [&](std::size_t j) { return items[j].src != it.src; }, opt.k_demos, rng);
      s.instruction = "Each example shows a fragment replacement that " + goal
                      + it.desc
                      + "'. Propose one replacement for the query molecule in "
                        "the same format.";
      std::string input;
      for (std::size_t d = 0; d < demos.size(); ++d)
        input += "Example " + std::to_string(d + 1) + ":\n"
                 + source_line(items[demos[d]].src) + "\n"
                 + render_block(block_of(items[demos[d]])) + "\n\n";
      input += "Query:\n" + source_line(it.src);
      s.input = std::move(input);
      s.meta.variant = "icl";
    }
    s.output = render_block(block_of(it));
    ++rep.drawn;
    if (opt.dedup && !seen.insert(s.instruction + '\x1f' + s.input).second) {
      ++rep.duplicates_dropped;
      continue;
    }
    out.push_back(std::move(s));
  }
  if (report)
    *report = rep;
  return out;
}

// ---------------------------------------------------------------------------
// Multi-turn

std::vector<CorpusSample> emit_multiturn(std::span<const Trajectory> trajectories,
                                         std::size_t per_property_target,
                                         Rng &rng) {
  std::map<PropertyId, std::vector<std::size_t>> by_prop;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const Trajectory &t = trajectories[i];
    if (t.steps.empty() || t.steps.size() > kMaxTurns)
      throw Error(ErrorCode::kInvalidArgument,
                  "trajectories must have 1 to 6 steps");
    by_prop[t.steps.front().property].push_back(i);
  }
  std::vector<CorpusSample> out;
  for (auto &[prop, idx]: by_prop) {
    // Every trajectory once (up to the target), then draws with replacement.
    std::vector<std::size_t> chosen = idx;
    shuffle(std::span<std::size_t>(chosen), rng);
    if (chosen.size() > per_property_target)
      chosen.resize(per_property_target);
    while (chosen.size() < per_property_target)
      chosen.push_back(idx[uniform_index(rng, idx.size())]);

    const std::string desc(property_description(prop));
    for (std::size_t i: chosen) {
      const Trajectory &t = trajectories[i];
      MultiTurnAnswer answer;
      for (const EditPair &p: t.steps)
        answer.blocks.push_back({ p.frag_src, p.frag_tgt, p.tgt_smiles,
                                  round2(p.score_tgt), ValueKey::kValue });
      CorpusSample s;
      s.instruction = "Propose a sequence of at most six fragment replacements "
                      "that progressively improves '"
                      + desc + "'. Give each intermediate molecule with its value.";
      s.input = source_line(t.steps.front().src_smiles);
      s.output = render_multiturn(answer);
      s.meta.stage = 3;
      s.meta.family = "multiturn";
      s.meta.property = std::string(property_name(prop));
      s.meta.variant = "steps_" + std::to_string(t.steps.size());
      s.meta.task = "trajectory";
      s.meta.scores = true;
      s.meta.source = t.steps.front().src_smiles;
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace forge
