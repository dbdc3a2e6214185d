//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/mmpa.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <tuple>

#include "forge/error.hpp"
#include "forge/fragment.hpp"
#include "forge/io.hpp"
#include "forge/props.hpp"
#include "forge/smeplus.hpp"
#include "forge/smiles.hpp"

namespace forge {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char &c: out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

[[noreturn]] void malformed(int line, const std::string &what) {
  throw Error(ErrorCode::kMalformedCsv,
              "line " + std::to_string(line) + ": " + what,
              static_cast<std::size_t>(line));
}

struct Molecule {
  std::string smiles;
  double pchembl;
  int heavy;
};

struct Cut {
  int molecule;
  std::string variable;  // `[1*]`-labelled canonical variable part
  int variable_heavy;
};

struct Candidate {
  std::string frag_src;
  std::string frag_tgt;
  int size;
};

}  // namespace

ActivityTable parse_activity_table(std::string_view text) {
  ActivityTable table;
  std::vector<std::string> fields;
  int col_smiles = -1, col_target = -1, col_desc = -1, col_pchembl = -1;
  std::size_t ncols = 0;
  int line_no = 0;
  std::size_t pos = 0;
  bool header = true;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (trim(line).empty()) {
      if (end == text.size())
        break;
      continue;
    }
    if (!split_csv_line(line, fields))
      malformed(line_no, "unterminated quote");
    if (header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string name = lower(trim(fields[i]));
        if (name == "smiles")
          col_smiles = static_cast<int>(i);
        else if (name == "target_id")
          col_target = static_cast<int>(i);
        else if (name == "target_desc")
          col_desc = static_cast<int>(i);
        else if (name == "pchembl")
          col_pchembl = static_cast<int>(i);
      }
      if (col_smiles < 0 || col_target < 0 || col_desc < 0 || col_pchembl < 0)
        malformed(line_no, "header must contain smiles,target_id,target_desc,pchembl");
      ncols = fields.size();
      header = false;
      continue;
    }
    if (fields.size() < ncols)
      malformed(line_no, "expected " + std::to_string(ncols) + " columns, got "
                             + std::to_string(fields.size()));
    ActivityRecord r;
    r.smiles = std::string(trim(fields[col_smiles]));
    r.target_id = std::string(trim(fields[col_target]));
    r.target_desc = std::string(trim(fields[col_desc]));
    const std::string_view p = trim(fields[col_pchembl]);
    const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), r.pchembl);
    if (ec != std::errc() || ptr != p.data() + p.size() || !std::isfinite(r.pchembl))
      malformed(line_no, "pchembl is not a finite number");
    try {
      parse_smiles(r.smiles);
    } catch (const Error &) {
      table.skipped_lines.push_back(line_no);
      continue;
    }
    if (r.smiles.empty()) {
      table.skipped_lines.push_back(line_no);
      continue;
    }
    table.records.push_back(std::move(r));
  }
  if (header)
    malformed(line_no, "missing header");
  return table;
}

ActivityTable load_activity_table(const std::filesystem::path &path) {
  return parse_activity_table(read_file(path));
}

std::vector<ActivityRecord> leakage_filter(
    std::span<const ActivityRecord> records,
    std::span<const std::string> keywords) {
  std::vector<std::string> keys;
  for (const std::string &k: keywords)
    if (!k.empty())
      keys.push_back(lower(k));
  std::vector<ActivityRecord> out;
  for (const ActivityRecord &r: records) {
    const std::string desc = lower(r.target_desc);
    const bool leak = std::any_of(keys.begin(), keys.end(), [&](const auto &k) {
      return desc.find(k) != std::string::npos;
    });
    if (!leak)
      out.push_back(r);
  }
  return out;
}

std::vector<MmpPair> mine_mmps(std::span<const ActivityRecord> records,
                               const MmpConfig &cfg, MmpReport *report) {
  MmpReport rep;
  // target -> canonical smiles -> pchembl values; target -> description.
  std::map<std::string, std::map<std::string, std::vector<double>>> by_target;
  std::map<std::string, std::string> desc;
  for (const ActivityRecord &r: records) {
    std::string canon;
    try {
      canon = canonicalize(r.smiles);
    } catch (const Error &) {
      continue;
    }
    if (canon.empty())
      continue;
    by_target[r.target_id][canon].push_back(r.pchembl);
    auto [it, inserted] = desc.emplace(r.target_id, r.target_desc);
    if (!inserted && r.target_desc < it->second)
      it->second = r.target_desc;
  }

  std::vector<MmpPair> out;
  for (auto &[target, mols_by_smiles]: by_target) {
    std::vector<Molecule> mols;
    for (auto &[smiles, values]: mols_by_smiles) {
      std::sort(values.begin(), values.end());
      double sum = 0;
      for (double v: values)
        sum += v;
      mols.push_back({ smiles, sum / values.size(),
                       parse_smiles(smiles).num_heavy_atoms() });
    }
    rep.molecules += static_cast<int>(mols.size());
    if (mols.size() < 2)
      continue;
    double lo = mols[0].pchembl, hi = mols[0].pchembl;
    for (const Molecule &m: mols) {
      lo = std::min(lo, m.pchembl);
      hi = std::max(hi, m.pchembl);
    }

    // Constant part -> cuts, over every acyclic single bond between heavy
    // atoms, both orientations.
    std::map<std::string, std::vector<Cut>> index;
    for (int i = 0; i < static_cast<int>(mols.size()); ++i) {
      const MolGraph mol = parse_smiles(mols[i].smiles);
      for (int b = 0; b < mol.num_bonds(); ++b) {
        const Bond &bond = mol.bond(b);
        if (bond.order != BondOrder::kSingle || mol.bond_in_ring(b)
            || !mol.atom(bond.begin).is_heavy() || !mol.atom(bond.end).is_heavy())
          continue;
        const int cut[] = { b };
        const std::vector<Fragment> parts = split_at_bonds(mol, cut);
        if (parts.size() != 2)
          continue;
        for (int side = 0; side < 2; ++side) {
          const Fragment &constant = parts[side];
          const Fragment &variable = parts[1 - side];
          index[canonical_smiles(constant.graph)].push_back(
              { i, canonical_smiles(variable.graph), variable.num_heavy_atoms() });
        }
      }
    }

    // (src, tgt) -> cut candidates.
    std::map<std::pair<int, int>, std::vector<Candidate>> cands;
    for (const auto &[constant, cuts]: index) {
      for (std::size_t a = 0; a < cuts.size(); ++a)
        for (std::size_t b = a + 1; b < cuts.size(); ++b) {
          const Cut &x = cuts[a];
          const Cut &y = cuts[b];
          if (x.molecule == y.molecule || x.variable == y.variable)
            continue;
          const bool x_low = mols[x.molecule].pchembl < mols[y.molecule].pchembl
                             || (mols[x.molecule].pchembl == mols[y.molecule].pchembl
                                 && x.molecule < y.molecule);
          const Cut &s = x_low ? x : y;
          const Cut &t = x_low ? y : x;
          const bool fits = s.variable_heavy <= cfg.max_variable_heavy
                            && t.variable_heavy <= cfg.max_variable_heavy
                            && s.variable_heavy
                                   <= cfg.max_variable_fraction * mols[s.molecule].heavy
                            && t.variable_heavy
                                   <= cfg.max_variable_fraction * mols[t.molecule].heavy;
          auto &slot = cands[{ s.molecule, t.molecule }];
          if (fits)
            slot.push_back({ s.variable, t.variable,
                             s.variable_heavy + t.variable_heavy });
        }
    }

    for (auto &[key, list]: cands) {
      ++rep.candidate_pairs;
      const Molecule &src = mols[key.first];
      const Molecule &tgt = mols[key.second];
      if (!(tgt.pchembl > src.pchembl)) {
        ++rep.equal_activity;
        continue;
      }
      if (src.pchembl < cfg.min_pchembl || tgt.pchembl < cfg.min_pchembl) {
        ++rep.below_pchembl;
        continue;
      }
      if (list.empty()) {
        ++rep.too_large;
        continue;
      }
      std::sort(list.begin(), list.end(), [](const Candidate &a, const Candidate &b) {
        return std::tie(a.size, a.frag_src, a.frag_tgt)
               < std::tie(b.size, b.frag_src, b.frag_tgt);
      });
      const MolGraph src_mol = parse_smiles(src.smiles);
      bool done = false;
      for (const Candidate &c: list) {
        std::string got;
        try {
          got = apply_edit_smiles(src_mol, c.frag_src, c.frag_tgt);
        } catch (const Error &) {
          continue;
        }
        if (got != tgt.smiles)
          continue;
        MmpPair p;
        p.src_smiles = src.smiles;
        p.tgt_smiles = tgt.smiles;
        p.frag_src = c.frag_src;
        p.frag_tgt = c.frag_tgt;
        p.target_id = target;
        p.target_desc = desc[target];
        p.pchembl_src = src.pchembl;
        p.pchembl_tgt = tgt.pchembl;
        p.score_src = normalize_score(src.pchembl, lo, hi, Direction::kHigherBetter);
        p.score_tgt = normalize_score(tgt.pchembl, lo, hi, Direction::kHigherBetter);
        const MolGraph pattern = parse_smiles(c.frag_src);
        const auto site = edit_site(src_mol, pattern);
        std::vector<int> atoms;
        for (int a = 0; a < pattern.num_atoms(); ++a)
          if (!pattern.atom(a).is_dummy())
            atoms.push_back((*site)[a]);
        p.env_key = environment_key(src_mol, extract_fragment(src_mol, atoms),
                                    cfg.radius);
        out.push_back(std::move(p));
        done = true;
        break;
      }
      if (!done)
        ++rep.unverified;
    }
  }
  std::sort(out.begin(), out.end(), [](const MmpPair &a, const MmpPair &b) {
    return std::tie(a.target_id, a.src_smiles, a.tgt_smiles)
           < std::tie(b.target_id, b.src_smiles, b.tgt_smiles);
  });
  rep.emitted = static_cast<int>(out.size());
  if (report)
    *report = rep;
  return out;
}

}  // namespace forge
