//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//
// forge: batch command-line front end. Primary output goes to -o or stdout;
// a one-line JSON summary of every run goes to stderr (and --summary).
//

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "forge/context.hpp"
#include "forge/corpus.hpp"
#include "forge/editgrammar.hpp"
#include "forge/error.hpp"
#include "forge/fingerprint.hpp"
#include "forge/fragment.hpp"
#include "forge/io.hpp"
#include "forge/mmpa.hpp"
#include "forge/pair_io.hpp"
#include "forge/props.hpp"
#include "forge/search.hpp"
#include "forge/smeplus.hpp"
#include "forge/smiles.hpp"
#include "forge/tokenizer.hpp"

namespace {

using forge::Error;
using forge::ErrorCode;
using json = nlohmann::ordered_json;

enum class Level { kDebug, kInfo, kWarning, kError };

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string log_level = "info";
  std::string output;
  std::string summary_path;
  Level level = Level::kInfo;
};

Globals g;

void warn(const std::string &msg) {
  if (g.level <= Level::kWarning)
    std::cerr << "warning: " << msg << '\n';
}

void debug(const std::string &msg) {
  if (g.level <= Level::kDebug)
    std::cerr << "debug: " << msg << '\n';
}

void emit(const std::string &text) {
  if (g.output.empty() || g.output == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    forge::write_file_atomic(g.output, text);
  }
}

void summarize(json summary) {
  summary["seed"] = g.seed;
  if (!g.output.empty())
    summary["output"] = g.output;
  const std::string line = summary.dump() + "\n";
  if (!g.summary_path.empty())
    forge::write_file_atomic(g.summary_path, line);
  if (g.level <= Level::kInfo)
    std::cerr << line;
}

forge::PropertyId property_arg(const std::string &name) {
  const auto id = forge::property_from_name(name);
  if (!id)
    throw Error(ErrorCode::kInvalidArgument, "unknown property '" + name + "'");
  return *id;
}

forge::PropertyOracle oracle_arg(const std::string &name, bool minimize) {
  return { property_arg(name),
           minimize ? forge::Direction::kLowerBetter : forge::Direction::kHigherBetter };
}

std::optional<forge::DecompositionMethod> method_arg(const std::string &name) {
  if (name == "auto")
    return std::nullopt;
  const auto m = forge::method_from_name(name);
  if (!m)
    throw Error(ErrorCode::kInvalidArgument, "unknown decomposition method '" + name + "'");
  return m;
}

forge::Removal removal_arg(const std::string &name) {
  const auto r = forge::removal_from_name(name);
  if (!r)
    throw Error(ErrorCode::kInvalidArgument, "unknown removal mode '" + name + "'");
  return *r;
}

std::vector<forge::MolGraph> load_corpus(const std::string &path, json &summary) {
  std::vector<forge::MolGraph> out;
  long skipped = 0;
  const auto lines = forge::read_smiles_file(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(forge::parse_smiles(lines[i]));
    } catch (const Error &e) {
      ++skipped;
      warn(path + ": entry " + std::to_string(i + 1) + " skipped: " + e.what());
    }
  }
  summary["molecules"] = out.size();
  summary["skipped"] = skipped;
  return out;
}

forge::Decomposition decompose_with(const forge::MolGraph &mol,
                                    std::optional<forge::DecompositionMethod> m) {
  if (m)
    return forge::decompose(mol, *m);
  forge::Rng rng = forge::make_rng(g.seed);
  return forge::auto_decompose(mol, rng);
}

// ---------------------------------------------------------------------------

struct ParseArgs {
  std::vector<std::string> smiles;
  std::string input;
};

int run_parse(const ParseArgs &a) {
  std::vector<std::string> items = a.smiles;
  if (!a.input.empty()) {
    const auto lines = forge::read_smiles_file(a.input);
    items.insert(items.end(), lines.begin(), lines.end());
  }
  if (items.empty())
    throw CLI::ValidationError("parse", "no SMILES given");
  std::string out;
  long failed = 0;
  for (const std::string &s: items) {
    try {
      out += forge::canonicalize(s) + "\n";
    } catch (const Error &e) {
      ++failed;
      std::cerr << "error: '" << s << "': " << e.what() << '\n';
    }
  }
  emit(out);
  summarize({ { "command", "parse" }, { "parsed", items.size() - failed }, { "failed", failed } });
  return failed ? 1 : 0;
}

struct FpArgs {
  std::vector<std::string> smiles;
  int radius = 2;
  int length = forge::kDefaultFingerprintLength;
};

int run_fp(const FpArgs &a) {
  std::string out;
  std::vector<forge::Fingerprint> fps;
  for (const std::string &s: a.smiles) {
    const forge::MolGraph mol = forge::parse_smiles(s);
    fps.push_back(forge::morgan_fingerprint(mol, a.radius, a.length));
    json j = { { "smiles", forge::canonical_smiles(mol) }, { "radius", a.radius },
               { "length", a.length }, { "bits", fps.back().on_bits() } };
    out += j.dump() + "\n";
  }
  json summary = { { "command", "fp" }, { "molecules", fps.size() } };
  if (fps.size() == 2)
    summary["tanimoto"] = forge::tanimoto(fps[0], fps[1]);
  emit(out);
  summarize(summary);
  return 0;
}

struct TokenizeArgs {
  std::string text;
  bool smiles_only = false;
};

int run_tokenize(const TokenizeArgs &a) {
  const forge::TokenStream ts =
      a.smiles_only ? forge::lex_smiles_span(a.text) : forge::tokenize_mixed(a.text);
  std::string out;
  for (const forge::Token &t: ts.tokens)
    out += std::to_string(t.offset) + "\t" + std::string(forge::token_kind_name(t.kind))
           + "\t" + t.surface + "\n";
  emit(out);
  summarize({ { "command", "tokenize" }, { "tokens", ts.tokens.size() },
              { "lossless", forge::is_lossless(ts) } });
  return 0;
}

struct PropsArgs {
  std::vector<std::string> smiles;
  std::string input;
  std::vector<std::string> properties;
};

int run_props(const PropsArgs &a) {
  std::vector<forge::PropertyId> ids;
  for (const std::string &p: a.properties)
    ids.push_back(property_arg(p));
  if (ids.empty())
    ids.assign(forge::all_properties().begin(), forge::all_properties().end());
  std::vector<std::string> items = a.smiles;
  if (!a.input.empty()) {
    const auto lines = forge::read_smiles_file(a.input);
    items.insert(items.end(), lines.begin(), lines.end());
  }
  std::string out;
  for (const std::string &s: items) {
    const forge::MolGraph mol = forge::parse_smiles(s);
    json j = { { "smiles", forge::canonical_smiles(mol) } };
    for (forge::PropertyId id: ids)
      j[std::string(forge::property_name(id))] = forge::evaluate(id, mol);
    out += j.dump() + "\n";
  }
  emit(out);
  summarize({ { "command", "props" }, { "molecules", items.size() } });
  return 0;
}

struct DecomposeArgs {
  std::vector<std::string> smiles;
  std::string method = "brics";
};

int run_decompose(const DecomposeArgs &a) {
  const auto method = method_arg(a.method);
  std::string out;
  for (const std::string &s: a.smiles) {
    const forge::MolGraph mol = forge::parse_smiles(s);
    const forge::Decomposition d = decompose_with(mol, method);
    json frags = json::array();
    for (const forge::Fragment &f: d.fragments)
      frags.push_back(f.smiles());
    out += json { { "smiles", forge::canonical_smiles(mol) },
                  { "method", forge::method_name(d.method) },
                  { "fragments", frags } }.dump()
           + "\n";
  }
  emit(out);
  summarize({ { "command", "decompose" }, { "molecules", a.smiles.size() } });
  return 0;
}

struct AttributeArgs {
  std::vector<std::string> smiles;
  std::string property = "clogp";
  bool minimize = false;
  std::string method = "brics";
  std::string removal = "replace_with_h";
};

int run_attribute(const AttributeArgs &a) {
  const auto oracle = oracle_arg(a.property, a.minimize);
  const auto method = method_arg(a.method);
  const auto removal = removal_arg(a.removal);
  std::string out;
  long records = 0;
  for (const std::string &s: a.smiles) {
    const forge::MolGraph mol = forge::parse_smiles(s);
    const forge::Decomposition d = decompose_with(mol, method);
    for (const forge::AttributionRecord &r: forge::attribute(mol, d, oracle, removal)) {
      out += json { { "smiles", forge::canonical_smiles(mol) },
                    { "fragment", r.fragment.smiles() },
                    { "property", forge::property_name(r.property) },
                    { "removal", forge::removal_name(r.removal) },
                    { "raw_delta", r.raw_delta },
                    { "per_atom_score", r.per_atom_score } }.dump()
             + "\n";
      ++records;
    }
  }
  emit(out);
  summarize({ { "command", "attribute" }, { "molecules", a.smiles.size() },
              { "records", records } });
  return 0;
}

struct VrArgs {
  std::string corpus;
  std::string property = "clogp";
  bool minimize = false;
  std::vector<int> radii { 2 };
  int top = 30;
  int shuffles = 100;
  std::string method = "auto";
  std::string removal = "replace_with_h";
};

int run_vr(const VrArgs &a) {
  json summary = { { "command", "vr" } };
  const auto corpus = load_corpus(a.corpus, summary);
  forge::VrConfig cfg;
  cfg.method = method_arg(a.method);
  cfg.removal = removal_arg(a.removal);
  cfg.shuffles = a.shuffles;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  const auto oracle = oracle_arg(a.property, a.minimize);
  const auto occ = forge::collect_occurrences(corpus, oracle, cfg);
  debug(std::to_string(occ.size()) + " fragment occurrences");
  json studies = json::array();
  for (int r: a.radii) {
    const forge::VrStudy st = forge::vr_study(corpus, occ, r, a.top, cfg);
    json reports = json::array();
    for (const forge::VarianceReport &v: st.reports)
      reports.push_back({ { "fragment", v.fragment_key }, { "occurrences", v.n_occurrences },
                          { "environments", v.n_environments },
                          { "sigma_original", v.sigma_original },
                          { "sigma_grouped", v.sigma_grouped }, { "vr", v.vr },
                          { "shuffled_vr", v.shuffled_vr_mean }, { "delta", v.delta } });
    studies.push_back({ { "radius", r }, { "fragments", st.n_fragments },
                        { "mean_real_vr", st.mean_real_vr },
                        { "mean_shuffled_vr", st.mean_shuffled_vr },
                        { "mean_delta", st.mean_delta },
                        { "fraction_real_above_shuffled", st.fraction_real_above_shuffled },
                        { "mean_environments", st.mean_environments },
                        { "reports", reports } });
  }
  emit(json { { "property", a.property }, { "studies", studies } }.dump(2) + "\n");
  summary["occurrences"] = occ.size();
  json brief = json::array();
  for (const auto &s: studies)
    brief.push_back({ { "radius", s["radius"] }, { "mean_real_vr", s["mean_real_vr"] },
                      { "mean_delta", s["mean_delta"] } });
  summary["studies"] = brief;
  summarize(summary);
  return 0;
}

struct MineArgs {
  std::string corpus;
  std::string property = "clogp";
  bool minimize = false;
  std::string method = "auto";
  std::string removal = "replace_with_h";
  int radius = 2;
  int min_bin = 3;
  int cap = 5;
  double min_improvement = 0.01;
};

int run_mine_smeplus(const MineArgs &a) {
  json summary = { { "command", "mine-smeplus" } };
  const auto corpus = load_corpus(a.corpus, summary);
  forge::MineConfig cfg;
  cfg.method = method_arg(a.method);
  cfg.removal = removal_arg(a.removal);
  cfg.radius = a.radius;
  cfg.min_bin = a.min_bin;
  cfg.dedup_cap = a.cap;
  cfg.min_improvement = a.min_improvement;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  const auto oracle = oracle_arg(a.property, a.minimize);
  const forge::ReplacementPool pool = forge::build_pool(corpus, oracle, cfg);
  forge::MiningReport rep;
  const auto pairs = forge::mine_pairs(corpus, pool, cfg, &rep);
  emit(forge::to_jsonl(pairs));
  summary["sites"] = rep.sites;
  summary["candidates_tried"] = rep.candidates_tried;
  summary["apply_failures"] = rep.apply_failures;
  summary["below_threshold"] = rep.below_threshold;
  summary["duplicates"] = rep.duplicates;
  summary["capped"] = rep.capped;
  summary["from_global"] = rep.from_global;
  summary["emitted"] = rep.emitted;
  summarize(summary);
  return 0;
}

struct MmpaArgs {
  std::string activity;
  std::vector<std::string> keywords = forge::kDefaultLeakageKeywords;
  bool no_leakage_filter = false;
  double min_pchembl = 5.0;
  int max_heavy = 15;
  double max_fraction = 0.4;
};

int run_mine_mmpa(const MmpaArgs &a) {
  const forge::ActivityTable table = forge::load_activity_table(a.activity);
  for (int line: table.skipped_lines)
    warn(a.activity + ":" + std::to_string(line) + ": unparseable SMILES skipped");
  std::vector<forge::ActivityRecord> records =
      a.no_leakage_filter ? table.records : forge::leakage_filter(table.records, a.keywords);
  forge::MmpConfig cfg;
  cfg.min_pchembl = a.min_pchembl;
  cfg.max_variable_heavy = a.max_heavy;
  cfg.max_variable_fraction = a.max_fraction;
  forge::MmpReport rep;
  const auto pairs = forge::mine_mmps(records, cfg, &rep);
  emit(forge::to_jsonl(pairs));
  summarize({ { "command", "mine-mmpa" }, { "rows", table.records.size() },
              { "rows_after_leakage_filter", records.size() },
              { "skipped_lines", table.skipped_lines.size() },
              { "molecules", rep.molecules }, { "candidate_pairs", rep.candidate_pairs },
              { "equal_activity", rep.equal_activity }, { "below_pchembl", rep.below_pchembl },
              { "too_large", rep.too_large }, { "unverified", rep.unverified },
              { "emitted", rep.emitted } });
  return 0;
}

struct VerifyArgs {
  std::string pairs;
  std::string src;
  std::string block;
};

int run_verify(const VerifyArgs &a) {
  if (a.pairs.empty() == a.src.empty() || a.src.empty() != a.block.empty())
    throw CLI::ValidationError("verify", "give either --pairs, or --src with --block");
  std::string out;
  long ok = 0, bad = 0;
  if (!a.src.empty()) {
    const forge::MolGraph src = forge::parse_smiles(a.src);
    const forge::Verdict v = forge::verify_block(src, forge::parse_block(a.block));
    (v == forge::Verdict::kOk ? ok : bad)++;
    out = std::string(forge::verdict_name(v)) + "\n";
  } else {
    const auto lines = forge::read_lines(a.pairs);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (forge::trim(lines[i]).empty())
        continue;
      forge::EditPair p = forge::is_mmp_line(lines[i])
                              ? forge::as_edit_pair(forge::parse_mmp_pair(lines[i]))
                              : forge::parse_edit_pair(lines[i]);
      std::string verdict = "ok";
      try {
        const std::string got = forge::apply_edit_smiles(forge::parse_smiles(p.src_smiles),
                                                         p.frag_src, p.frag_tgt);
        if (got != forge::canonicalize(p.tgt_smiles))
          verdict = "mismatch";
      } catch (const Error &e) {
        verdict = "inapplicable";
      }
      if (verdict == "ok") {
        ++ok;
      } else {
        ++bad;
        out += std::to_string(i + 1) + "\t" + verdict + "\t" + p.edit_string() + "\n";
      }
    }
  }
  emit(out);
  summarize({ { "command", "verify" }, { "ok", ok }, { "failed", bad } });
  return bad ? 1 : 0;
}

struct EmitArgs {
  std::string stage = "1";
  std::size_t total = 0;
  std::string spec;
  std::vector<std::string> ratios;
  bool dedup = false;
  std::string corpus;
  std::vector<std::string> properties;
  std::string pairs;
  std::string mmp;
  std::string external;
  int k_demos = 5;
};

int run_emit_corpus(EmitArgs a, const CLI::App &cmd) {
  const int stage = a.stage == "1" ? 1 : a.stage == "2" ? 2 : a.stage == "multiturn" ? 3 : 0;
  if (!stage)
    throw CLI::ValidationError("--stage", "expected 1, 2 or multiturn");

  // Spec file: family ratios plus optional total, k_demos and dedup; flags win.
  std::string ratio_text;
  if (!a.spec.empty()) {
    for (const auto &[key, value]: forge::parse_key_values(forge::read_file(a.spec))) {
      if (key == "total") {
        if (!cmd.count("--total"))
          a.total = std::stoul(value);
      } else if (key == "k_demos") {
        if (!cmd.count("--k-demos"))
          a.k_demos = std::stoi(value);
      } else if (key == "dedup") {
        if (!cmd.count("--dedup"))
          a.dedup = value == "true" || value == "1";
      } else {
        ratio_text += key + "=" + value + "\n";
      }
    }
  }
  for (const std::string &r: a.ratios)
    ratio_text += r + "\n";
  if (a.total == 0)
    throw CLI::ValidationError("--total", "must be given and positive");

  json summary = { { "command", "emit-corpus" }, { "stage", a.stage } };
  forge::Rng rng = forge::make_rng(g.seed);
  std::vector<forge::CorpusSample> samples;
  std::vector<forge::MmpPair> mmp;
  if (!a.mmp.empty())
    mmp = forge::read_mmp_pairs(a.mmp);

  if (stage == 1) {
    const forge::MixtureSpec spec = ratio_text.empty()
                                        ? forge::MixtureSpec::stage1_default()
                                        : forge::parse_mixture(ratio_text, 1);
    std::vector<forge::PropertyId> props;
    for (const std::string &p: a.properties)
      props.push_back(property_arg(p));
    if (props.empty())
      props.assign(forge::all_properties().begin(), forge::all_properties().end());
    std::vector<forge::MolGraph> corpus;
    if (!a.corpus.empty())
      corpus = load_corpus(a.corpus, summary);
    const auto attrs = forge::collect_attributions(corpus, props, g.seed, g.threads);
    std::vector<forge::ExternalSample> ext;
    if (!a.external.empty())
      ext = forge::load_external(a.external);
    forge::Stage1Options opt;
    opt.k_demos = a.k_demos;
    samples = forge::emit_stage1({ attrs, mmp, ext }, spec, a.total, rng, opt);
    if (a.dedup)
      warn("--dedup applies to stage 2 only");
  } else if (stage == 2) {
    const forge::MixtureSpec spec = ratio_text.empty()
                                        ? forge::MixtureSpec::stage2_default()
                                        : forge::parse_mixture(ratio_text, 2);
    std::vector<forge::EditPair> pairs;
    if (!a.pairs.empty())
      pairs = forge::read_edit_pairs(a.pairs);
    forge::Stage2Options opt;
    opt.k_demos = a.k_demos;
    opt.dedup = a.dedup;
    opt.threads = g.threads;
    forge::EmitReport rep;
    samples = forge::emit_stage2(pairs, mmp, spec, a.total, rng, opt, &rep);
    summary["drawn"] = rep.drawn;
    summary["duplicates_dropped"] = rep.duplicates_dropped;
    summary["pairs_rejected"] = rep.pairs_rejected;
  } else {
    if (a.pairs.empty())
      throw CLI::ValidationError("--pairs", "multi-turn emission needs mined pairs");
    std::vector<forge::Trajectory> multi;
    for (forge::Trajectory &t: forge::chain_trajectories(forge::read_edit_pairs(a.pairs)))
      if (t.steps.size() >= 2)
        multi.push_back(std::move(t));
    summary["trajectories"] = multi.size();
    samples = forge::emit_multiturn(multi, a.total, rng);
  }

  std::map<std::string, long> families;
  for (const forge::CorpusSample &s: samples)
    ++families[s.meta.family];
  emit(forge::to_jsonl(samples));
  summary["samples"] = samples.size();
  summary["families"] = families;
  summarize(summary);
  return 0;
}

struct OptimizeArgs {
  std::string seed_file;
  std::string oracle = "clogp";
  bool minimize = false;
  int budget = 1000;
  std::optional<double> delta;
  std::vector<std::string> constraints;
  std::string pool;
  std::string corpus;
  int k_demos = 5;
  int candidates = 8;
  double temperature = 0.7;
  bool per_seed = false;
};

forge::PropertyBound constraint_arg(const std::string &text) {
  // property:min:max, either bound may be empty
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos)
    throw Error(ErrorCode::kInvalidArgument,
                "constraint '" + text + "' is not property:min:max");
  forge::PropertyBound bound;
  bound.property = property_arg(text.substr(0, a));
  auto number = [&](const std::string &s) -> std::optional<double> {
    if (s.empty())
      return std::nullopt;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != s.size())
      throw Error(ErrorCode::kInvalidArgument, "constraint bound '" + s + "' is not a number");
    return v;
  };
  bound.min = number(text.substr(a + 1, b - a - 1));
  bound.max = number(text.substr(b + 1));
  return bound;
}

int run_optimize(const OptimizeArgs &a) {
  if (a.pool.empty() == a.corpus.empty())
    throw CLI::ValidationError("optimize", "give exactly one of --pool and --corpus");
  json summary = { { "command", "optimize" } };
  const auto seeds = load_corpus(a.seed_file, summary);
  if (seeds.empty())
    throw Error(ErrorCode::kEmptySource, "no seeds in '" + a.seed_file + "'");

  std::unique_ptr<forge::Oracle> oracle;
  std::optional<forge::PropertyOracle> surrogate;
  if (a.oracle.rfind("ext:", 0) == 0) {
    oracle = std::make_unique<forge::ExternalProcessOracle>(a.oracle.substr(4));
  } else {
    const auto po = oracle_arg(a.oracle, a.minimize);
    oracle = std::make_unique<forge::PropertyScoreOracle>(po);
    surrogate = po;
  }

  forge::ReplacementPool pool;
  if (!a.pool.empty()) {
    pool = forge::pool_from_pairs(forge::read_edit_pairs(a.pool));
  } else {
    json ignored;
    const auto corpus = load_corpus(a.corpus, ignored);
    forge::MineConfig mc;
    mc.seed = g.seed;
    mc.threads = g.threads;
    pool = forge::build_pool(corpus, surrogate.value_or(forge::PropertyOracle {}), mc);
  }
  if (pool.empty())
    throw Error(ErrorCode::kEmptySource, "replacement pool is empty");

  forge::SearchConfig cfg;
  cfg.budget = a.budget;
  cfg.k_demos = a.k_demos;
  cfg.candidates_per_step = a.candidates;
  cfg.similarity_floor = a.delta;
  cfg.temperature = a.temperature;
  cfg.seed = g.seed;
  for (const std::string &c: a.constraints)
    cfg.extra_constraints.push_back(constraint_arg(c));
  cfg.validate();

  forge::EditTableConfig ec;
  ec.surrogate = surrogate;
  std::vector<std::string> reports;
  json runs = json::array();
  auto run = [&](std::span<const forge::MolGraph> group) {
    const auto policy = forge::edit_table_policy(pool, ec);
    const forge::SearchReport r = forge::run_optimization(group, *oracle, *policy, cfg);
    reports.push_back(forge::to_json(r));
    runs.push_back({ { "oracle_calls", r.calls.size() }, { "best", r.best_score },
                     { "seed_score", r.seed_scores.empty() ? 0.0 : r.seed_scores[0] },
                     { "top10_auc", r.top10_auc }, { "policy_failure", r.policy_failure },
                     { "exhausted", r.exhausted } });
  };
  if (a.per_seed) {
    for (std::size_t i = 0; i < seeds.size(); ++i)
      run(std::span(seeds).subspan(i, 1));
    std::string out = "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i)
      out += reports[i] + (i + 1 < reports.size() ? ",\n" : "\n");
    emit(out + "]\n");
  } else {
    run(seeds);
    emit(reports.front() + "\n");
  }
  summary["oracle"] = oracle->name();
  summary["runs"] = runs;
  summarize(summary);
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app { "forge: fragment attribution, edit mining, corpus emission and search" };
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for mining (0 = all cores)");
  app.add_option("--log-level", g.log_level, "debug, info, warning or error")
      ->check(CLI::IsMember({ "debug", "info", "warning", "error" }))
      ->capture_default_str();
  app.add_option("-o,--output", g.output, "Primary output file (default stdout)");
  app.add_option("--summary", g.summary_path, "Also write the JSON summary here");

  ParseArgs parse_a;
  auto *parse = app.add_subcommand("parse", "Canonicalize SMILES");
  parse->add_option("smiles", parse_a.smiles, "SMILES strings");
  parse->add_option("-i,--input", parse_a.input, "File with one SMILES per line")
      ->check(CLI::ExistingFile);

  FpArgs fp_a;
  auto *fp = app.add_subcommand("fp", "Morgan fingerprint bits (Tanimoto for two inputs)");
  fp->add_option("smiles", fp_a.smiles, "SMILES strings")->required();
  fp->add_option("--radius", fp_a.radius)->capture_default_str()->check(CLI::Range(0, 8));
  fp->add_option("--length", fp_a.length)->capture_default_str()->check(CLI::Range(64, 1 << 20));

  TokenizeArgs tok_a;
  auto *tok = app.add_subcommand("tokenize", "Tokenize text with <start_smiles> spans");
  tok->add_option("text", tok_a.text, "Text to tokenize")->required();
  tok->add_flag("--smiles", tok_a.smiles_only, "Treat the whole text as one SMILES span");

  PropsArgs props_a;
  auto *props = app.add_subcommand("props", "Compute molecular properties");
  props->add_option("smiles", props_a.smiles, "SMILES strings");
  props->add_option("-i,--input", props_a.input)->check(CLI::ExistingFile);
  props->add_option("-p,--property", props_a.properties, "Properties (default all)");

  DecomposeArgs dec_a;
  auto *dec = app.add_subcommand("decompose", "Cut molecules into fragments");
  dec->add_option("smiles", dec_a.smiles)->required();
  dec->add_option("--method", dec_a.method, "murcko, brics, efg or auto")->capture_default_str();

  AttributeArgs att_a;
  auto *att = app.add_subcommand("attribute", "Fragment attributions by removal");
  att->add_option("smiles", att_a.smiles)->required();
  att->add_option("-p,--property", att_a.property)->capture_default_str();
  att->add_flag("--minimize", att_a.minimize, "Lower property values are better");
  att->add_option("--method", att_a.method)->capture_default_str();
  att->add_option("--removal", att_a.removal, "replace_with_h or delete_with_cap")
      ->capture_default_str();

  VrArgs vr_a;
  auto *vr = app.add_subcommand("vr", "Variance-reduction study over a corpus");
  vr->add_option("--corpus", vr_a.corpus)->required()->check(CLI::ExistingFile);
  vr->add_option("-p,--property", vr_a.property)->capture_default_str();
  vr->add_flag("--minimize", vr_a.minimize);
  vr->add_option("-r,--radius", vr_a.radii, "Environment radii")->delimiter(',');
  vr->add_option("--top", vr_a.top)->capture_default_str();
  vr->add_option("--shuffles", vr_a.shuffles)->capture_default_str();
  vr->add_option("--method", vr_a.method)->capture_default_str();
  vr->add_option("--removal", vr_a.removal)->capture_default_str();

  MineArgs mine_a;
  auto *mine = app.add_subcommand("mine-smeplus", "Mine context-conditioned edit pairs");
  mine->add_option("--corpus", mine_a.corpus)->required()->check(CLI::ExistingFile);
  mine->add_option("-p,--property", mine_a.property)->capture_default_str();
  mine->add_flag("--minimize", mine_a.minimize);
  mine->add_option("--method", mine_a.method)->capture_default_str();
  mine->add_option("--removal", mine_a.removal)->capture_default_str();
  mine->add_option("--radius", mine_a.radius)->capture_default_str();
  mine->add_option("--min-bin", mine_a.min_bin)->capture_default_str();
  mine->add_option("--cap", mine_a.cap, "Occurrences per edit string")->capture_default_str();
  mine->add_option("--min-improvement", mine_a.min_improvement)->capture_default_str();

  MmpaArgs mmpa_a;
  auto *mmpa = app.add_subcommand("mine-mmpa", "Matched molecular pairs from activity data");
  mmpa->add_option("--activity", mmpa_a.activity, "CSV: smiles,target_id,target_desc,pchembl")
      ->required()
      ->check(CLI::ExistingFile);
  mmpa->add_option("--leakage-keyword", mmpa_a.keywords)->capture_default_str();
  mmpa->add_flag("--no-leakage-filter", mmpa_a.no_leakage_filter);
  mmpa->add_option("--min-pchembl", mmpa_a.min_pchembl)->capture_default_str();
  mmpa->add_option("--max-heavy", mmpa_a.max_heavy)->capture_default_str();
  mmpa->add_option("--max-fraction", mmpa_a.max_fraction)->capture_default_str();

  VerifyArgs ver_a;
  auto *ver = app.add_subcommand("verify", "Check edit pairs or a modification block");
  ver->add_option("--pairs", ver_a.pairs, "Pair JSONL")->check(CLI::ExistingFile);
  ver->add_option("--src", ver_a.src, "Source SMILES");
  ver->add_option("--block", ver_a.block, "Modification block text");

  EmitArgs emit_a;
  auto *em = app.add_subcommand("emit-corpus", "Emit instruction-tuning JSONL");
  em->add_option("--stage", emit_a.stage, "1, 2 or multiturn")->capture_default_str();
  em->add_option("--total", emit_a.total, "Samples (per property for multiturn)");
  em->add_option("--spec", emit_a.spec, "key = value mixture file")->check(CLI::ExistingFile);
  em->add_option("--ratio", emit_a.ratios, "family=ratio, overrides --spec");
  em->add_flag("--dedup", emit_a.dedup, "Drop repeated (instruction, input) in stage 2");
  em->add_option("--corpus", emit_a.corpus, "Molecules for attribution families")
      ->check(CLI::ExistingFile);
  em->add_option("-p,--property", emit_a.properties, "Attribution properties (default all)");
  em->add_option("--pairs", emit_a.pairs, "Mined edit pairs JSONL")->check(CLI::ExistingFile);
  em->add_option("--mmp", emit_a.mmp, "Matched pairs JSONL")->check(CLI::ExistingFile);
  em->add_option("--external", emit_a.external, "Pass-through instruction JSONL")
      ->check(CLI::ExistingFile);
  em->add_option("--k-demos", emit_a.k_demos)->capture_default_str();

  OptimizeArgs opt_a;
  auto *opt = app.add_subcommand("optimize", "Budgeted search with the edit-table policy");
  opt->add_option("--seed-file", opt_a.seed_file)->required()->check(CLI::ExistingFile);
  opt->add_option("--oracle", opt_a.oracle, "property name or ext:<command>")
      ->capture_default_str();
  opt->add_flag("--minimize", opt_a.minimize);
  opt->add_option("--budget", opt_a.budget)->capture_default_str();
  opt->add_option("--delta", opt_a.delta, "Tanimoto floor to the seed");
  opt->add_option("--constraint", opt_a.constraints, "property:min:max");
  opt->add_option("--pool", opt_a.pool, "Mined pairs JSONL")->check(CLI::ExistingFile);
  opt->add_option("--corpus", opt_a.corpus, "Build the pool from this corpus instead")
      ->check(CLI::ExistingFile);
  opt->add_option("--k-demos", opt_a.k_demos)->capture_default_str();
  opt->add_option("--candidates", opt_a.candidates)->capture_default_str();
  opt->add_option("--temperature", opt_a.temperature)->capture_default_str();
  opt->add_flag("--per-seed", opt_a.per_seed, "One run per seed, reports as a JSON array");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::string what = e.what();
    if (!app.get_subcommands().size())
      for (int i = 1; i < argc; ++i)
        if (argv[i][0] != '-' && (i == 1 || argv[i - 1][0] != '-')) {
          what = std::string("unknown command '") + argv[i] + "'";
          break;
        }
    std::cerr << "error: " << what << "\n\n" << app.help();
    return 2;
  }
  g.level = g.log_level == "debug"     ? Level::kDebug
            : g.log_level == "warning" ? Level::kWarning
            : g.log_level == "error"   ? Level::kError
                                       : Level::kInfo;

  try {
    if (*parse)
      return run_parse(parse_a);
    if (*fp)
      return run_fp(fp_a);
    if (*tok)
      return run_tokenize(tok_a);
    if (*props)
      return run_props(props_a);
    if (*dec)
      return run_decompose(dec_a);
    if (*att)
      return run_attribute(att_a);
    if (*vr)
      return run_vr(vr_a);
    if (*mine)
      return run_mine_smeplus(mine_a);
    if (*mmpa)
      return run_mine_mmpa(mmpa_a);
    if (*ver)
      return run_verify(ver_a);
    if (*em)
      return run_emit_corpus(emit_a, *em);
    if (*opt)
      return run_optimize(opt_a);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
