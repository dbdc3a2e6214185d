//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "forge/context.hpp"
#include "forge/editgrammar.hpp"
#include "forge/fingerprint.hpp"
#include "forge/fragment.hpp"
#include "forge/io.hpp"
#include "forge/props.hpp"
#include "forge/smeplus.hpp"
#include "forge/smiles.hpp"
#include "forge/tokenizer.hpp"

namespace {

const std::vector<std::string> &panel() {
  static const std::vector<std::string> smiles = [] {
    auto all = forge::read_smiles_file(FORGE_BENCH_DATA_DIR "/parser_200.smi");
    all.resize(std::min<std::size_t>(all.size(), 200));
    return all;
  }();
  return smiles;
}

const std::vector<forge::MolGraph> &graphs() {
  static const std::vector<forge::MolGraph> mols = [] {
    std::vector<forge::MolGraph> out;
    for (const std::string &s: panel())
      out.push_back(forge::parse_smiles(s));
    return out;
  }();
  return mols;
}

// Each iteration walks the whole 200-molecule panel.
template <class Fn>
void over_panel(benchmark::State &state, Fn fn) {
  for (auto _: state)
    for (const forge::MolGraph &m: graphs())
      fn(m);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(graphs().size()));
}

void BM_ParseSmiles(benchmark::State &state) {
  for (auto _: state)
    for (const std::string &s: panel())
      benchmark::DoNotOptimize(forge::parse_smiles(s));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(panel().size()));
}
BENCHMARK(BM_ParseSmiles);

void BM_CanonicalSmiles(benchmark::State &state) {
  over_panel(state, [](const forge::MolGraph &m) {
    benchmark::DoNotOptimize(forge::canonical_smiles(m));
  });
}
BENCHMARK(BM_CanonicalSmiles);

void BM_MorganFingerprint(benchmark::State &state) {
  const int radius = static_cast<int>(state.range(0));
  over_panel(state, [radius](const forge::MolGraph &m) {
    benchmark::DoNotOptimize(forge::morgan_fingerprint(m, radius));
  });
}
BENCHMARK(BM_MorganFingerprint)->Arg(1)->Arg(2)->Arg(3);

void BM_Clogp(benchmark::State &state) {
  over_panel(state, [](const forge::MolGraph &m) { benchmark::DoNotOptimize(forge::clogp(m)); });
}
BENCHMARK(BM_Clogp);

void BM_Tpsa(benchmark::State &state) {
  over_panel(state, [](const forge::MolGraph &m) { benchmark::DoNotOptimize(forge::tpsa(m)); });
}
BENCHMARK(BM_Tpsa);

void BM_BricsDecompose(benchmark::State &state) {
  over_panel(state, [](const forge::MolGraph &m) {
    benchmark::DoNotOptimize(forge::decompose(m, forge::DecompositionMethod::kBrics));
  });
}
BENCHMARK(BM_BricsDecompose);

void BM_AttributeClogp(benchmark::State &state) {
  over_panel(state, [](const forge::MolGraph &m) {
    const auto d = forge::decompose(m, forge::DecompositionMethod::kBrics);
    benchmark::DoNotOptimize(
        forge::attribute(m, d, forge::PropertyOracle {}, forge::Removal::kReplaceWithH));
  });
}
BENCHMARK(BM_AttributeClogp);

void BM_EnvironmentKey(benchmark::State &state) {
  std::vector<std::pair<const forge::MolGraph *, forge::Fragment>> sites;
  for (const forge::MolGraph &m: graphs())
    for (forge::Fragment &f: forge::decompose(m, forge::DecompositionMethod::kBrics).fragments)
      if (!f.attachment_pairs.empty())
        sites.emplace_back(&m, std::move(f));
  for (auto _: state)
    for (const auto &[m, f]: sites)
      benchmark::DoNotOptimize(forge::environment_key(*m, f, 2));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(sites.size()));
}
BENCHMARK(BM_EnvironmentKey);

void BM_TokenizeMixed(benchmark::State &state) {
  std::string text;
  for (const std::string &s: panel())
    text += "Rank the fragments of <start_smiles>" + s + "<end_smiles> by contribution.\n";
  for (auto _: state)
    benchmark::DoNotOptimize(forge::tokenize_mixed(text));
  state.SetBytesProcessed(state.iterations() * static_cast<long>(text.size()));
}
BENCHMARK(BM_TokenizeMixed);

void BM_ApplyEdit(benchmark::State &state) {
  const forge::MolGraph src = forge::parse_smiles("COc1ccc(CC(=O)Nc2ccc(Cl)cc2)cc1OC");
  for (auto _: state)
    benchmark::DoNotOptimize(forge::apply_edit_smiles(src, "[1*]Cl", "[1*]C(F)(F)F"));
}
BENCHMARK(BM_ApplyEdit);

void BM_ParseBlock(benchmark::State &state) {
  const std::string text =
      "Modification: <start_smiles>[1*]O<end_smiles> >> <start_smiles>[1*]N<end_smiles>\n"
      "Result: <start_smiles>CCN<end_smiles> (value: 0.74)";
  for (auto _: state)
    benchmark::DoNotOptimize(forge::parse_block(text));
}
BENCHMARK(BM_ParseBlock);

}  // namespace

BENCHMARK_MAIN();
