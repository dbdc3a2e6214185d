//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_TESTS_FIXTURES_HPP_
#define FORGE_TESTS_FIXTURES_HPP_

#include <string>
#include <vector>

#include "forge/io.hpp"
#include "forge/smeplus.hpp"
#include "forge/smiles.hpp"

namespace forge::testing {

inline std::vector<MolGraph> corpus_slice(std::size_t n) {
  std::vector<MolGraph> out;
  for (const std::string &s: read_smiles_file(FORGE_TEST_DATA_DIR "/corpus_2k.smi")) {
    if (out.size() == n)
      break;
    out.push_back(parse_smiles(s));
  }
  return out;
}

struct Mined {
  ReplacementPool pool;
  std::vector<EditPair> pairs;
  MiningReport report;
};

// clogp pairs mined from the first 400 corpus molecules, built once.
inline const Mined &mined() {
  static const Mined m = [] {
    Mined r;
    const auto corpus = corpus_slice(400);
    MineConfig cfg;
    cfg.seed = 11;
    r.pool = build_pool(corpus, PropertyOracle{}, cfg);
    r.pairs = mine_pairs(corpus, r.pool, cfg, &r.report);
    return r;
  }();
  return m;
}

}  // namespace forge::testing

#endif  // FORGE_TESTS_FIXTURES_HPP_
