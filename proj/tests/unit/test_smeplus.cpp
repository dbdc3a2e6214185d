//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "forge/error.hpp"
#include "forge/io.hpp"
#include "forge/pair_io.hpp"
#include "forge/smeplus.hpp"
#include "forge/smiles.hpp"
#include "fixtures.hpp"

using namespace forge;
using namespace forge::testing;

namespace {

ErrorCode code_of(const std::string &src, const std::string &a,
                  const std::string &b) {
  try {
    apply_edit(parse_smiles(src), a, b);
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIoError;
}

EditPair pair(const std::string &src, const std::string &tgt, double s,
              double t) {
  EditPair p;
  p.src_smiles = src;
  p.tgt_smiles = tgt;
  p.frag_src = "[1*]C";
  p.frag_tgt = "[1*]N";
  p.score_src = s;
  p.score_tgt = t;
  return p;
}

}  // namespace

TEST_CASE("apply_edit examples") {
  CHECK(apply_edit_smiles(parse_smiles("CCO"), "[1*]O", "[1*]N")
        == canonicalize("CCN"));
  CHECK(apply_edit_smiles(parse_smiles("OCC"), "[1*]O", "[1*]O")
        == canonicalize("CCO"));
  // Bond order follows frag_tgt; host hydrogens absorb the difference.
  CHECK(apply_edit_smiles(parse_smiles("CCO"), "[1*]O", "[1*]=O")
        == canonicalize("CC=O"));
  CHECK(apply_edit_smiles(parse_smiles("Oc1ccccc1"), "[1*]O", "[1*]C(F)(F)F")
        == canonicalize("FC(F)(F)c1ccccc1"));
  // Two-attachment replacement.
  CHECK(apply_edit_smiles(parse_smiles("c1ccccc1OCc1ccccn1"), "[1*]O[2*]",
                          "[1*]N[2*]")
        == canonicalize("c1ccccc1NCc1ccccn1"));
}

TEST_CASE("apply_edit errors") {
  CHECK(code_of("CCC", "[1*]O", "[1*]N") == ErrorCode::kNoMatch);
  CHECK(code_of("CCO", "[1*]O", "[2*]N") == ErrorCode::kLabelMismatch);
  CHECK(code_of("CCO", "[1*]O", "[1*]N[2*]") == ErrorCode::kLabelMismatch);
  // Labels are checked even when frag_src is absent.
  CHECK(code_of("CCC", "[1*]O", "[1*]N[2*]") == ErrorCode::kLabelMismatch);
  CHECK(code_of("CC(C)(C)O", "[1*]O", "[1*]=O") == ErrorCode::kValenceError);
  // Exact matching: the carbonyl O has no hydrogen, so [1*]O does not match.
  CHECK(code_of("CC=O", "[1*]O", "[1*]N") == ErrorCode::kNoMatch);
  CHECK_THROWS_AS(apply_edit(parse_smiles("CCO"), "[1*]O(", "[1*]N"), Error);
}

TEST_CASE("edit site is the smallest exact mapping") {
  const MolGraph m = parse_smiles("OCCCO");
  const auto site = edit_site(m, parse_smiles("[1*]O"));
  REQUIRE(site);
  // Pattern order: dummy (host C1), then O (host 0).
  CHECK((*site)[1] == 0);
  CHECK(!edit_site(m, parse_smiles("[1*]N")));
}

TEST_CASE("lookup prefers the environment bin") {
  ReplacementPool pool;
  const EnvironmentKey k{ 2, 42 };
  const EnvironmentKey other{ 2, 43 };
  pool.by_env[k]["[1*]O"] = { { "[1*]N", 0.5, 3 } };
  pool.by_env[other]["[1*]O"] = {};
  pool.global["[1*]O"] = { { "[1*]Cl", 0.7, 9 }, { "[1*]N", 0.4, 5 } };

  auto a = pool.lookup(k, "[1*]O");
  CHECK_FALSE(a.from_global);
  REQUIRE(a.candidates.size() == 1);
  CHECK(a.candidates[0].frag_tgt == "[1*]N");

  auto b = pool.lookup(other, "[1*]O");
  CHECK(b.from_global);
  CHECK(b.candidates.size() == 2);

  auto c = pool.lookup(EnvironmentKey{ 2, 7 }, "[1*]O");
  CHECK(c.from_global);
  CHECK(c.candidates[0].frag_tgt == "[1*]Cl");

  CHECK(pool.lookup(k, "[1*]S").candidates.empty());
}

TEST_CASE("one-molecule pool has only global entries") {
  const std::vector<MolGraph> one = { parse_smiles("CCCc1ccc(O)cc1") };
  MineConfig cfg;
  cfg.method = DecompositionMethod::kMurcko;
  const ReplacementPool pool = build_pool(one, PropertyOracle{}, cfg);
  CHECK(pool.by_env.empty());
  CHECK_FALSE(pool.empty());
  // Side chains share one attachment; the more lipophilic one is offered.
  const auto look = pool.lookup(EnvironmentKey{}, canonicalize("[1*]O"));
  REQUIRE(!look.candidates.empty());
  CHECK(look.candidates[0].frag_tgt == canonicalize("[1*]CCC"));
  CHECK(look.candidates[0].mean_delta > 0);
  CHECK(pool.lookup(EnvironmentKey{}, canonicalize("[1*]CCC")).candidates.empty());
  CHECK(pool.prop_max > pool.prop_min);
}

TEST_CASE("pool entries are consistent") {
  const ReplacementPool &pool = mined().pool;
  REQUIRE_FALSE(pool.by_env.empty());
  for (const auto &[env, srcs]: pool.by_env)
    for (const auto &[src, cands]: srcs) {
      CHECK(cands.size() <= 20);
      const auto g = pool.global.find(src);
      REQUIRE(g != pool.global.end());
      for (std::size_t i = 0; i < cands.size(); ++i) {
        CHECK(cands[i].mean_delta > 0);
        if (i > 0)
          CHECK(cands[i - 1].mean_delta >= cands[i].mean_delta);
        bool in_global = false;
        for (const Replacement &r: g->second)
          in_global = in_global || r.frag_tgt == cands[i].frag_tgt;
        CHECK(in_global);
      }
    }
}

TEST_CASE("pool and mining are deterministic across thread counts") {
  const auto corpus = corpus_slice(120);
  MineConfig a, b;
  a.threads = 1;
  b.threads = 4;
  const ReplacementPool pa = build_pool(corpus, PropertyOracle{}, a);
  const ReplacementPool pb = build_pool(corpus, PropertyOracle{}, b);
  REQUIRE(pa.global.size() == pb.global.size());
  CHECK(pa.by_env.size() == pb.by_env.size());
  for (auto ia = pa.global.begin(), ib = pb.global.begin(); ia != pa.global.end();
       ++ia, ++ib) {
    CHECK(ia->first == ib->first);
    REQUIRE(ia->second.size() == ib->second.size());
    for (std::size_t i = 0; i < ia->second.size(); ++i) {
      CHECK(ia->second[i].frag_tgt == ib->second[i].frag_tgt);
      CHECK(ia->second[i].mean_delta == ib->second[i].mean_delta);
    }
  }
  CHECK(to_jsonl(std::span<const EditPair>(mine_pairs(corpus, pa, a)))
        == to_jsonl(std::span<const EditPair>(mine_pairs(corpus, pb, b))));
}

TEST_CASE("mined pairs verify, improve and respect the cap") {
  const Mined &m = mined();
  REQUIRE(m.pairs.size() > 100);
  CHECK(m.report.emitted == static_cast<long>(m.pairs.size()));
  std::map<std::string, int> per_edit;
  std::map<std::pair<std::string, std::string>, int> per_pair;
  for (const EditPair &p: m.pairs) {
    CHECK(apply_edit_smiles(parse_smiles(p.src_smiles), p.frag_src, p.frag_tgt)
          == p.tgt_smiles);
    CHECK(p.improvement() > 0.01);
    CHECK(p.score_src >= 0.0);
    CHECK(p.score_tgt <= 1.0);
    CHECK(canonicalize(p.src_smiles) == p.src_smiles);
    ++per_edit[p.edit_string()];
    ++per_pair[{ p.src_smiles, p.tgt_smiles }];
  }
  for (const auto &[edit, n]: per_edit)
    CHECK(n <= 5);
  for (const auto &[key, n]: per_pair)
    CHECK(n == 1);
  // The cap is reached somewhere, so it is doing work.
  int full = 0;
  for (const auto &[edit, n]: per_edit)
    full += n == 5;
  CHECK(full > 0);
  CHECK(m.report.capped > 0);
}

TEST_CASE("mining thresholds and caps are configurable") {
  const auto corpus = corpus_slice(150);
  MineConfig cfg;
  cfg.dedup_cap = 1;
  cfg.min_improvement = 0.1;
  const ReplacementPool pool = build_pool(corpus, PropertyOracle{}, cfg);
  const auto pairs = mine_pairs(corpus, pool, cfg);
  REQUIRE(!pairs.empty());
  std::map<std::string, int> per_edit;
  for (const EditPair &p: pairs) {
    CHECK(p.improvement() > 0.1);
    CHECK(++per_edit[p.edit_string()] == 1);
  }
}

TEST_CASE("lower-is-better oracles flip the score") {
  const auto corpus = corpus_slice(120);
  MineConfig cfg;
  PropertyOracle tpsa_min{ PropertyId::kTpsa, Direction::kLowerBetter };
  const ReplacementPool pool = build_pool(corpus, tpsa_min, cfg);
  const auto pairs = mine_pairs(corpus, pool, cfg);
  REQUIRE(!pairs.empty());
  for (const EditPair &p: pairs) {
    CHECK(p.property == PropertyId::kTpsa);
    CHECK(tpsa(parse_smiles(p.tgt_smiles)) < tpsa(parse_smiles(p.src_smiles)));
  }
}

TEST_CASE("trajectory chaining") {
  SUBCASE("greedy step picks the best improving successor") {
    const std::vector<EditPair> pairs = {
      pair("A", "B", 0.1, 0.3),
      pair("B", "C", 0.3, 0.6),
      pair("B", "D", 0.3, 0.5),
      pair("C", "A", 0.6, 0.7),  // revisits A: never taken
    };
    const auto ts = chain_trajectories(pairs);
    REQUIRE(!ts.empty());
    REQUIRE(ts[0].steps.size() == 2);
    CHECK(ts[0].steps[0].tgt_smiles == "B");
    CHECK(ts[0].steps[1].tgt_smiles == "C");
  }
  SUBCASE("length is capped at six steps") {
    std::vector<EditPair> chain;
    for (int i = 0; i < 8; ++i)
      chain.push_back(pair("M" + std::to_string(i), "M" + std::to_string(i + 1),
                           0.1 * i, 0.1 * (i + 1)));
    const auto ts = chain_trajectories(chain);
    REQUIRE(ts.size() == 2);
    CHECK(ts[0].steps.size() == 6);
    CHECK(ts[1].steps.size() == 2);
    CHECK(chain_trajectories(chain, 3)[0].steps.size() == 3);
    CHECK_THROWS_AS(chain_trajectories(chain, 0), Error);
    CHECK_THROWS_AS(chain_trajectories(chain, 7), Error);
  }
  SUBCASE("mined trajectories are strictly increasing") {
    const auto ts = chain_trajectories(mined().pairs);
    REQUIRE(!ts.empty());
    std::size_t longest = 0;
    for (const Trajectory &t: ts) {
      CHECK(t.steps.size() <= 6);
      longest = std::max(longest, t.steps.size());
      for (std::size_t i = 0; i < t.steps.size(); ++i) {
        CHECK(t.steps[i].score_tgt > t.steps[i].score_src);
        if (i > 0) {
          CHECK(t.steps[i].src_smiles == t.steps[i - 1].tgt_smiles);
          CHECK(t.steps[i].score_tgt > t.steps[i - 1].score_tgt);
        }
      }
    }
    CHECK(longest >= 2);
  }
}

TEST_CASE("pool from mined pairs") {
  const std::vector<EditPair> pairs = { pair("CC", "CN", 0.1, 0.4),
                                        pair("CCC", "CCN", 0.2, 0.4) };
  const ReplacementPool pool = pool_from_pairs(pairs);
  const auto look = pool.lookup(EnvironmentKey{ 2, 999 }, "[1*]C");
  REQUIRE(look.candidates.size() == 1);
  CHECK(look.candidates[0].frag_tgt == "[1*]N");
  CHECK(look.candidates[0].mean_delta == doctest::Approx(0.25));
  CHECK(look.candidates[0].support == 2);
}

TEST_CASE("pair JSONL round trip") {
  for (const EditPair &p: mined().pairs) {
    const EditPair q = parse_edit_pair(to_json_line(p));
    CHECK(q.src_smiles == p.src_smiles);
    CHECK(q.tgt_smiles == p.tgt_smiles);
    CHECK(q.edit_string() == p.edit_string());
    CHECK(q.property == p.property);
    CHECK(q.score_src == p.score_src);
    CHECK(q.score_tgt == p.score_tgt);
    CHECK(q.env_key == p.env_key);
    CHECK(q.from_global == p.from_global);
  }
  MmpPair m;
  m.src_smiles = "CCc1ccccc1";
  m.tgt_smiles = "OCc1ccccc1";
  m.frag_src = "[1*]C";
  m.frag_tgt = "[1*]O";
  m.target_id = "T1";
  m.target_desc = "Carbonic anhydrase II";
  m.pchembl_src = 5.2;
  m.pchembl_tgt = 6.8;
  m.score_tgt = 1;
  m.env_key = { 2, 0xabcdef0123456789ULL };
  const std::string line = to_json_line(m);
  CHECK(line.find("\"property\":\"activity\"") != std::string::npos);
  CHECK(is_mmp_line(line));
  const MmpPair n = parse_mmp_pair(line);
  CHECK(n.target_id == "T1");
  CHECK(n.pchembl_tgt == 6.8);
  CHECK(n.env_key == m.env_key);
  CHECK_THROWS_AS(parse_edit_pair(line), Error);
  CHECK_THROWS_AS(parse_edit_pair("{\"src\": 1}"), Error);
  CHECK_THROWS_AS(parse_edit_pair("not json"), Error);
}
