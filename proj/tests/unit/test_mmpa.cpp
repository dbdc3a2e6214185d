//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "forge/error.hpp"
#include "forge/mmpa.hpp"
#include "forge/smeplus.hpp"
#include "forge/smiles.hpp"

using namespace forge;

namespace {

const std::string kTetraphenyl =
    "c1ccc(cc1)-c1ccc(cc1)-c1ccc(cc1)-c1ccc(cc1)";

std::string lower(std::string s) {
  for (char &c: s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<MmpPair> fixture_pairs(std::vector<ActivityRecord> records) {
  return mine_mmps(leakage_filter(records));
}

}  // namespace

TEST_CASE("activity table parsing") {
  const ActivityTable t = parse_activity_table(
      "smiles,target_id,target_desc,pchembl\n"
      "CCO,T1,Carbonic anhydrase II,5.5\n"
      "CCN,T1,Carbonic anhydrase II,6\n"
      "c1ccccc1,T2,\"Kinase, putative\",7.25\n");
  REQUIRE(t.records.size() == 3);
  CHECK(t.skipped_lines.empty());
  CHECK(t.records[2].target_desc == "Kinase, putative");
  CHECK(t.records[2].pchembl == 7.25);

  SUBCASE("header order is free") {
    const ActivityTable u = parse_activity_table(
        "pchembl,target_desc,smiles,target_id\n5.1,desc,CC,T9\n");
    REQUIRE(u.records.size() == 1);
    CHECK(u.records[0].smiles == "CC");
    CHECK(u.records[0].target_id == "T9");
  }
  SUBCASE("bad smiles skipped and counted") {
    const ActivityTable u = parse_activity_table(
        "smiles,target_id,target_desc,pchembl\nCCO,T,d,5\nC((,T,d,6\nCN,T,d,7\n");
    CHECK(u.records.size() == 2);
    CHECK(u.skipped_lines == std::vector<int>{ 3 });
  }
  SUBCASE("missing column") {
    try {
      parse_activity_table("smiles,target_id,pchembl\nCCO,T,5\n");
      FAIL("expected MalformedCsv");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kMalformedCsv);
    }
  }
  SUBCASE("short row reports its line") {
    try {
      parse_activity_table("smiles,target_id,target_desc,pchembl\nCCO,T,d,5\nCCN,T\n");
      FAIL("expected MalformedCsv");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kMalformedCsv);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("non-finite pchembl") {
    CHECK_THROWS_AS(parse_activity_table(
                        "smiles,target_id,target_desc,pchembl\nCCO,T,d,nan\n"),
                    Error);
    CHECK_THROWS_AS(parse_activity_table(
                        "smiles,target_id,target_desc,pchembl\nCCO,T,d,abc\n"),
                    Error);
  }
}

TEST_CASE("leakage filter") {
  const std::vector<ActivityRecord> in = {
    { "CC", "T1", "Dopamine receptor DRD2", 6 },
    { "CC", "T2", "Carbonic anhydrase II", 6 },
    { "CC", "T3", "gsk-3 beta", 6 },
    { "CC", "T4", "c-Jun N-terminal kinase 3 (JNK3)", 6 },
  };
  const auto out = leakage_filter(in);
  REQUIRE(out.size() == 1);
  CHECK(out[0].target_desc == "Carbonic anhydrase II");

  const std::vector<std::string> none;
  CHECK(leakage_filter(in, none).size() == 4);
}

TEST_CASE("single pair oriented toward the more active molecule") {
  const std::vector<ActivityRecord> rec = {
    { "c1ccccc1CO", "T", "d", 6.8 },
    { "c1ccccc1CC", "T", "d", 5.2 },
  };
  MmpReport rep;
  const auto pairs = mine_mmps(rec, {}, &rep);
  REQUIRE(pairs.size() == 1);
  const MmpPair &p = pairs[0];
  CHECK(p.src_smiles == canonicalize("CCc1ccccc1"));
  CHECK(p.tgt_smiles == canonicalize("OCc1ccccc1"));
  // The smallest variable parts reproducing the edit: the terminal atom.
  CHECK(p.frag_src == canonicalize("[1*]C"));
  CHECK(p.frag_tgt == canonicalize("[1*]O"));
  CHECK(p.score_src == doctest::Approx(0.0));
  CHECK(p.score_tgt == doctest::Approx(1.0));
  CHECK(p.pchembl_tgt > p.pchembl_src);
  CHECK(apply_edit_smiles(parse_smiles(p.src_smiles), p.frag_src, p.frag_tgt)
        == p.tgt_smiles);
  CHECK(rep.emitted == 1);
}

TEST_CASE("no pair across targets or between identical molecules") {
  CHECK(mine_mmps(std::vector<ActivityRecord>{
                      { "c1ccccc1CO", "T1", "d", 6.8 },
                      { "c1ccccc1CC", "T2", "d", 5.2 } })
            .empty());
  // Two spellings of one molecule are averaged into a single entry.
  CHECK(mine_mmps(std::vector<ActivityRecord>{
                      { "OCc1ccccc1", "T", "d", 6.8 },
                      { "c1ccccc1CO", "T", "d", 5.2 } })
            .empty());
  // Equal activity gives no direction.
  MmpReport rep;
  CHECK(mine_mmps(std::vector<ActivityRecord>{ { "c1ccccc1CO", "T", "d", 6 },
                                               { "c1ccccc1CC", "T", "d", 6 } },
                  {}, &rep)
            .empty());
  CHECK(rep.equal_activity == 1);
}

TEST_CASE("pchembl floor applies to both sides") {
  MmpReport rep;
  CHECK(mine_mmps(std::vector<ActivityRecord>{ { "c1ccccc1CO", "T", "d", 6.8 },
                                               { "c1ccccc1CC", "T", "d", 4.9 } },
                  {}, &rep)
            .empty());
  CHECK(rep.below_pchembl == 1);
}

TEST_CASE("variable part size limit") {
  const std::string chain15(15, 'C');
  const std::string chain16(16, 'C');
  // 24 + 16 heavy atoms: coverage exactly 40%, size one over the limit.
  MmpReport rep;
  CHECK(mine_mmps(std::vector<ActivityRecord>{
                      { kTetraphenyl + "C", "T", "d", 5.5 },
                      { kTetraphenyl + chain16, "T", "d", 7.5 } },
                  {}, &rep)
            .empty());
  CHECK(rep.too_large == 1);

  const auto ok = mine_mmps(std::vector<ActivityRecord>{
      { kTetraphenyl + "C", "T", "d", 5.5 },
      { kTetraphenyl + chain15, "T", "d", 7.5 } });
  REQUIRE(ok.size() == 1);
  CHECK(parse_smiles(ok[0].frag_tgt).num_heavy_atoms() == 15);

  // Coverage: any cut separating O from N leaves >= 3 of 6 atoms variable.
  MmpReport cov;
  CHECK(mine_mmps(std::vector<ActivityRecord>{ { "CCCOCC", "T", "d", 5.5 },
                                               { "CCCNCC", "T", "d", 7.5 } },
                  {}, &cov)
            .empty());
  CHECK(cov.too_large == 1);
}

TEST_CASE("per-target normalization") {
  const std::vector<ActivityRecord> rec = {
    { "c1ccccc1CC", "T", "d", 5.0 },
    { "c1ccccc1CO", "T", "d", 6.0 },
    { "c1ccccc1CN", "T", "d", 9.0 },
  };
  for (const MmpPair &p: mine_mmps(rec)) {
    CHECK(p.score_src == doctest::Approx((p.pchembl_src - 5.0) / 4.0));
    CHECK(p.score_tgt == doctest::Approx((p.pchembl_tgt - 5.0) / 4.0));
  }
}

TEST_CASE("fixture pairs satisfy every filter") {
  const ActivityTable t =
      load_activity_table(FORGE_TEST_DATA_DIR "/activity_200.csv");
  REQUIRE(t.records.size() == 200);
  const auto filtered = leakage_filter(t.records);
  CHECK(filtered.size() < t.records.size());
  const auto pairs = mine_mmps(filtered);
  REQUIRE(pairs.size() > 50);
  for (const MmpPair &p: pairs) {
    CHECK(p.pchembl_tgt > p.pchembl_src);
    CHECK(p.pchembl_src >= 5.0);
    CHECK(p.score_tgt > p.score_src);
    CHECK(p.score_src >= 0.0);
    CHECK(p.score_tgt <= 1.0);
    for (const char *kw: { "jnk", "drd", "gsk" })
      CHECK(lower(p.target_desc).find(kw) == std::string::npos);
    const int src_heavy = parse_smiles(p.src_smiles).num_heavy_atoms();
    const int tgt_heavy = parse_smiles(p.tgt_smiles).num_heavy_atoms();
    const int vs = parse_smiles(p.frag_src).num_heavy_atoms();
    const int vt = parse_smiles(p.frag_tgt).num_heavy_atoms();
    CHECK(vs <= 15);
    CHECK(vt <= 15);
    CHECK(vs <= 0.4 * src_heavy);
    CHECK(vt <= 0.4 * tgt_heavy);
    CHECK(apply_edit_smiles(parse_smiles(p.src_smiles), p.frag_src, p.frag_tgt)
          == p.tgt_smiles);
  }
}

TEST_CASE("row order does not change the pairs") {
  const ActivityTable t =
      load_activity_table(FORGE_TEST_DATA_DIR "/activity_200.csv");
  const auto ref = fixture_pairs(t.records);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 5; ++k) {
    std::vector<ActivityRecord> rec = t.records;
    std::shuffle(rec.begin(), rec.end(), rng);
    const auto got = fixture_pairs(rec);
    REQUIRE(got.size() == ref.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].src_smiles == ref[i].src_smiles);
      CHECK(got[i].tgt_smiles == ref[i].tgt_smiles);
      CHECK(got[i].edit_string() == ref[i].edit_string());
      CHECK(got[i].target_id == ref[i].target_id);
      CHECK(got[i].pchembl_src == ref[i].pchembl_src);
      CHECK(got[i].env_key == ref[i].env_key);
    }
  }
}
