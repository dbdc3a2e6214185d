//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "forge/context.hpp"
#include "forge/error.hpp"
#include "forge/io.hpp"
#include "forge/smiles.hpp"

using namespace forge;

namespace {

// The fragment whose label-free key equals `key`, in decomposition order.
std::vector<Fragment> fragments_with_key(const MolGraph &mol,
                                         DecompositionMethod method,
                                         const std::string &key) {
  std::vector<Fragment> out;
  for (const Fragment &f: decompose(mol, method).fragments)
    if (fragment_key(f.graph) == key)
      out.push_back(f);
  return out;
}

EnvironmentKey key_of(const std::string &host, const std::string &frag,
                      int radius) {
  const MolGraph m = parse_smiles(host);
  const auto fs = fragments_with_key(m, DecompositionMethod::kMurcko,
                                     fragment_key(frag));
  REQUIRE(!fs.empty());
  return environment_key(m, fs[0], radius);
}

EnvironmentKey env(std::uint64_t d) {
  return { 0, d };
}

// Direct two-pass evaluation of the pooled statistic.
double brute_vr(const std::vector<ScoredSample> &s) {
  const double n = static_cast<double>(s.size());
  double mean = 0;
  for (const auto &x: s)
    mean += x.score / n;
  double var = 0;
  for (const auto &x: s)
    var += (x.score - mean) * (x.score - mean) / n;
  std::map<std::uint64_t, std::vector<double>> g;
  for (const auto &x: s)
    g[x.env.digest].push_back(x.score);
  double within = 0;
  for (const auto &[k, xs]: g) {
    double m = 0;
    for (double v: xs)
      m += v / xs.size();
    for (double v: xs)
      within += (v - m) * (v - m);
  }
  if (var == 0)
    return 0;
  return 1 - std::sqrt(within / n) / std::sqrt(var);
}

}  // namespace

TEST_CASE("symmetric attachments give equal keys") {
  const MolGraph m = parse_smiles("Cc1ccc(C)cc1");
  const auto methyls = fragments_with_key(m, DecompositionMethod::kMurcko,
                                          fragment_key("[1*]C"));
  REQUIRE(methyls.size() == 2);
  for (int r = 0; r <= 3; ++r)
    CHECK(environment_key(m, methyls[0], r)
          == environment_key(m, methyls[1], r));
}

TEST_CASE("keys do not depend on host atom order") {
  const std::string s = "CCc1ccc(OC)cc1C(=O)N";
  const MolGraph m = parse_smiles(s);
  std::vector<int> order(m.num_atoms());
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());
  const MolGraph p = m.permuted(order);
  const std::string key = fragment_key("[1*]C(N)=O");
  const auto a = fragments_with_key(m, DecompositionMethod::kBrics, key);
  const auto b = fragments_with_key(p, DecompositionMethod::kBrics, key);
  REQUIRE(a.size() == 1);
  REQUIRE(b.size() == 1);
  for (int r = 0; r <= 3; ++r)
    CHECK(environment_key(m, a[0], r) == environment_key(p, b[0], r));
}

TEST_CASE("radius 0 sees only the attachment atom") {
  // Both hydroxyls hang off a CH2 bonded to one carbon.
  CHECK(key_of("c1ccccc1CCO", "[1*]CCO", 0) == key_of("c1ccccc1CO", "[1*]CO", 0));
  CHECK(key_of("OCc1ccccc1", "[1*]CO", 0) == key_of("OCc1cccnc1", "[1*]CO", 0));
  CHECK(key_of("OCc1ccccc1", "[1*]CO", 2) != key_of("OCc1cccnc1", "[1*]CO", 2));
  CHECK(key_of("OCc1ccccc1", "[1*]CO", 1) == key_of("OCc1cccnc1", "[1*]CO", 1));
}

TEST_CASE("environment key errors") {
  const MolGraph m = parse_smiles("CCO");
  const Decomposition d = decompose(m, DecompositionMethod::kMurcko);
  REQUIRE(d.fragments.size() == 1);
  CHECK_THROWS_WITH_AS(environment_key(m, d.fragments[0], 2), doctest::Contains("attachment"), Error);
  const std::vector<int> o = { 2 };
  CHECK_THROWS_AS(environment_key(m, extract_fragment(m, o), -1), Error);
}

TEST_CASE("variance reduction limits") {
  Rng rng = make_rng(3);
  const std::vector<ScoredSample> one = {
    { env(1), 1.0 }, { env(1), 2.0 }, { env(1), 4.0 }, { env(1), 7.0 } };
  VarianceReport r = variance_reduction(one, 10, rng);
  CHECK(r.vr == 0.0);
  CHECK(r.sigma_grouped == doctest::Approx(r.sigma_original));
  CHECK(r.n_environments == 1);

  const std::vector<ScoredSample> constant = {
    { env(1), 1.0 }, { env(1), 1.0 }, { env(2), 3.0 }, { env(2), 3.0 },
    { env(3), 5.0 } };
  r = variance_reduction(constant, 10, rng);
  CHECK(r.vr == 1.0);
  CHECK(r.sigma_grouped == 0.0);

  const std::vector<ScoredSample> flat = { { env(1), 2.0 }, { env(2), 2.0 } };
  CHECK(variance_reduction(flat, 5, rng).vr == 0.0);
}

TEST_CASE("balanced two-group shuffle baseline") {
  // Three distinct balanced partitions: one gives VR 1, two give VR 0.
  const std::vector<ScoredSample> s = {
    { env(1), 0.0 }, { env(1), 0.0 }, { env(2), 10.0 }, { env(2), 10.0 } };
  Rng rng = make_rng(11);
  const VarianceReport r = variance_reduction(s, 3000, rng);
  CHECK(r.vr == 1.0);
  CHECK(r.shuffled_vr_mean < 1.0);
  CHECK(r.shuffled_vr_mean == doctest::Approx(1.0 / 3).epsilon(0.05));
  CHECK(r.delta == doctest::Approx(r.vr - r.shuffled_vr_mean));
}

TEST_CASE("variance reduction matches a direct evaluation") {
  Rng rng = make_rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ScoredSample> s;
    const int n = 2 + static_cast<int>(uniform_index(rng, 30));
    for (int i = 0; i < n; ++i)
      s.push_back({ env(uniform_index(rng, 4)), uniform01(rng) * 10 });
    Rng r1 = make_rng(trial);
    const VarianceReport r = variance_reduction(s, 3, r1);
    CHECK(r.vr == doctest::Approx(std::max(0.0, brute_vr(s))).epsilon(1e-9));
    CHECK(r.vr >= 0.0);
    CHECK(r.vr <= 1.0);
    Rng r2 = make_rng(trial);
    CHECK(variance_reduction(s, 3, r2).shuffled_vr_mean == r.shuffled_vr_mean);
  }
}

TEST_CASE("variance reduction errors") {
  Rng rng = make_rng(1);
  const std::vector<ScoredSample> one = { { env(1), 1.0 } };
  try {
    variance_reduction(one, 10, rng);
    FAIL("expected TooFewSamples");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kTooFewSamples);
  }
  const std::vector<ScoredSample> two = { { env(1), 1.0 }, { env(2), 2.0 } };
  CHECK_THROWS_AS(variance_reduction(two, 0, rng), Error);
}

TEST_CASE("vr study on a corpus slice") {
  std::vector<MolGraph> corpus;
  for (const auto &s: read_smiles_file(FORGE_TEST_DATA_DIR "/corpus_2k.smi")) {
    corpus.push_back(parse_smiles(s));
    if (corpus.size() == 300)
      break;
  }
  VrConfig cfg;
  cfg.seed = 9;
  cfg.shuffles = 20;
  const PropertyOracle clogp { PropertyId::kClogp, Direction::kHigherBetter };
  const auto occ = collect_occurrences(corpus, clogp, cfg);
  REQUIRE(!occ.empty());

  double prev_vr = -1;
  double prev_envs = -1;
  for (int r = 1; r <= 4; ++r) {
    const VrStudy st = vr_study(corpus, occ, r, 15, cfg);
    REQUIRE(st.reports.size() == 15);
    CHECK(st.mean_real_vr >= prev_vr);
    CHECK(st.mean_environments >= prev_envs);
    for (const VarianceReport &rep: st.reports) {
      CHECK(rep.vr >= 0);
      CHECK(rep.vr <= 1);
    }
    prev_vr = st.mean_real_vr;
    prev_envs = st.mean_environments;
  }

  const VrStudy a = vr_study(corpus, occ, 2, 1000, cfg);
  CHECK(a.reports.size() == static_cast<std::size_t>(a.n_fragments));
  CHECK(a.mean_delta > 0);
  cfg.threads = 1;
  const VrStudy b = vr_study(corpus, clogp, 2, 1000, cfg);
  REQUIRE(b.reports.size() == a.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].fragment_key == b.reports[i].fragment_key);
    CHECK(a.reports[i].shuffled_vr_mean == b.reports[i].shuffled_vr_mean);
  }
}
