//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "forge/error.hpp"
#include "forge/fragment.hpp"
#include "forge/io.hpp"
#include "forge/props.hpp"
#include "forge/smiles.hpp"

using namespace forge;

namespace {

std::vector<std::string> corpus(std::size_t n) {
  std::vector<std::string> all =
      read_smiles_file(FORGE_TEST_DATA_DIR "/corpus_2k.smi");
  if (all.size() > n)
    all.resize(n);
  return all;
}

std::string strip_labels(const MolGraph &g) {
  std::vector<Atom> atoms = g.atoms();
  for (Atom &a: atoms)
    a.attachment_label.reset();
  return canonical_smiles(MolGraph(atoms, g.bonds()));
}

constexpr DecompositionMethod kMethods[] = { DecompositionMethod::kMurcko,
                                             DecompositionMethod::kBrics,
                                             DecompositionMethod::kEfg };

}  // namespace

TEST_CASE("murcko splits scaffold from side chain") {
  const MolGraph m = parse_smiles("c1ccccc1CCO");
  const Decomposition d = decompose(m, DecompositionMethod::kMurcko);
  REQUIRE(d.fragments.size() == 2);
  std::set<std::string> got;
  for (const Fragment &f: d.fragments)
    got.insert(f.smiles());
  CHECK(got == std::set<std::string>{ canonicalize("[1*]c1ccccc1"),
                                      canonicalize("[1*]CCO") });
}

TEST_CASE("nothing to cut") {
  for (DecompositionMethod method: kMethods) {
    const Decomposition d = decompose(parse_smiles("C"), method);
    REQUIRE(d.fragments.size() == 1);
    CHECK_FALSE(d.fragments[0].graph.has_dummy());
  }
  CHECK(decompose(parse_smiles("CCCC"), DecompositionMethod::kMurcko)
            .fragments.size() == 1);
}

TEST_CASE("decompose rejects dummies") {
  CHECK_THROWS_AS(decompose(parse_smiles("[1*]CC"), DecompositionMethod::kBrics),
                  Error);
}

TEST_CASE("brics agrees with the reference pieces") {
  // Reference: an independent implementation's bond breaking, dummies
  // unlabelled. Compare multisets of label-free canonical pieces.
  const auto lines = read_lines(FORGE_TEST_DATA_DIR "/brics_300.tsv");
  REQUIRE(lines.size() == 300);
  int agree = 0;
  for (const std::string &line: lines) {
    const auto tab = line.find('\t');
    const std::string smiles = line.substr(0, tab);
    std::vector<std::string> want;
    for (const MolGraph &piece: [&] {
           const MolGraph ref = parse_smiles(line.substr(tab + 1));
           std::vector<MolGraph> out;
           for (const auto &c: ref.components())
             out.push_back(ref.subgraph(c));
           return out;
         }())
      want.push_back(strip_labels(piece));
    std::vector<std::string> got;
    for (const Fragment &f:
         decompose(parse_smiles(smiles), DecompositionMethod::kBrics).fragments)
      got.push_back(strip_labels(f.graph));
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    if (want == got)
      ++agree;
    else
      MESSAGE(smiles);
  }
  CHECK(agree == 300);
}

TEST_CASE("partition and reassembly on the fixture corpus") {
  for (const std::string &s: corpus(400)) {
    CAPTURE(s);
    const MolGraph m = parse_smiles(s);
    const std::string canon = canonical_smiles(m);
    for (DecompositionMethod method: kMethods) {
      CAPTURE(method_name(method));
      const Decomposition d = decompose(m, method);
      std::vector<int> seen(m.num_atoms(), 0);
      std::set<int> labels;
      for (const Fragment &f: d.fragments) {
        CHECK(f.graph.components().size() == 1);
        for (int a: f.host_atom_indices)
          ++seen[a];
        for (int i = 0; i < f.graph.num_atoms(); ++i)
          if (f.graph.atom(i).is_dummy()) {
            CHECK(f.graph.degree(i) == 1);
            labels.insert(*f.graph.atom(i).attachment_label);
          }
        // One attachment pair per dummy.
        CHECK(f.attachment_pairs.size()
              == static_cast<std::size_t>(f.graph.num_atoms()
                                          - static_cast<int>(
                                              f.host_atom_indices.size())));
      }
      for (int c: seen)
        REQUIRE(c == 1);
      REQUIRE(canonical_smiles(reassemble(d.fragments)) == canon);
    }
  }
}

TEST_CASE("fragment keys ignore label names") {
  CHECK(fragment_key("[1*]CC[2*]") == fragment_key("[2*]CC[1*]"));
  CHECK(fragment_key("[5*]CC[3*]") == fragment_key("[1*]CC[2*]"));
  CHECK(fragment_key("[7*]c1ccc([3*])cc1") == fragment_key("[1*]c1ccc([2*])cc1"));
  CHECK(fragment_key("[1*]CC[2*]") != fragment_key("[1*]CCC[2*]"));
  CHECK(fragment_key("[9*]O") == canonicalize("[1*]O"));
  const std::string k = fragment_key("[4*]C(=O)N[2*]");
  CHECK(fragment_key(k) == k);
  CHECK(k.find("[1*]") != std::string::npos);
  CHECK(k.find("[2*]") != std::string::npos);
}

TEST_CASE("remove fragment") {
  const MolGraph m = parse_smiles("c1ccccc1CCO");
  const Decomposition d = decompose(m, DecompositionMethod::kMurcko);
  const Fragment *chain = nullptr;
  const Fragment *ring = nullptr;
  for (const Fragment &f: d.fragments)
    (f.graph.atom(0).aromatic ? ring : chain) = &f;
  REQUIRE(chain);
  REQUIRE(ring);
  CHECK(canonical_smiles(remove_fragment(m, *chain, Removal::kReplaceWithH))
        == canonicalize("c1ccccc1"));
  CHECK(canonical_smiles(remove_fragment(m, *chain, Removal::kDeleteWithCap))
        == canonicalize("Cc1ccccc1"));
  CHECK(canonical_smiles(remove_fragment(m, *ring, Removal::kReplaceWithH))
        == canonicalize("CCO"));
  CHECK(mol_weight(m) - mol_weight(remove_fragment(m, *chain,
                                                   Removal::kReplaceWithH))
        > 0);

  const Decomposition whole = decompose(parse_smiles("CC"),
                                        DecompositionMethod::kMurcko);
  try {
    remove_fragment(parse_smiles("CC"), whole.fragments[0],
                    Removal::kReplaceWithH);
    FAIL("expected EmptyRemainder");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kEmptyRemainder);
  }
}

TEST_CASE("disconnected remainder keeps the largest component") {
  // Removing the middle linker leaves benzene and a methyl group.
  const MolGraph m = parse_smiles("c1ccccc1OC(=O)C");
  const std::vector<int> linker = { 6, 7, 8 };
  const Fragment f = extract_fragment(m, linker);
  CHECK(f.attachment_pairs.size() == 2);
  CHECK(canonical_smiles(remove_fragment(m, f, Removal::kReplaceWithH))
        == canonicalize("c1ccccc1"));
}

TEST_CASE("attribution: exact additivity") {
  // heavy_atoms: delta equals the fragment's heavy atom count. mol_weight:
  // delta equals the fragment's own atoms (with their hydrogens) minus one
  // hydrogen per severed single bond.
  int checked = 0;
  for (const std::string &s: corpus(200)) {
    const MolGraph m = parse_smiles(s);
    const Decomposition d = decompose(m, DecompositionMethod::kBrics);
    const auto ha = attribute(m, d, { PropertyId::kHeavyAtoms,
                                      Direction::kHigherBetter },
                              Removal::kReplaceWithH);
    const auto mw = attribute(m, d, { PropertyId::kMolWeight,
                                      Direction::kHigherBetter },
                              Removal::kReplaceWithH);
    REQUIRE(ha.size() == d.fragments.size());
    for (std::size_t i = 0; i < d.fragments.size(); ++i) {
      const Fragment &f = d.fragments[i];
      if (d.fragments.size() > 1
          && remove_fragment(m, f, Removal::kReplaceWithH).num_heavy_atoms()
                 + f.num_heavy_atoms()
             != m.num_heavy_atoms())
        continue;  // remainder fell apart
      CHECK(ha[i].raw_delta == f.num_heavy_atoms());
      double direct = 0;
      for (int a: f.host_atom_indices)
        direct += mol_weight(m.subgraph(std::vector<int>{ a }));
      for (const AttachmentPair &p: f.attachment_pairs)
        direct -= 1.008 * valence_contribution(p.order);
      CHECK(mw[i].raw_delta == doctest::Approx(direct).epsilon(1e-12));
      CHECK(ha[i].per_atom_score * f.num_heavy_atoms() == ha[i].raw_delta);
      ++checked;
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("attribution: mol_weight of the side chain") {
  const MolGraph m = parse_smiles("c1ccccc1CCO");
  const Decomposition d = decompose(m, DecompositionMethod::kMurcko);
  const auto rec = attribute(m, d, { PropertyId::kMolWeight,
                                     Direction::kHigherBetter },
                             Removal::kReplaceWithH);
  for (const AttributionRecord &r: rec)
    if (!r.fragment.graph.atom(0).aromatic)
      CHECK(r.raw_delta == doctest::Approx(mol_weight(m)
                                           - mol_weight(parse_smiles("c1ccccc1"))));
}

TEST_CASE("attribution: tpsa ranks the polar fragment first") {
  const MolGraph m = parse_smiles("CCCCc1ccccc1C(=O)O");
  const Decomposition d = decompose(m, DecompositionMethod::kBrics);
  REQUIRE(d.fragments.size() >= 2);
  auto rec = attribute(m, d, { PropertyId::kTpsa, Direction::kHigherBetter },
                       Removal::kReplaceWithH);
  std::sort(rec.begin(), rec.end(), [](const auto &a, const auto &b) {
    return a.per_atom_score > b.per_atom_score;
  });
  int polar = 0;
  for (int i = 0; i < rec[0].fragment.graph.num_atoms(); ++i)
    if (rec[0].fragment.graph.atom(i).atomic_number == 8)
      ++polar;
  CHECK(polar == 2);
}

TEST_CASE("auto decomposition") {
  // Four Murcko side chains, one BRICS cut.
  const MolGraph m = parse_smiles("COc1cc(C)c(C)cc1C");
  CHECK(decompose(m, DecompositionMethod::kMurcko).fragments.size() == 5);
  CHECK(decompose(m, DecompositionMethod::kBrics).fragments.size() == 2);
  int murcko_first = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng probe = make_rng(seed);
    std::array<DecompositionMethod, 3> order = {
      DecompositionMethod::kMurcko, DecompositionMethod::kBrics,
      DecompositionMethod::kEfg
    };
    shuffle(std::span<DecompositionMethod>(order), probe);
    Rng rng = make_rng(seed);
    const Decomposition d = auto_decompose(m, rng);
    CHECK(d.fragments.size() >= 3);
    if (order[0] == DecompositionMethod::kMurcko) {
      CHECK(d.method == DecompositionMethod::kMurcko);
      ++murcko_first;
    }
    Rng again = make_rng(seed);
    CHECK(auto_decompose(m, again).method == d.method);
  }
  CHECK(murcko_first > 0);

  Rng rng = make_rng(1);
  CHECK(auto_decompose(parse_smiles("CC"), rng).fragments.size() == 1);
}

TEST_CASE("method names") {
  CHECK(method_from_name("brics") == DecompositionMethod::kBrics);
  CHECK_FALSE(method_from_name("recap").has_value());
  CHECK(removal_from_name("delete_with_cap") == Removal::kDeleteWithCap);
  CHECK(functional_groups().size() >= 30);
}
