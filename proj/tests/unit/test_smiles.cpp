//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "forge/error.hpp"
#include "forge/random.hpp"
#include "forge/smiles.hpp"

using namespace forge;

namespace {

ErrorCode parse_error(const std::string &s) {
  try {
    parse_smiles(s);
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an error for " << s);
  return ErrorCode::kInvalidArgument;
}

std::string permuted_canonical(const std::string &smiles, Rng &rng) {
  const MolGraph mol = parse_smiles(smiles);
  std::vector<int> order(mol.num_atoms());
  std::iota(order.begin(), order.end(), 0);
  shuffle(std::span<int>(order), rng);
  return canonical_smiles(mol.permuted(order));
}

}  // namespace

TEST_CASE("parse ethane") {
  const MolGraph m = parse_smiles("CC");
  REQUIRE(m.num_atoms() == 2);
  REQUIRE(m.num_bonds() == 1);
  CHECK(m.atom(0).hydrogens == 3);
  CHECK(m.atom(1).hydrogens == 3);
  CHECK(m.bond(0).order == BondOrder::kSingle);
}

TEST_CASE("parse benzene") {
  const MolGraph m = parse_smiles("c1ccccc1");
  REQUIRE(m.num_atoms() == 6);
  REQUIRE(m.num_bonds() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(m.atom(i).aromatic);
    CHECK(m.atom(i).hydrogens == 1);
    CHECK(m.atom_in_ring(i));
  }
  for (const Bond &b: m.bonds())
    CHECK(b.order == BondOrder::kAromatic);
  CHECK(m.rings().size() == 1);
}

TEST_CASE("labelled dummies") {
  const MolGraph m = parse_smiles("[3*]C[4*]");
  REQUIRE(m.num_atoms() == 3);
  CHECK(m.atom(0).is_dummy());
  CHECK(m.atom(0).attachment_label == 3);
  CHECK(m.atom(2).attachment_label == 4);
  CHECK(m.degree(0) == 1);
  CHECK(m.degree(2) == 1);
  CHECK(m.atom(1).hydrogens == 2);
  CHECK(parse_smiles("[*:2]C").atom(0).attachment_label == 2);
}

TEST_CASE("implicit hydrogens follow the valence model") {
  CHECK(parse_smiles("C=O").atom(0).hydrogens == 2);
  CHECK(parse_smiles("C#N").atom(0).hydrogens == 1);
  CHECK(parse_smiles("CS(=O)(=O)C").atom(1).hydrogens == 0);
  CHECK(parse_smiles("CP(C)C").atom(1).hydrogens == 0);
  CHECK(parse_smiles("c1ccncc1").atom(3).hydrogens == 0);
  CHECK(parse_smiles("c1cc[nH]c1").atom(3).hydrogens == 1);
  CHECK(parse_smiles("c1ccoc1").atom(3).hydrogens == 0);
  CHECK(parse_smiles("[NH4+]").atom(0).hydrogens == 4);
  CHECK(parse_smiles("[O-]C").atom(0).hydrogens == 0);
  CHECK(parse_smiles("ClC").atom(0).hydrogens == 0);
  CHECK(parse_smiles("BrC").atom(1).hydrogens == 3);
}

TEST_CASE("explicit [H] atoms fold into the neighbour") {
  const MolGraph m = parse_smiles("[H]C([H])([H])[H]");
  REQUIRE(m.num_atoms() == 1);
  CHECK(m.atom(0).hydrogens == 4);
  CHECK(canonicalize("[H]OC") == canonicalize("CO"));
  CHECK(parse_smiles("[H][H]").num_atoms() == 2);
}

TEST_CASE("stereo annotations are retained and ignored") {
  const MolGraph m = parse_smiles("C[C@@H](O)F");
  CHECK(m.atom(1).chirality == Chirality::kClockwise);
  CHECK(canonicalize("C[C@@H](O)F") == canonicalize("CC(O)F"));
  CHECK(canonicalize("F/C=C/F") == canonicalize("FC=CF"));
}

TEST_CASE("syntax errors") {
  CHECK(parse_error("C((") == ErrorCode::kUnbalancedParen);
  CHECK(parse_error("CC)") == ErrorCode::kUnbalancedParen);
  CHECK(parse_error("C1CC") == ErrorCode::kUnbalancedRing);
  CHECK(parse_error("C(C)(C)(C)(C)C") == ErrorCode::kValenceError);
  CHECK(parse_error("CXC") == ErrorCode::kUnknownToken);
  CHECK(parse_error("C=") == ErrorCode::kUnknownToken);
  CHECK(parse_error("[C") == ErrorCode::kUnknownToken);
  CHECK(parse_error("[CH5]") == ErrorCode::kValenceError);
  try {
    parse_smiles("CC?C");
  } catch (const Error &e) {
    CHECK(e.offset() == 2);
  }
}

TEST_CASE("empty input is an empty graph") {
  CHECK(parse_smiles("").empty());
  CHECK(canonicalize("") == "");
}

TEST_CASE("normalize strips organic-subset isotopes") {
  const MolGraph a = normalize(parse_smiles("[13C]C"));
  CHECK(canonical_smiles(a) == canonicalize("CC"));
  CHECK_FALSE(a.atom(0).isotope.has_value());
  CHECK(a.atom(0).hydrogens == 3);
  CHECK(canonical_smiles(normalize(parse_smiles("[3*]C")))
        == canonicalize("[3*]C"));
  CHECK(canonical_smiles(normalize(parse_smiles("CCO"))) == canonicalize("CCO"));
  CHECK(canonical_smiles(normalize(parse_smiles("[2H]C"))) == "[2H]C");
  CHECK(canonical_smiles(normalize(parse_smiles("[13CH2-]C")))
        == canonicalize("[CH2-]C"));
}

TEST_CASE("canonical strings agree for isomorphic inputs") {
  CHECK(canonicalize("OCC") == canonicalize("CCO"));
  CHECK(canonicalize("c1ccccc1") == canonicalize("c1ccccc1"));
  CHECK(canonicalize("C1=CC=CN=C1") == canonicalize("N1=CC=CC=C1"));
  CHECK(canonicalize("c1ccc2ccccc2c1") == canonicalize("c1cccc2c1cccc2"));
  CHECK(canonicalize("CC(C)(C)O") == canonicalize("OC(C)(C)C"));
  CHECK(canonicalize("[1*]CC[2*]") != canonicalize("[2*]CC[2*]"));
  CHECK(canonicalize("CCO") != canonicalize("COC"));
  CHECK(canonicalize("C1CC1C") != canonicalize("C=CCC"));
}

TEST_CASE("canonical write-out preserves aromatic form and brackets") {
  CHECK(canonicalize("c1ccccc1") == "c1ccccc1");
  CHECK(canonicalize("CCO") == "CCO");
  CHECK(canonicalize("c1cc[nH]c1").find("[nH]") != std::string::npos);
  CHECK(canonicalize("C[N+](C)(C)C").find("[N+]") != std::string::npos);
  CHECK(canonicalize("[3*]C[4*]").find("[3*]") != std::string::npos);
  // Single bond between two aromatic atoms keeps its explicit symbol.
  const std::string biphenyl = canonicalize("c1ccccc1-c1ccccc1");
  CHECK(biphenyl.find('-') != std::string::npos);
  CHECK(canonicalize(biphenyl) == biphenyl);
}

TEST_CASE("idempotence and permutation invariance on a panel") {
  const std::vector<std::string> panel = {
    "CC(=O)Oc1ccccc1C(=O)O",
    "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
    "C1CC2CCC1CC2",
    "C12C3C4C1C5C2C3C45",
    "c1ccc2c(c1)ccc1ccccc12",
    "OC(=O)C1=CC=CC=C1.[Na+].[Cl-]",
    "[1*]c1ccc([2*])cc1",
    "C1CCC2(CC1)CCCCC2",
    "N#Cc1ccc(cc1)S(=O)(=O)N",
    "C%10CCCCC%10",
    "O=C1NC(=O)C(=O)N1",
    "c1ccc2[nH]ccc2c1",
    "CC1=C(C(=O)OC1)c1ccccc1",
    "C1CC1C1CC1C1CC1",
  };
  Rng rng = make_rng(7);
  for (const std::string &s: panel) {
    CAPTURE(s);
    const std::string canon = canonicalize(s);
    CHECK(canonicalize(canon) == canon);
    for (int k = 0; k < 50; ++k)
      REQUIRE(permuted_canonical(s, rng) == canon);
  }
}

TEST_CASE("permuted graphs keep attributes") {
  const MolGraph m = parse_smiles("CC(=O)[O-]");
  const std::vector<int> order = { 3, 2, 1, 0 };
  const MolGraph p = m.permuted(order);
  CHECK(p.atom(0).formal_charge == -1);
  CHECK(p.atom(3).hydrogens == 3);
  CHECK(canonical_smiles(p) == canonical_smiles(m));
}
