//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "forge/editgrammar.hpp"
#include "forge/error.hpp"
#include "forge/smiles.hpp"

using namespace forge;
using namespace forge::testing;

namespace {

const std::string kExample =
    "Modification: <start_smiles>[1*]O<end_smiles> >> "
    "<start_smiles>[1*]N<end_smiles>\n"
    "Result: <start_smiles>CCN<end_smiles> (value: 0.74)";

ErrorCode parse_error(const std::string &text) {
  try {
    parse_block(text);
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIoError;
}

ModificationBlock block_of(const EditPair &p, std::optional<double> value) {
  return { p.frag_src, p.frag_tgt, p.tgt_smiles, value, ValueKey::kValue };
}

}  // namespace

TEST_CASE("template example parses") {
  const ModificationBlock b = parse_block(kExample);
  CHECK(b.frag_src == "[1*]O");
  CHECK(b.frag_tgt == "[1*]N");
  CHECK(b.result_smiles == "CCN");
  REQUIRE(b.value);
  CHECK(*b.value == 0.74);
  CHECK(b.value_key == ValueKey::kValue);
  CHECK(render_block(b) == kExample);
}

TEST_CASE("value suffix is optional") {
  const std::string text = kExample.substr(0, kExample.find(" (value"));
  const ModificationBlock b = parse_block(text);
  CHECK_FALSE(b.value);
  CHECK(render_block(b) == text);
  CHECK(render_block(b).find('(') == std::string::npos);
}

TEST_CASE("activity key") {
  ModificationBlock b = parse_block(kExample);
  b.value_key = ValueKey::kActivity;
  const std::string text = render_block(b);
  CHECK(text.find("(activity: 0.74)") != std::string::npos);
  CHECK(parse_block(text) == b);
}

TEST_CASE("whitespace is tolerated on input") {
  const ModificationBlock b = parse_block(
      "\n  Modification:<start_smiles> [1*]O <end_smiles>>><start_smiles>[1*]N"
      "<end_smiles>  \n\n Result:      <start_smiles>CCN<end_smiles>(value:0.74)\n");
  CHECK(b == parse_block(kExample));
}

TEST_CASE("grammar errors") {
  CHECK(parse_error("Modification: X > Y\nResult: <start_smiles>C<end_smiles>")
        == ErrorCode::kGrammarError);
  CHECK(parse_error("Modification: <start_smiles>[1*]O<end_smiles> > "
                    "<start_smiles>[1*]N<end_smiles>\n"
                    "Result: <start_smiles>CCN<end_smiles>")
        == ErrorCode::kGrammarError);
  CHECK(parse_error("Modification: [1*]O >> [1*]N\nResult: CCN")
        == ErrorCode::kGrammarError);
  CHECK(parse_error(kExample.substr(0, kExample.find('\n')))
        == ErrorCode::kGrammarError);
  CHECK(parse_error(kExample + "\n" + kExample) == ErrorCode::kGrammarError);
  CHECK(parse_error("Modification: <start_smiles>[1*]O<end_smiles> >> "
                    "<start_smiles>[1*]N(<end_smiles>\n"
                    "Result: <start_smiles>CCN<end_smiles>")
        == ErrorCode::kInvalidSmiles);
  CHECK(parse_error("Modification: <start_smiles>[1*]O<end_smiles> >> "
                    "<start_smiles>[1*]N<end_smiles>\n"
                    "Result: <start_smiles>CCN<end_smiles> (value: high)")
        == ErrorCode::kMalformedValue);
  CHECK(parse_error("Modification: <start_smiles>[1*]O<end_smiles> >> "
                    "<start_smiles>[1*]N<end_smiles>\n"
                    "Result: <start_smiles>CCN<end_smiles> (value: inf)")
        == ErrorCode::kMalformedValue);
  CHECK(parse_error("Modification: <start_smiles>[1*]O<end_smiles> >> "
                    "<start_smiles>[1*]N<end_smiles>\n"
                    "Result: <start_smiles>CCN<end_smiles> (score: 1)")
        == ErrorCode::kGrammarError);
}

TEST_CASE("verification verdicts") {
  const MolGraph src = parse_smiles("CCO");
  CHECK(verify_block(src, parse_block(kExample)) == Verdict::kOk);
  ModificationBlock b = parse_block(kExample);
  b.result_smiles = "CCC";
  CHECK(verify_block(src, b) == Verdict::kMismatch);
  b = parse_block(kExample);
  b.frag_src = "[1*]S";
  CHECK(verify_block(src, b) == Verdict::kInapplicable);
  b = parse_block(kExample);
  b.frag_tgt = "[2*]N";
  CHECK(verify_block(src, b) == Verdict::kMismatch);
  // Any spelling of the source and result is accepted.
  b = parse_block(kExample);
  b.result_smiles = "NCC";
  CHECK(verify_block(parse_smiles("OCC"), b) == Verdict::kOk);
  CHECK(verdict_name(Verdict::kInapplicable) == "inapplicable");
}

TEST_CASE("mined pairs round-trip and verify") {
  const auto &pairs = mined().pairs;
  REQUIRE(!pairs.empty());
  int i = 0;
  for (const EditPair &p: pairs) {
    const std::optional<double> value =
        i++ % 3 ? std::optional<double>(p.score_tgt) : std::nullopt;
    const ModificationBlock b = block_of(p, value);
    CHECK(parse_block(render_block(b)) == b);
    CHECK(verify_block(parse_smiles(p.src_smiles), b) == Verdict::kOk);
  }
}

TEST_CASE("multi-turn answers chain") {
  const ModificationBlock first = parse_block(kExample);
  ModificationBlock second{ "[1*]N", "[1*]Cl", "CCCl", 0.9, ValueKey::kValue };
  MultiTurnAnswer a{ { first, second } };
  const std::string text = render_multiturn(a);
  CHECK(parse_multiturn(text) == a);
  const auto v = verify_multiturn(parse_smiles("CCO"), a);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == Verdict::kOk);
  CHECK(v[1] == Verdict::kOk);

  second.frag_src = "[1*]O";
  const auto w = verify_multiturn(parse_smiles("CCO"), { { first, second } });
  REQUIRE(w.size() == 2);
  CHECK(w[1] == Verdict::kInapplicable);

  MultiTurnAnswer seven;
  for (int k = 0; k < 7; ++k)
    seven.blocks.push_back(first);
  CHECK_THROWS_AS(parse_multiturn(render_multiturn(seven)), Error);
  CHECK_THROWS_AS(parse_multiturn(""), Error);
}
