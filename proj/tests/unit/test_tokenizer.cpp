//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <string>
#include <vector>

#include "doctest.h"
#include "forge/error.hpp"
#include "forge/io.hpp"
#include "forge/smiles.hpp"
#include "forge/tokenizer.hpp"

using namespace forge;

namespace {

std::vector<std::pair<TokenKind, std::string>> kinds(const TokenStream &s) {
  std::vector<std::pair<TokenKind, std::string>> out;
  for (const Token &t: s.tokens)
    out.emplace_back(t.kind, t.surface);
  return out;
}

// Surfaces between the first start marker and its end marker.
std::vector<std::string> span_surfaces(const TokenStream &s) {
  std::vector<std::string> out;
  bool inside = false;
  for (const Token &t: s.tokens) {
    if (t.kind == TokenKind::kMarker) {
      if (inside)
        break;
      inside = true;
      continue;
    }
    if (inside)
      out.push_back(t.surface);
  }
  return out;
}

}  // namespace

TEST_CASE("lex examples") {
  using K = TokenKind;
  CHECK(kinds(lex_smiles_span("C"))
        == std::vector<std::pair<K, std::string>> { { K::kAtom, "C" } });
  CHECK(kinds(lex_smiles_span("CCl"))
        == std::vector<std::pair<K, std::string>> {
            { K::kAtom, "C" }, { K::kTwoLetterElement, "Cl" } });
  CHECK(kinds(lex_smiles_span("[3*]C[4*]"))
        == std::vector<std::pair<K, std::string>> {
            { K::kBracketAtom, "[3*]" }, { K::kAtom, "C" },
            { K::kBracketAtom, "[4*]" } });
  const auto t = lex_smiles_span("c1cc%12ccc(Br)c1=O");
  CHECK(t.tokens[2].kind == K::kAromaticAtom);
  CHECK(t.tokens[4].surface == "%12");
  CHECK(t.tokens[4].kind == K::kRingDigit);
  CHECK(is_lossless(t));
}

TEST_CASE("lex errors carry offsets") {
  try {
    lex_smiles_span("CC?");
    FAIL("expected UnknownToken");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kUnknownToken);
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(lex_smiles_span("C[NH"), Error);
}

TEST_CASE("mixed text") {
  using K = TokenKind;
  const auto s = tokenize_mixed("Result: <start_smiles>CC<end_smiles>");
  CHECK(kinds(s)
        == std::vector<std::pair<K, std::string>> {
            { K::kPlainText, "Result:" },
            { K::kMarker, "<start_smiles>" },
            { K::kAtom, "C" },
            { K::kAtom, "C" },
            { K::kMarker, "<end_smiles>" } });
  CHECK(is_lossless(s));
  CHECK(tokenize_mixed("").tokens.empty());
  CHECK(is_lossless(tokenize_mixed("  a  b\n")));
}

TEST_CASE("unbalanced markers") {
  for (const char *bad: { "x <start_smiles>CC", "CC<end_smiles>",
                          "<start_smiles>C<start_smiles>C<end_smiles>" }) {
    CAPTURE(bad);
    try {
      tokenize_mixed(bad);
      FAIL("expected UnbalancedMarker");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kUnbalancedMarker);
    }
  }
}

TEST_CASE("fragment tokens do not depend on the host text") {
  const std::string frag = "c1ccncc1";
  const auto alone = lex_smiles_span(frag);
  std::vector<std::string> expect;
  for (const Token &t: alone.tokens)
    expect.push_back(t.surface);
  for (const char *host: { "Rank: ", "Molecule SMILES: CCO\nList: ",
                           "Cl Br [nH] c1", "" }) {
    const auto s = tokenize_mixed(std::string(host) + "<start_smiles>" + frag
                                  + "<end_smiles> tail");
    CHECK(span_surfaces(s) == expect);
  }
}

TEST_CASE("lexer and parser accept the same fixture corpus") {
  for (const auto &s: read_smiles_file(FORGE_TEST_DATA_DIR "/parser_200.smi")) {
    CAPTURE(s);
    CHECK_NOTHROW(parse_smiles(s));
    const auto t = lex_smiles_span(s);
    CHECK(is_lossless(t));
  }
}

TEST_CASE("vocabulary ids follow first-seen order") {
  const auto v = build_vocabulary(
      { lex_smiles_span("CCO"), lex_smiles_span("c1ccccc1O") });
  REQUIRE(v.size() == 4);
  CHECK(v[0] == std::pair<std::string, int> { "C", 0 });
  CHECK(v[1] == std::pair<std::string, int> { "O", 1 });
  CHECK(v[2] == std::pair<std::string, int> { "c", 2 });
  CHECK(v[3] == std::pair<std::string, int> { "1", 3 });
}
