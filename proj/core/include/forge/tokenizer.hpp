//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_TOKENIZER_HPP_
#define FORGE_TOKENIZER_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace forge {

inline constexpr std::string_view kStartSmiles = "<start_smiles>";
inline constexpr std::string_view kEndSmiles = "<end_smiles>";

enum class TokenKind {
  kMarker,
  kAtom,
  kAromaticAtom,
  kTwoLetterElement,
  kBond,
  kBracketAtom,
  kRingDigit,
  kBranchParen,
  kPlainText,
};

std::string_view token_kind_name(TokenKind kind);

struct Token {
  std::string surface;
  TokenKind kind;
  std::size_t offset;  // byte offset of surface in the source

  friend bool operator==(const Token &, const Token &) = default;
};

struct TokenStream {
  std::string source;
  std::vector<Token> tokens;
};

/// Atom-level lexing of a SMILES body (no markers). Equivalent to the
/// alternation
///   \[[^\]]*\] | Cl | Br | [BCNOPSFI*] | [bcnops] | %\d\d | \d | [()] |
///   [-=#:/\\.]
/// tried left to right at each position. Throws Error(kUnknownToken).
TokenStream lex_smiles_span(std::string_view text);

/// Plain text outside marker spans is split on whitespace; spans are lexed
/// with lex_smiles_span and the markers become kMarker tokens.
/// Throws Error(kUnbalancedMarker).
TokenStream tokenize_mixed(std::string_view text);

/// Concatenating the surfaces, with the source's (whitespace-only) gaps
/// restored from the token offsets, reproduces the source exactly.
bool is_lossless(const TokenStream &stream);

/// Surface -> id in first-seen order over the given streams.
std::vector<std::pair<std::string, int>>
build_vocabulary(const std::vector<TokenStream> &streams);

}  // namespace forge

#endif  // FORGE_TOKENIZER_HPP_
