//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/tokenizer.hpp"

#include <cctype>
#include <unordered_map>

#include "forge/error.hpp"

namespace forge {

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
  case TokenKind::kMarker:
    return "marker";
  case TokenKind::kAtom:
    return "atom";
  case TokenKind::kAromaticAtom:
    return "aromatic_atom";
  case TokenKind::kTwoLetterElement:
    return "two_letter_element";
  case TokenKind::kBond:
    return "bond";
  case TokenKind::kBracketAtom:
    return "bracket_atom";
  case TokenKind::kRingDigit:
    return "ring_digit";
  case TokenKind::kBranchParen:
    return "branch_paren";
  case TokenKind::kPlainText:
    return "plain_text";
  }
  return "unknown";
}

namespace {

bool is_digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

// Lexes text[begin, end) and appends tokens with offsets relative to the
// full source.
void lex_into(std::string_view text, std::size_t begin, std::size_t end,
              std::vector<Token> &out) {
  std::size_t i = begin;
  auto emit = [&](std::size_t len, TokenKind kind) {
    out.push_back({ std::string(text.substr(i, len)), kind, i });
    i += len;
  };
  while (i < end) {
    const char c = text[i];
    const char next = i + 1 < end ? text[i + 1] : '\0';
    if (c == '[') {
      const std::size_t close = text.find(']', i);
      if (close == std::string_view::npos || close >= end)
        throw Error(ErrorCode::kUnknownToken, "unterminated bracket atom", i);
      emit(close - i + 1, TokenKind::kBracketAtom);
    } else if ((c == 'C' && next == 'l') || (c == 'B' && next == 'r')) {
      emit(2, TokenKind::kTwoLetterElement);
    } else if (std::string_view("BCNOPSFI*").find(c) != std::string_view::npos) {
      emit(1, TokenKind::kAtom);
    } else if (std::string_view("bcnops").find(c) != std::string_view::npos) {
      emit(1, TokenKind::kAromaticAtom);
    } else if (c == '%') {
      if (i + 2 >= end || !is_digit(text[i + 1]) || !is_digit(text[i + 2]))
        throw Error(ErrorCode::kUnknownToken, "malformed '%nn' ring bond", i);
      emit(3, TokenKind::kRingDigit);
    } else if (is_digit(c)) {
      emit(1, TokenKind::kRingDigit);
    } else if (c == '(' || c == ')') {
      emit(1, TokenKind::kBranchParen);
    } else if (std::string_view("-=#:/\\.").find(c) != std::string_view::npos) {
      emit(1, TokenKind::kBond);
    } else {
      throw Error(ErrorCode::kUnknownToken,
                  std::string("unexpected character '") + c + "'", i);
    }
  }
}

void split_plain(std::string_view text, std::size_t begin, std::size_t end,
                 std::vector<Token> &out) {
  std::size_t i = begin;
  while (i < end) {
    while (i < end && is_space(text[i]))
      ++i;
    const std::size_t start = i;
    while (i < end && !is_space(text[i]))
      ++i;
    if (i > start)
      out.push_back({ std::string(text.substr(start, i - start)),
                      TokenKind::kPlainText, start });
  }
}

}  // namespace

TokenStream lex_smiles_span(std::string_view text) {
  TokenStream s;
  s.source = std::string(text);
  lex_into(text, 0, text.size(), s.tokens);
  return s;
}

TokenStream tokenize_mixed(std::string_view text) {
  TokenStream s;
  s.source = std::string(text);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = text.find(kStartSmiles, pos);
    const std::size_t stray = text.find(kEndSmiles, pos);
    if (stray != std::string_view::npos
        && (start == std::string_view::npos || stray < start))
      throw Error(ErrorCode::kUnbalancedMarker,
                  "end marker without a start marker", stray);
    if (start == std::string_view::npos) {
      split_plain(text, pos, text.size(), s.tokens);
      break;
    }
    split_plain(text, pos, start, s.tokens);
    s.tokens.push_back({ std::string(kStartSmiles), TokenKind::kMarker, start });
    const std::size_t body = start + kStartSmiles.size();
    const std::size_t close = text.find(kEndSmiles, body);
    if (close == std::string_view::npos)
      throw Error(ErrorCode::kUnbalancedMarker,
                  "start marker without an end marker", start);
    const std::size_t nested = text.find(kStartSmiles, body);
    if (nested != std::string_view::npos && nested < close)
      throw Error(ErrorCode::kUnbalancedMarker, "nested start marker", nested);
    lex_into(text, body, close, s.tokens);
    s.tokens.push_back({ std::string(kEndSmiles), TokenKind::kMarker, close });
    pos = close + kEndSmiles.size();
  }
  return s;
}

bool is_lossless(const TokenStream &stream) {
  std::string rebuilt;
  std::size_t pos = 0;
  for (const Token &t: stream.tokens) {
    if (t.surface.empty() || t.offset < pos)
      return false;
    for (std::size_t i = pos; i < t.offset; ++i) {
      if (!is_space(stream.source[i]))
        return false;
      rebuilt += stream.source[i];
    }
    rebuilt += t.surface;
    pos = t.offset + t.surface.size();
  }
  for (std::size_t i = pos; i < stream.source.size(); ++i) {
    if (!is_space(stream.source[i]))
      return false;
    rebuilt += stream.source[i];
  }
  return rebuilt == stream.source;
}

std::vector<std::pair<std::string, int>>
build_vocabulary(const std::vector<TokenStream> &streams) {
  std::vector<std::pair<std::string, int>> vocab;
  std::unordered_map<std::string, int> ids;
  for (const TokenStream &s: streams) {
    for (const Token &t: s.tokens) {
      if (ids.emplace(t.surface, static_cast<int>(vocab.size())).second)
        vocab.emplace_back(t.surface, static_cast<int>(vocab.size()));
    }
  }
  return vocab;
}

}  // namespace forge
