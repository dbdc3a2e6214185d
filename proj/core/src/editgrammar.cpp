//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/editgrammar.hpp"

#include <charconv>
#include <cmath>

#include "forge/error.hpp"
#include "forge/io.hpp"
#include "forge/smeplus.hpp"
#include "forge/smiles.hpp"
#include "forge/tokenizer.hpp"

namespace forge {

namespace {

constexpr std::string_view kModification = "Modification:";
constexpr std::string_view kResult = "Result:";

[[noreturn]] void grammar(const std::string &what) {
  throw Error(ErrorCode::kGrammarError, what);
}

bool starts_with(std::string_view s, std::string_view p) {
  return s.substr(0, p.size()) == p;
}

// `<start_smiles>X<end_smiles>` at the front of `s`; returns X and advances
// `s` past the closing marker.
std::string take_span(std::string_view &s, const char *where) {
  s = trim(s);
  if (!starts_with(s, kStartSmiles))
    grammar(std::string("expected <start_smiles> in ") + where);
  s.remove_prefix(kStartSmiles.size());
  const std::size_t end = s.find(kEndSmiles);
  if (end == std::string_view::npos)
    grammar(std::string("unterminated SMILES span in ") + where);
  const std::string body(trim(s.substr(0, end)));
  s.remove_prefix(end + kEndSmiles.size());
  try {
    parse_smiles(body);
  } catch (const Error &e) {
    throw Error(ErrorCode::kInvalidSmiles,
                std::string("invalid SMILES '") + body + "' in " + where + ": "
                    + e.what());
  }
  if (body.empty())
    throw Error(ErrorCode::kInvalidSmiles, std::string("empty SMILES in ") + where);
  return body;
}

// Parses "(value: x)" / "(activity: x)".
void parse_value(std::string_view s, ModificationBlock &b) {
  s = trim(s);
  if (s.empty())
    return;
  if (s.front() != '(' || s.back() != ')')
    grammar("unexpected text after result: '" + std::string(s) + "'");
  s = trim(s.substr(1, s.size() - 2));
  const std::size_t colon = s.find(':');
  if (colon == std::string_view::npos)
    grammar("score suffix lacks ':'");
  const std::string_view key = trim(s.substr(0, colon));
  if (key == "value")
    b.value_key = ValueKey::kValue;
  else if (key == "activity")
    b.value_key = ValueKey::kActivity;
  else
    grammar("unknown score key '" + std::string(key) + "'");
  const std::string_view num = trim(s.substr(colon + 1));
  double v = 0;
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
  if (num.empty() || ec != std::errc() || ptr != num.data() + num.size()
      || !std::isfinite(v))
    throw Error(ErrorCode::kMalformedValue,
                "malformed score '" + std::string(num) + "'");
  b.value = v;
}

ModificationBlock parse_lines(std::string_view mod, std::string_view res) {
  ModificationBlock b;
  mod = trim(mod);
  res = trim(res);
  if (!starts_with(mod, kModification))
    grammar("expected 'Modification:' line");
  if (!starts_with(res, kResult))
    grammar("expected 'Result:' line");
  mod.remove_prefix(kModification.size());
  res.remove_prefix(kResult.size());

  if (mod.find(">>") == std::string_view::npos)
    grammar("modification lacks '>>'");
  b.frag_src = take_span(mod, "frag_src");
  mod = trim(mod);
  if (!starts_with(mod, ">>"))
    grammar("modification lacks '>>' after frag_src");
  mod.remove_prefix(2);
  b.frag_tgt = take_span(mod, "frag_tgt");
  if (!trim(mod).empty())
    grammar("unexpected text after frag_tgt");
  b.result_smiles = take_span(res, "result");
  parse_value(res, b);
  return b;
}

std::vector<std::string_view> content_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    if (!line.empty())
      lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

}  // namespace

std::string_view value_key_name(ValueKey key) {
  return key == ValueKey::kActivity ? "activity" : "value";
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
  case Verdict::kOk:
    return "ok";
  case Verdict::kMismatch:
    return "mismatch";
  case Verdict::kInapplicable:
    return "inapplicable";
  }
  return "?";
}

ModificationBlock parse_block(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.size() != 2)
    grammar("a block has exactly one Modification and one Result line");
  return parse_lines(lines[0], lines[1]);
}

std::string render_block(const ModificationBlock &b) {
  std::string out;
  out.reserve(96 + b.frag_src.size() + b.frag_tgt.size() + b.result_smiles.size());
  out += kModification;
  out += ' ';
  out += kStartSmiles;
  out += b.frag_src;
  out += kEndSmiles;
  out += " >> ";
  out += kStartSmiles;
  out += b.frag_tgt;
  out += kEndSmiles;
  out += '\n';
  out += kResult;
  out += ' ';
  out += kStartSmiles;
  out += b.result_smiles;
  out += kEndSmiles;
  if (b.value) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, *b.value);
    out += " (";
    out += value_key_name(b.value_key);
    out += ": ";
    out.append(buf, r.ptr);
    out += ')';
  }
  return out;
}

Verdict verify_block(const MolGraph &src, const ModificationBlock &block) {
  try {
    // The site is chosen over canonical atom order, so the verdict does not
    // depend on how src was written.
    const MolGraph canon = parse_smiles(canonical_smiles(src));
    const std::string got = apply_edit_smiles(canon, block.frag_src, block.frag_tgt);
    return got == canonicalize(block.result_smiles) ? Verdict::kOk
                                                    : Verdict::kMismatch;
  } catch (const Error &e) {
    return e.code() == ErrorCode::kNoMatch ? Verdict::kInapplicable
                                           : Verdict::kMismatch;
  }
}

MultiTurnAnswer parse_multiturn(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty() || lines.size() % 2 != 0)
    grammar("a multi-turn answer is a sequence of Modification/Result pairs");
  if (lines.size() / 2 > kMaxTurns)
    grammar("a multi-turn answer has at most 6 blocks");
  MultiTurnAnswer a;
  for (std::size_t i = 0; i < lines.size(); i += 2)
    a.blocks.push_back(parse_lines(lines[i], lines[i + 1]));
  return a;
}

std::string render_multiturn(const MultiTurnAnswer &answer) {
  std::string out;
  for (std::size_t i = 0; i < answer.blocks.size(); ++i) {
    if (i)
      out += '\n';
    out += render_block(answer.blocks[i]);
  }
  return out;
}

std::vector<Verdict> verify_multiturn(const MolGraph &src,
                                      const MultiTurnAnswer &answer) {
  std::vector<Verdict> out;
  MolGraph cur = src;
  for (const ModificationBlock &b: answer.blocks) {
    out.push_back(verify_block(cur, b));
    if (out.back() != Verdict::kOk)
      break;
    cur = parse_smiles(canonicalize(b.result_smiles));
  }
  return out;
}

}  // namespace forge
