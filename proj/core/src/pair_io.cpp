//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/pair_io.hpp"

#include <charconv>

#include "forge/error.hpp"
#include "forge/io.hpp"
#include "json.hpp"

namespace forge {

namespace {

using nlohmann::json;

constexpr std::string_view kActivity = "activity";

json base(const std::string &src, const std::string &tgt,
          const std::string &frag_src, const std::string &frag_tgt,
          std::string_view property, double score_src, double score_tgt,
          const EnvironmentKey &env, bool from_global) {
  json j;
  j["src"] = src;
  j["tgt"] = tgt;
  j["frag_src"] = frag_src;
  j["frag_tgt"] = frag_tgt;
  j["property"] = property;
  j["score_src"] = score_src;
  j["score_tgt"] = score_tgt;
  j["env_key_hex"] = to_hex(env);
  j["env_radius"] = env.radius;
  j["from_global"] = from_global;
  return j;
}

json parse_object(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw Error(ErrorCode::kMalformedValue, "pair line is not a JSON object");
  return j;
}

template <typename T>
T field(const json &j, const char *name) {
  auto it = j.find(name);
  if (it == j.end())
    throw Error(ErrorCode::kMalformedValue,
                std::string("pair line lacks '") + name + "'");
  try {
    return it->get<T>();
  } catch (const json::exception &) {
    throw Error(ErrorCode::kMalformedValue,
                std::string("pair field '") + name + "' has the wrong type");
  }
}

EnvironmentKey env_of(const json &j) {
  const std::string hex = field<std::string>(j, "env_key_hex");
  EnvironmentKey key;
  key.radius = j.contains("env_radius") ? field<int>(j, "env_radius") : 2;
  const auto [ptr, ec] =
      std::from_chars(hex.data(), hex.data() + hex.size(), key.digest, 16);
  if (ec != std::errc() || ptr != hex.data() + hex.size() || hex.size() != 16)
    throw Error(ErrorCode::kMalformedValue, "bad env_key_hex '" + hex + "'");
  return key;
}

template <typename T, typename Parse>
std::vector<T> read_lines_as(const std::filesystem::path &path, Parse parse) {
  std::vector<T> out;
  std::size_t line_no = 0;
  for (const std::string &line: read_lines(path)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    try {
      out.push_back(parse(line));
    } catch (const Error &e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(line_no)
                                + ": " + e.what(),
                  line_no);
    }
  }
  return out;
}

}  // namespace

std::string to_json_line(const EditPair &p) {
  return base(p.src_smiles, p.tgt_smiles, p.frag_src, p.frag_tgt,
              property_name(p.property), p.score_src, p.score_tgt, p.env_key,
              p.from_global)
      .dump();
}

std::string to_json_line(const MmpPair &p) {
  json j = base(p.src_smiles, p.tgt_smiles, p.frag_src, p.frag_tgt, kActivity,
                p.score_src, p.score_tgt, p.env_key, false);
  j["target_id"] = p.target_id;
  j["target_desc"] = p.target_desc;
  j["pchembl_src"] = p.pchembl_src;
  j["pchembl_tgt"] = p.pchembl_tgt;
  return j.dump();
}

EditPair parse_edit_pair(std::string_view line) {
  const json j = parse_object(line);
  EditPair p;
  p.src_smiles = field<std::string>(j, "src");
  p.tgt_smiles = field<std::string>(j, "tgt");
  p.frag_src = field<std::string>(j, "frag_src");
  p.frag_tgt = field<std::string>(j, "frag_tgt");
  const std::string prop = field<std::string>(j, "property");
  const auto id = property_from_name(prop);
  if (!id)
    throw Error(ErrorCode::kMalformedValue,
                prop == kActivity ? "activity pairs are read with read_mmp_pairs"
                                  : "unknown property '" + prop + "'");
  p.property = *id;
  p.score_src = field<double>(j, "score_src");
  p.score_tgt = field<double>(j, "score_tgt");
  p.env_key = env_of(j);
  p.from_global = j.contains("from_global") && field<bool>(j, "from_global");
  return p;
}

MmpPair parse_mmp_pair(std::string_view line) {
  const json j = parse_object(line);
  MmpPair p;
  p.src_smiles = field<std::string>(j, "src");
  p.tgt_smiles = field<std::string>(j, "tgt");
  p.frag_src = field<std::string>(j, "frag_src");
  p.frag_tgt = field<std::string>(j, "frag_tgt");
  p.score_src = field<double>(j, "score_src");
  p.score_tgt = field<double>(j, "score_tgt");
  p.env_key = env_of(j);
  p.target_id = field<std::string>(j, "target_id");
  p.target_desc = j.contains("target_desc") ? field<std::string>(j, "target_desc")
                                            : std::string();
  p.pchembl_src = field<double>(j, "pchembl_src");
  p.pchembl_tgt = field<double>(j, "pchembl_tgt");
  return p;
}

bool is_mmp_line(std::string_view line) {
  const json j = json::parse(line, nullptr, false);
  return j.is_object() && j.contains("target_id");
}

std::string to_jsonl(std::span<const EditPair> pairs) {
  std::string out;
  for (const EditPair &p: pairs)
    out += to_json_line(p) + '\n';
  return out;
}

std::string to_jsonl(std::span<const MmpPair> pairs) {
  std::string out;
  for (const MmpPair &p: pairs)
    out += to_json_line(p) + '\n';
  return out;
}

std::vector<EditPair> read_edit_pairs(const std::filesystem::path &path) {
  return read_lines_as<EditPair>(path, parse_edit_pair);
}

std::vector<MmpPair> read_mmp_pairs(const std::filesystem::path &path) {
  return read_lines_as<MmpPair>(path, parse_mmp_pair);
}

EditPair as_edit_pair(const MmpPair &p) {
  EditPair e;
  e.src_smiles = p.src_smiles;
  e.tgt_smiles = p.tgt_smiles;
  e.frag_src = p.frag_src;
  e.frag_tgt = p.frag_tgt;
  e.score_src = p.score_src;
  e.score_tgt = p.score_tgt;
  e.env_key = p.env_key;
  return e;
}

}  // namespace forge
