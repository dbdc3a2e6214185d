//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_IO_HPP_
#define FORGE_IO_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

/// Whole file as a string; throws Error(kIoError).
std::string read_file(const std::filesystem::path &path);

/// Lines without trailing '\r'/'\n'.
std::vector<std::string> read_lines(const std::filesystem::path &path);

/// First whitespace-separated token of every non-blank, non-'#' line.
std::vector<std::string> read_smiles_file(const std::filesystem::path &path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path &path,
                       std::string_view contents);

/// RFC-4180-style split of one CSV record (double-quote escaping).
/// Returns false on an unterminated quote.
bool split_csv_line(std::string_view line, std::vector<std::string> &fields);

std::string csv_escape(std::string_view field);

/// `key = value` lines; '#' starts a comment; keys and values are trimmed.
/// Throws Error(kInvalidArgument) with the line number on malformed lines.
std::map<std::string, std::string> parse_key_values(std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace forge

#endif  // FORGE_IO_HPP_
