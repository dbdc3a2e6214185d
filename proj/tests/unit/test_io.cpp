//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <filesystem>

#include "doctest.h"
#include "forge/error.hpp"
#include "forge/io.hpp"

using namespace forge;

TEST_CASE("csv split handles quotes") {
  std::vector<std::string> f;
  REQUIRE(split_csv_line("a,\"b,c\",\"d\"\"e\",", f));
  REQUIRE(f.size() == 4);
  CHECK(f[1] == "b,c");
  CHECK(f[2] == "d\"e");
  CHECK(f[3].empty());
  CHECK_FALSE(split_csv_line("a,\"b", f));
  CHECK(csv_escape("x,y") == "\"x,y\"");
  CHECK(csv_escape("plain") == "plain");
}

TEST_CASE("key-value config") {
  const auto kv = parse_key_values("# mixture\nrdkit_attr = 0.25\n"
                                   "name = \"stage one\"  # trailing\n\n");
  CHECK(kv.at("rdkit_attr") == "0.25");
  CHECK(kv.at("name") == "stage one");
  CHECK_THROWS_AS(parse_key_values("novalue\n"), Error);
}

TEST_CASE("atomic write replaces the file") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "forge_io_test.txt";
  write_file_atomic(path, "one\n");
  write_file_atomic(path, "two\nthree\r\n");
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1] == "three");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_file(dir / "forge_missing_file.txt"), Error);
}
