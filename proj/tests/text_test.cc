// Copyright 2026 The EchoX Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "echox/text.h"

namespace echox {
namespace {

TEST_CASE("numbers print in shortest round-trip form") {
  CHECK(FormatNumber(65) == "65");
  CHECK(FormatNumber(2.4) == "2.4");
  CHECK(FormatNumber(0.55) == "0.55");
  CHECK(FormatNumber(0.0) == "0");
  CHECK(FormatNumber(-0.0) == "0");
}

TEST_CASE("number parsing accepts only a whole numeric token") {
  CHECK(ParseNumber("2.40") == doctest::Approx(2.4));
  CHECK(ParseNumber(" 12 ") == doctest::Approx(12));
  CHECK_FALSE(ParseNumber("").has_value());
  CHECK_FALSE(ParseNumber("12mm").has_value());
  CHECK_FALSE(ParseNumber("abc").has_value());
}

TEST_CASE("string helpers") {
  CHECK(ToLower("LVEF") == "lvef");
  CHECK(Trim("  a b \t") == "a b");
  CHECK(Split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(Join({"x", "y"}, "-") == "x-y");
  CHECK(EqualsIgnoreCase("Mitral", "mITRAL"));
  CHECK_FALSE(EqualsIgnoreCase("Mitral", "Mitra"));
  CHECK(NormalizeNewlines("a\r\nb\rc") == "a\nb\nc");
}

TEST_CASE("TSV parsing keeps line numbers and skips comments") {
  auto rows = ParseTsv("# header\n\na\tb\n  \nc\td\te\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].line == 3);
  CHECK(rows[0].fields == std::vector<std::string>{"a", "b"});
  CHECK(rows[1].line == 5);
  CHECK(rows[1].fields.size() == 3);
}

TEST_CASE("ParseError names file and line") {
  ParseError e("gold.tsv", 7, "bad row");
  CHECK(std::string(e.what()).find("gold.tsv") != std::string::npos);
  CHECK(std::string(e.what()).find("7") != std::string::npos);
  CHECK(e.line() == 7);
  CHECK(e.source() == "gold.tsv");
}

TEST_CASE("atomic writes create parents and replace content") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "echox_text_test";
  fs::remove_all(dir);
  fs::path file = dir / "nested" / "out.txt";
  WriteFileAtomic(file, "first");
  CHECK(ReadFile(file) == "first");
  WriteFileAtomic(file, "second");
  CHECK(ReadFile(file) == "second");
  int entries = 0;
  for (auto &unused : fs::directory_iterator(dir / "nested")) {
    (void)unused;
    ++entries;
  }
  CHECK(entries == 1);
  CHECK_THROWS_AS(ReadFile(dir / "missing.txt"), IoError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace echox
