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

// Small text, number-formatting and file helpers shared by all modules.

#ifndef ECHOX_TEXT_H_
#define ECHOX_TEXT_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace echox {

// Malformed input. Carries the source name and 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, int line, const std::string &message);

  const std::string &source() const { return source_; }
  int line() const { return line_; }

 private:
  std::string source_;
  int line_;
};

// Input that parses but violates a contract (duplicate ids, unknown concepts).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Half-open character range [start, end) into a report's text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool operator==(const Span &) const = default;
};

bool IsWordChar(char c);
bool IsSpaceOrTab(char c);
char AsciiLower(char c);
std::string ToLower(std::string_view s);
std::string Trim(std::string_view s);

// Lower-cases and collapses internal whitespace runs to one space.
std::string NormalizePhrase(std::string_view s);

bool EqualsIgnoreCase(std::string_view a, std::string_view b);

std::vector<std::string> Split(std::string_view s, char sep);
std::string Join(const std::vector<std::string> &parts, std::string_view sep);

// Shortest decimal text that round-trips the value ("2.4", "65", "0.55").
std::string FormatNumber(double value);
std::optional<double> ParseNumber(std::string_view s);

// Converts \r\n and lone \r to \n.
std::string NormalizeNewlines(std::string_view text);

std::string ReadFile(const std::filesystem::path &path);

// Writes through a sibling temporary file and renames it into place, so an
// existing file is either fully replaced or left untouched.
void WriteFileAtomic(const std::filesystem::path &path,
                     std::string_view contents);

// Splits tab-delimited text into records, skipping blank lines and lines
// starting with '#'. Each record remembers its 1-based line number.
struct TsvRecord {
  int line = 0;
  std::vector<std::string> fields;
};
std::vector<TsvRecord> ParseTsv(std::string_view text);

}  // namespace echox

#endif  // ECHOX_TEXT_H_
