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

#include "echox/docmodel.h"

#include <array>
#include <cctype>
#include <regex>
#include <unordered_set>

namespace echox {

namespace {

constexpr std::array<std::string_view, 16> kClinicalWords = {
    "ventric", "valve",    "atri",     "aort",  "mitral",    "tricusp",
    "ejection", "regurg",  "stenosis", "gradient", "septum", "pressure",
    "lvef",    "dimension", "velocity", "wall"};

bool HasClinicalWord(std::string_view s) {
  std::string low = ToLower(s);
  for (std::string_view w : kClinicalWords) {
    if (low.find(w) != std::string::npos) return true;
  }
  return false;
}

bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }

bool IsMetadataLine(std::string_view line) {
  static const std::regex kKeyValue(R"(^\s*[A-Za-z][A-Za-z .#/]{0,30}:\s*\S.*$)");
  std::string s(line);
  if (!std::regex_match(s, kKeyValue)) return false;
  return !HasClinicalWord(s);
}

// Bare header such as "Findings:" or "MEASUREMENTS".
bool IsHeaderLike(std::string_view line) {
  static const std::regex kHeader(R"(^\s*[A-Za-z][A-Za-z ]{0,40}:?\s*$)");
  return std::regex_match(std::string(line), kHeader);
}

std::vector<std::string_view> Words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && IsSpaceOrTab(s[i])) ++i;
    std::size_t b = i;
    while (i < s.size() && !IsSpaceOrTab(s[i])) ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

bool HasColumnGap(std::string_view t) {
  // t is trimmed; a tab or two spaces between content means two columns.
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i] == '\t') return true;
    if (t[i] == ' ' && t[i + 1] == ' ') return true;
  }
  return false;
}

bool StartsValue(std::string_view w) {
  std::size_t i = 0;
  while (i < w.size() && (w[i] == '<' || w[i] == '>' || w[i] == '?')) ++i;
  if (i == w.size()) return i > 0;  // a detached comparator, as in "> 2.40"
  return IsDigit(w[i]);
}

}  // namespace

std::string_view SectionKindName(SectionKind kind) {
  switch (kind) {
    case SectionKind::kMetadata:
      return "metadata";
    case SectionKind::kTabular:
      return "tabular";
    case SectionKind::kNarrative:
      return "narrative";
    case SectionKind::kImpression:
      return "impression";
  }
  return "narrative";
}

bool IsImpressionHeader(std::string_view line) {
  static const std::regex kImpression(
      R"(^\s*(final\s+)?(impressions?|conclusions?|summary)\s*(:.*)?$)",
      std::regex::icase);
  return std::regex_match(std::string(line), kImpression);
}

bool IsTabularLine(std::string_view line) {
  std::string t = Trim(line);
  if (t.empty()) return false;
  bool has_digit = false;
  for (char c : t) has_digit |= IsDigit(c);
  if (HasColumnGap(t)) return true;
  if (!has_digit || t.back() == '.') return false;
  // Title-Case label of at least two words, then a value.
  std::vector<std::string_view> words = Words(t);
  std::size_t label_words = 0;
  for (std::string_view w : words) {
    if (StartsValue(w)) break;
    if (!IsUpper(w[0])) return false;
    for (char c : w) {
      if (c == '(' || c == ')' || c == ',' || c == ';') return false;
    }
    ++label_words;
  }
  return label_words >= 2 && label_words < words.size();
}

const Section *EchoReport::SectionAt(std::size_t offset) const {
  for (const Section &s : sections) {
    if (offset >= s.start_offset && offset < s.end_offset) return &s;
    if (s.start_offset > offset) break;
  }
  return nullptr;
}

EchoReport SegmentReport(std::string report_id, std::string site_tag,
                         std::string_view raw_text) {
  EchoReport report;
  report.report_id = std::move(report_id);
  report.site_tag = std::move(site_tag);
  report.raw_text = NormalizeNewlines(raw_text);
  const std::string &text = report.raw_text;

  bool in_impression = false;
  bool leading = true;  // still inside the leading metadata run
  bool open = false;  // last section can still grow

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line = std::string_view(text).substr(pos, eol - pos);

    if (Trim(line).empty()) {
      open = false;
    } else {
      SectionKind kind;
      if (IsImpressionHeader(line)) {
        in_impression = true;
        kind = SectionKind::kImpression;
      } else if (in_impression && !IsHeaderLike(line)) {
        kind = SectionKind::kImpression;
      } else {
        in_impression = false;
        if (leading && IsMetadataLine(line)) {
          kind = SectionKind::kMetadata;
        } else if (IsTabularLine(line)) {
          kind = SectionKind::kTabular;
        } else {
          kind = SectionKind::kNarrative;
        }
      }
      if (kind != SectionKind::kMetadata) leading = false;

      if (!open || report.sections.back().kind != kind) {
        report.sections.push_back(Section{kind, pos, eol, {}});
        open = true;
      }
      Section &section = report.sections.back();
      section.end_offset = eol;
      section.lines.push_back(Line{std::string(line), pos});
    }
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return report;
}

std::vector<ManifestEntry> ParseManifest(std::string_view text,
                                         const std::string &source) {
  std::vector<ManifestEntry> out;
  std::unordered_set<std::string> seen;
  for (const TsvRecord &rec : ParseTsv(text)) {
    if (rec.fields.size() != 3) {
      throw ParseError(source, rec.line,
                       "expected report_id, site_tag, relative_path");
    }
    ManifestEntry e{Trim(rec.fields[0]), Trim(rec.fields[1]),
                    Trim(rec.fields[2])};
    if (e.report_id.empty() || e.relative_path.empty()) {
      throw ParseError(source, rec.line, "empty report_id or path");
    }
    if (!seen.insert(e.report_id).second) {
      throw ParseError(source, rec.line,
                       "duplicate report_id '" + e.report_id + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string SerializeManifest(const std::vector<ManifestEntry> &entries) {
  std::string out = "# report_id\tsite_tag\trelative_path\n";
  for (const ManifestEntry &e : entries) {
    out += e.report_id + "\t" + e.site_tag + "\t" + e.relative_path + "\n";
  }
  return out;
}

std::vector<EchoReport> LoadCorpus(const std::filesystem::path &corpus_dir) {
  std::filesystem::path manifest = corpus_dir / "manifest.tsv";
  std::vector<ManifestEntry> entries =
      ParseManifest(ReadFile(manifest), manifest.string());
  std::vector<EchoReport> reports;
  reports.reserve(entries.size());
  for (const ManifestEntry &e : entries) {
    reports.push_back(SegmentReport(e.report_id, e.site_tag,
                                    ReadFile(corpus_dir / e.relative_path)));
  }
  return reports;
}

}  // namespace echox
