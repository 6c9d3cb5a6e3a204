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

// Section-typed report model.
//
// Line classification, in order:
//   * a header line matching impression/conclusion/summary switches to
//     impression mode; every following non-blank line is impression until a
//     different header ("Findings:") appears
//   * tabular: two or more columns split by runs of >= 2 spaces or a tab, or
//     a Title-Case label of >= 2 words followed directly by a number
//   * metadata: the leading run of "Key: value" lines with no clinical words
//   * narrative: everything else
// Blank lines end sections. Offsets index the newline-normalized text.

#ifndef ECHOX_DOCMODEL_H_
#define ECHOX_DOCMODEL_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "echox/text.h"

namespace echox {

enum class SectionKind { kMetadata, kTabular, kNarrative, kImpression };

std::string_view SectionKindName(SectionKind kind);

struct Line {
  std::string text;
  std::size_t start = 0;
};

struct Section {
  SectionKind kind = SectionKind::kNarrative;
  std::size_t start_offset = 0;
  std::size_t end_offset = 0;
  std::vector<Line> lines;
};

struct EchoReport {
  std::string report_id;
  std::string site_tag;
  std::string raw_text;  // newline-normalized
  std::vector<Section> sections;

  // Section containing `offset`, or nullptr for blank regions.
  const Section *SectionAt(std::size_t offset) const;
  std::string_view Slice(Span span) const {
    return std::string_view(raw_text).substr(span.start, span.size());
  }
};

EchoReport SegmentReport(std::string report_id, std::string site_tag,
                         std::string_view raw_text);

// Line-level classifiers, exposed for tests.
bool IsTabularLine(std::string_view line);
bool IsImpressionHeader(std::string_view line);

struct ManifestEntry {
  std::string report_id;
  std::string site_tag;
  std::string relative_path;
};

// report_id<TAB>site_tag<TAB>relative_path, '#' comments allowed.
std::vector<ManifestEntry> ParseManifest(std::string_view text,
                                         const std::string &source);
std::string SerializeManifest(const std::vector<ManifestEntry> &entries);

// Reads the manifest in `corpus_dir` and segments each listed report.
std::vector<EchoReport> LoadCorpus(const std::filesystem::path &corpus_dir);

}  // namespace echox

#endif  // ECHOX_DOCMODEL_H_
