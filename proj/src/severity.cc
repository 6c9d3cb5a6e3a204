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

#include "echox/severity.h"

#include <array>
#include <utility>

#include "echox/text.h"

namespace echox {

namespace {

struct Word {
  std::string_view surface;
  std::string_view grade;
};

// Ordered so that longer surfaces sharing a prefix come first.
constexpr std::array<Word, 12> kGradeWords = {{
    {"moderately", "moderate"},
    {"moderate", "moderate"},
    {"severely", "severe"},
    {"severe", "severe"},
    {"mildly", "mild"},
    {"mild", "mild"},
    {"trivial", "trace"},
    {"trace", "trace"},
    {"normal", "normal"},
    {"absent", "no"},
    {"none", "no"},
    {"no", "no"},
}};

constexpr std::array<std::string_view, 3> kDescriptors = {
    "dilated", "reduced", "thickened"};

constexpr std::array<std::string_view, 11> kLabels = {
    "no",       "normal",   "trace",              "mild",
    "mild-to-moderate",     "moderate",           "moderate-to-severe",
    "severe",   "dilated",  "reduced",            "thickened"};

bool WordEndsAt(std::string_view text, std::size_t end) {
  return end >= text.size() || !IsWordChar(text[end]);
}

// Case-insensitive `word` at `pos` followed by a word boundary.
bool WordAt(std::string_view text, std::size_t pos, std::string_view word) {
  if (pos + word.size() > text.size()) return false;
  if (!EqualsIgnoreCase(text.substr(pos, word.size()), word)) return false;
  return WordEndsAt(text, pos + word.size());
}

std::optional<std::pair<std::size_t, std::string_view>> GradeAt(
    std::string_view text, std::size_t pos) {
  for (const Word &w : kGradeWords) {
    if (WordAt(text, pos, w.surface)) {
      return std::make_pair(w.surface.size(), w.grade);
    }
  }
  return std::nullopt;
}

std::optional<std::pair<std::size_t, std::string_view>> DescriptorAt(
    std::string_view text, std::size_t pos) {
  for (std::string_view d : kDescriptors) {
    if (WordAt(text, pos, d)) return std::make_pair(d.size(), d);
  }
  return std::nullopt;
}

std::size_t SkipSpaces(std::string_view text, std::size_t pos) {
  while (pos < text.size() && IsSpaceOrTab(text[pos])) ++pos;
  return pos;
}

std::optional<std::string> Compound(std::string_view low,
                                    std::string_view high) {
  if (low == "mild" && high == "moderate") return "mild-to-moderate";
  if (low == "moderate" && high == "severe") return "moderate-to-severe";
  return std::nullopt;
}

}  // namespace

std::optional<SeverityMatch> MatchSeverityAt(std::string_view text,
                                             std::size_t pos) {
  std::size_t cursor = pos;
  std::string label;
  if (auto grade = GradeAt(text, cursor)) {
    label = std::string(grade->second);
    cursor += grade->first;
    // "mild to moderate", "mildly-to-moderately", "mild-moderate"
    std::size_t joint = cursor;
    std::size_t after = std::string_view::npos;
    if (joint < text.size() && text[joint] == '-') {
      if (WordAt(text, joint + 1, "to") && joint + 3 < text.size() &&
          text[joint + 3] == '-') {
        after = joint + 4;
      } else {
        after = joint + 1;
      }
    } else {
      std::size_t s = SkipSpaces(text, joint);
      if (s > joint && WordAt(text, s, "to")) after = SkipSpaces(text, s + 2);
    }
    if (after != std::string_view::npos) {
      if (auto high = GradeAt(text, after)) {
        if (auto c = Compound(label, high->second)) {
          label = *c;
          cursor = after + high->first;
        }
      }
    }
  }
  std::string descriptor;
  std::size_t d_pos = label.empty() ? cursor : SkipSpaces(text, cursor);
  if (label.empty() || d_pos > cursor) {
    if (auto d = DescriptorAt(text, d_pos)) {
      descriptor = std::string(d->second);
      cursor = d_pos + d->first;
    }
  }
  if (label.empty() && descriptor.empty()) return std::nullopt;
  if (label.empty()) label = descriptor;
  if (label == "no" || label == "normal") {
    // "no dilated" is not a phrase; keep the bare grade.
    if (!descriptor.empty() && label != descriptor) {
      cursor = pos + GradeAt(text, pos)->first;
      descriptor.clear();
    }
  }
  return SeverityMatch{cursor - pos, {label, descriptor}};
}

std::optional<SeverityReading> NormalizeSeverity(std::string_view phrase) {
  std::string t = Trim(phrase);
  auto m = MatchSeverityAt(t, 0);
  if (!m || m->length != t.size()) return std::nullopt;
  return m->reading;
}

std::string CanonicalSeverityLabel(std::string_view phrase) {
  if (auto r = NormalizeSeverity(phrase)) return r->label;
  return NormalizePhrase(phrase);
}

bool IsKnownSeverityLabel(std::string_view label) {
  for (std::string_view l : kLabels) {
    if (l == label) return true;
  }
  return false;
}

}  // namespace echox
