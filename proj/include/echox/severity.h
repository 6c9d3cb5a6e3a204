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

// Closed severity vocabulary for qualitative assessments.
//
// Grades:      no, normal, trace, mild, mild-to-moderate, moderate,
//              moderate-to-severe, severe
// Descriptors: dilated, reduced, thickened
//
// A phrase is an optional grade (adjectival or adverbial form, possibly a
// "X to Y" compound) followed by an optional descriptor. The normalized label
// is the grade when present and the descriptor otherwise, so "mildly to
// moderately reduced" reads as label mild-to-moderate, descriptor reduced.
// Words outside the table are never read as severities.

#ifndef ECHOX_SEVERITY_H_
#define ECHOX_SEVERITY_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace echox {

struct SeverityReading {
  std::string label;
  std::string descriptor;  // empty when the phrase carries none

  bool operator==(const SeverityReading &) const = default;
};

struct SeverityMatch {
  std::size_t length = 0;  // characters consumed from the match position
  SeverityReading reading;
};

// Longest severity phrase starting at `pos`. The caller checks the left word
// boundary; the right boundary is checked here.
std::optional<SeverityMatch> MatchSeverityAt(std::string_view text,
                                             std::size_t pos);

// Reads a whole phrase ("Mildly to moderately reduced", "trace"); nullopt if
// any part is outside the vocabulary.
std::optional<SeverityReading> NormalizeSeverity(std::string_view phrase);

// Normalized label for comparison; unknown phrases fall back to their
// lower-cased, whitespace-collapsed form.
std::string CanonicalSeverityLabel(std::string_view phrase);

bool IsKnownSeverityLabel(std::string_view label);

}  // namespace echox

#endif  // ECHOX_SEVERITY_H_
