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

// Seeded synthetic echo reports with gold annotations.
//
// A report is built from the template library (data/templates.tsv) under a
// site profile (data/profiles.tsv). Each evaluated concept is mentioned with
// its site frequency and then rendered exactly once, as a table row or a
// sentence. Quirks perturb that rendering; the gold row always records the
// intended fact, so a reference-only row or a trap sentence leaves the
// concept absent.
//
// Randomness comes from one SplitMix64 stream per corpus:
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
// uniform01 = (next >> 11) * 2^-53, uniform_int(lo, hi) =
// lo + floor(uniform01 * (hi - lo + 1)), bernoulli(p) = uniform01 < p.

#ifndef ECHOX_CORPUSGEN_H_
#define ECHOX_CORPUSGEN_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "echox/docmodel.h"
#include "echox/evaluator.h"
#include "echox/lexicon.h"

namespace echox {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next();
  double Uniform01();
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);  // inclusive
  bool Bernoulli(double p);

 private:
  std::uint64_t state_;
};

struct QuirkInfo {
  std::string quirk_id;
  std::string description;
  std::string example_sentence;
  std::string paper_quote;  // empty when the behavior has no quoted source
};

const std::vector<QuirkInfo> &QuirkCatalog();
bool IsKnownQuirk(std::string_view quirk_id);

enum class Layout { kTabular, kNarrative };

struct SiteProfile {
  std::string site_tag;
  Layout layout = Layout::kTabular;
  int sentences_per_line = 1;
  bool numbered_impression = false;
  std::map<std::string, double> concept_frequencies;
  // Keyed by quirk_id, or quirk_id@concept_id for a concept-specific rate.
  std::map<std::string, double> quirk_rates;

  // Concept-specific rate if configured, else the quirk's general rate,
  // else 0.
  double QuirkRate(const std::string &quirk_id,
                   const std::string &concept_id) const;
};

// Parses a profiles file holding one or more sites. Throws ParseError for
// malformed lines and ValidationError for unknown quirks or probabilities
// outside [0, 1].
std::map<std::string, SiteProfile> ParseProfiles(std::string_view text,
                                                 const std::string &source);
std::map<std::string, SiteProfile> BuiltinProfiles();
SiteProfile BuiltinProfile(std::string_view site_tag);  // ValidationError

struct QuirkTrial {
  std::string quirk_id;
  std::string concept_id;
  bool applied = false;
};

// Where a present gold fact was written and the text that carries its value.
struct Evidence {
  std::string concept_id;
  Span span;
  std::string value_text;
};

struct GeneratedReport {
  std::string report_id;
  std::string site_tag;
  std::string text;
  std::vector<GoldAnnotation> gold;  // one row per evaluated concept
  std::vector<std::pair<std::string, std::string>> applied_quirks;
  std::vector<QuirkTrial> trials;
  std::vector<Evidence> evidence;
};

class TemplateLibrary;

// Parsed template library; see data/templates.tsv for the record types.
std::shared_ptr<const TemplateLibrary> ParseTemplates(std::string_view text,
                                                      const std::string &source);
std::shared_ptr<const TemplateLibrary> BuiltinTemplates();

// Throws ValidationError for n == 0, for quirks outside the catalog and for
// templates or profiles naming concepts the lexicon lacks.
std::vector<GeneratedReport> GenerateCorpus(const SiteProfile &profile,
                                            std::size_t n, std::uint64_t seed,
                                            const Lexicon &lexicon,
                                            const TemplateLibrary &templates);
std::vector<GeneratedReport> GenerateCorpus(const SiteProfile &profile,
                                            std::size_t n, std::uint64_t seed);

// File contents for a generated corpus. Report files live under reports/.
std::vector<ManifestEntry> CorpusManifest(
    const std::vector<GeneratedReport> &reports);
std::string SerializeCorpusGold(const std::vector<GeneratedReport> &reports);
std::string SerializeQuirks(const std::vector<GeneratedReport> &reports);
std::string SerializeCatalog();

}  // namespace echox

#endif  // ECHOX_CORPUSGEN_H_
