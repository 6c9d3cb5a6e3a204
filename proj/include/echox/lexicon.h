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

// Concept dictionary and rule packs.
//
// A Lexicon holds the target concepts with their lookup phrases plus the
// active RulePack, which carries site-specific extra terms and the switches
// that control matching and linking. Both are immutable values: merging a
// pack returns a new Lexicon.
//
// Lexicon file (tab-delimited, '#' comments):
//   concept_id  canonical_name  value_kind  units  optional  terms  abbreviations
//   [trap_terms  [term_patterns]]
// Rule pack file:
//   ID    pack_id
//   TERM  concept_id  phrase
//   FLAG  name        value
//   SEP   char        (single character, or \t, \n, space)

#ifndef ECHOX_LEXICON_H_
#define ECHOX_LEXICON_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace echox {

enum class ValueKind { kQuantitative, kQualitative, kBoth };

std::string_view ValueKindName(ValueKind kind);
ValueKind ParseValueKind(std::string_view name);  // throws ValidationError

struct ConceptDef {
  std::string concept_id;
  std::string canonical_name;
  std::vector<std::string> terms;          // case-insensitive
  std::vector<std::string> abbreviations;  // case-sensitive
  // Known mis-mappings; only consulted when word boundaries are not enforced.
  std::vector<std::string> trap_terms;
  std::vector<std::string> term_patterns;  // ECMAScript, case-insensitive
  ValueKind value_kind = ValueKind::kQuantitative;
  std::vector<std::string> expected_units;
  bool optional = false;

  bool operator==(const ConceptDef &) const = default;
};

struct RulePack {
  std::string pack_id = "baseline";
  std::map<std::string, std::vector<std::string>> added_terms;
  // First pack-file line that referenced each concept_id in added_terms.
  std::map<std::string, int> term_lines;
  std::set<char> separator_chars = {':', ' ', '\t'};
  bool word_boundary_matching = false;
  bool reference_range_discrimination = false;
  bool negation_without_pattern = false;
  bool cross_line_linking = false;
  std::size_t max_link_window_chars = 60;
  // Extensions beyond the baseline switches.
  bool exclude_tabular = false;
  bool tolerant_tokenization = false;   // "open2.2": letter/digit seam splits
  bool nearest_concept_linking = false; // off: earliest concept in the
                                        // sentence captures the value
  bool strict_qualitative_adjacency = false;
  bool post_negation = false;           // "X is not present"
  bool distribute_coordinated = false;  // "X, Y, and Z are all normal"

  // Flags and separators only; pack_id and term bookkeeping are ignored.
  bool SameBehavior(const RulePack &other) const;
  bool operator==(const RulePack &) const = default;
};

// The uncustomized configuration every lexicon starts with.
RulePack BaselinePack();

// Applies a rule-pack file on top of `base`: flags override, separators and
// terms accumulate. Throws ParseError with the offending line.
RulePack ParseRulePack(std::string_view text, const std::string &source,
                       const RulePack &base);
RulePack LoadRulePack(const std::filesystem::path &path, const RulePack &base);

// Built-in packs shipped in data/: "robust", "wcm", "mayo", "nw", "mimic",
// "exclude_tabular". Throws ValidationError for unknown names.
RulePack BuiltinRulePack(std::string_view name, const RulePack &base);
RulePack RobustPack();

enum class TermSource { kTerm, kAbbreviation, kTrap, kPattern };

struct IndexedPhrase {
  std::string phrase;  // normalized (lower-case) unless an abbreviation
  std::string concept_id;
  TermSource source = TermSource::kTerm;
};

class Lexicon {
 public:
  // Validates and indexes. Throws ValidationError on duplicate ids, empty
  // term lists, or a phrase registered under two concepts.
  static Lexicon Create(std::vector<ConceptDef> concepts, RulePack pack);

  const std::vector<ConceptDef> &concepts() const { return concepts_; }
  const RulePack &active_pack() const { return pack_; }
  const std::vector<IndexedPhrase> &index() const { return index_; }

  const ConceptDef *Find(std::string_view concept_id) const;
  // Concept owning a normalized term phrase (terms and pack terms only).
  const ConceptDef *FindByPhrase(std::string_view phrase) const;

  // Non-optional concepts in dictionary order.
  std::vector<std::string> EvaluatedConceptIds() const;

  bool operator==(const Lexicon &other) const {
    return concepts_ == other.concepts_ && pack_ == other.pack_;
  }

 private:
  Lexicon() = default;

  std::vector<ConceptDef> concepts_;
  RulePack pack_;
  std::vector<IndexedPhrase> index_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::size_t> by_phrase_;
};

Lexicon ParseLexicon(std::string_view text, const std::string &source);
Lexicon LoadLexicon(const std::filesystem::path &path);
Lexicon DefaultLexicon();
std::string SerializeLexicon(const Lexicon &lexicon);

// Returns a new Lexicon with the pack's terms appended to their concepts and
// the pack made active. Throws ValidationError for unknown concept ids.
Lexicon MergeRulePack(const Lexicon &lexicon, const RulePack &pack);

}  // namespace echox

#endif  // ECHOX_LEXICON_H_
