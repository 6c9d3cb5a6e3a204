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

// Concept-value extraction pipeline.
//
//   IdentifyConcepts -> IdentifyValues -> LinkPairs -> SelectFinal
//
// Linking patterns, tried in this order (pattern_id in parentheses):
//   P1  negation: "no CONCEPT" (P1-no), "<valve> X without <finding>"
//       (P1-without), "CONCEPT is not present" (P1-not-present)
//   P4  table rows: label cell then measured value, with the reference
//       column either skipped or, without discrimination, linked
//       (P4-tab, P4-tab-ref)
//   P2  CONCEPT <separators> VALUE (P2-sep)
//   P3  CONCEPT is/measures/... VALUE (P3-copula), SEVERITY CONCEPT
//       (P3-sev), "CONCEPT, ..., are all SEVERITY" (P3-coord)
// A concept mention takes part in at most one pair and so does a value.

#ifndef ECHOX_EXTRACTOR_H_
#define ECHOX_EXTRACTOR_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "echox/docmodel.h"
#include "echox/lexicon.h"
#include "echox/text.h"

namespace echox {

struct ConceptMention {
  std::string concept_id;
  Span span;
  std::string matched_phrase;  // exact slice of the report text
  SectionKind section_kind = SectionKind::kNarrative;
  TermSource source = TermSource::kTerm;
};

enum class ValueType { kQuantitative, kQualitative };
enum class Comparator { kNone, kGreaterThan, kLessThan };

std::string_view ValueTypeName(ValueType type);

struct ValueMention {
  Span span;
  ValueType kind = ValueType::kQuantitative;
  double value_min = 0;
  double value_max = 0;
  std::string unit;  // normalized: cm, cm2, mm, mmHg, m/s, %; empty if none
  Comparator comparator = Comparator::kNone;
  bool uncertain = false;
  std::string qualitative_label;
  std::string descriptor;  // "reduced" in "mildly reduced"

  bool IsRange() const {
    return kind == ValueType::kQuantitative && value_min != value_max;
  }
};

struct ConceptValuePair {
  std::string concept_id;
  ValueMention value;
  Span concept_span;
  std::string pattern_id;
  bool negated_source = false;
};

struct ExtractionResult {
  std::string report_id;
  std::vector<ConceptValuePair> all_pairs;  // document order
  std::map<std::string, ConceptValuePair> final_pairs;
};

struct ValueScanOptions {
  // Split tokens at letter/digit seams ("open2.2" yields 2.2).
  bool tolerant_tokenization = false;
};

std::vector<ConceptMention> IdentifyConcepts(const EchoReport &report,
                                             const Lexicon &lexicon);

std::vector<ValueMention> IdentifyValues(const EchoReport &report,
                                         const ValueScanOptions &options = {});

std::vector<ConceptValuePair> LinkPairs(
    const EchoReport &report, const std::vector<ConceptMention> &mentions,
    const std::vector<ValueMention> &values, const Lexicon &lexicon);

// Keeps, per concept, the pair whose concept mention starts last.
std::map<std::string, ConceptValuePair> SelectFinal(
    const std::vector<ConceptValuePair> &pairs);

ExtractionResult ExtractReport(const EchoReport &report,
                               const Lexicon &lexicon);

// Extraction output. One header line, then every pair of every result in
// order. start/end give the concept mention span.
std::string ExtractionHeader();
std::string SerializeExtractions(const std::vector<ExtractionResult> &results);

// Reads extraction output back, grouping pairs by report_id. Comparator and
// uncertainty markers are not part of the format and come back unset.
std::map<std::string, std::vector<ConceptValuePair>> ParseExtractions(
    std::string_view text, const std::string &source);

}  // namespace echox

#endif  // ECHOX_EXTRACTOR_H_
