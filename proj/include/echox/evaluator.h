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

// Gold-standard comparison and metrics.
//
// Each evaluated (report, concept) cell gets exactly one outcome:
//   gold present, final pair with matching value   TP  match
//   gold present, final pair with another value    FN  value-mismatch
//   gold present, no pair                          FN  concept-missed
//   gold absent,  final pair                       FP  spurious-pair
//   gold absent,  no pair                          TN  none
// Gold is closed-world: a concept without a gold row is absent.

#ifndef ECHOX_EVALUATOR_H_
#define ECHOX_EVALUATOR_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "echox/extractor.h"

namespace echox {

struct ExpectedValue {
  ValueType kind = ValueType::kQuantitative;
  double value_min = 0;
  double value_max = 0;
  std::string unit;
  std::string qualitative_label;
};

ExpectedValue ToExpected(const ValueMention &value);

struct GoldAnnotation {
  std::string report_id;
  std::string concept_id;
  bool present = false;
  std::optional<ExpectedValue> expected;  // set exactly when present
};

// Gold file: header line, then report_id, concept_id, present(0|1), kind,
// value_min, value_max, unit, qualitative_label.
std::string GoldHeader();
std::vector<GoldAnnotation> ParseGold(std::string_view text,
                                      const std::string &source);
std::string SerializeGold(const std::vector<GoldAnnotation> &gold);

// "report_id/concept_id" keys that occur more than once.
std::vector<std::string> DuplicateGoldKeys(
    const std::vector<GoldAnnotation> &gold);

// Endpoints equal within 1e-9, comparator and uncertainty ignored. mm and cm
// are converted when both sides carry one of them; other unit differences
// are not held against a value. Qualitative labels compare after severity
// normalization. A kind mismatch is simply false.
bool CompareValues(const ExpectedValue &a, const ExpectedValue &b);
bool CompareValues(const ValueMention &extracted, const ExpectedValue &expected);

enum class OutcomeClass { kTP, kFP, kTN, kFN };
std::string_view OutcomeClassName(OutcomeClass c);

struct Outcome {
  std::string report_id;
  std::string concept_id;
  OutcomeClass cls = OutcomeClass::kTN;
  std::string reason;
};

// One outcome per concept, in the order given. `gold` may hold rows for
// other reports; they are ignored. Throws ValidationError on duplicate gold
// rows for this report.
std::vector<Outcome> Classify(const ExtractionResult &result,
                              const std::vector<GoldAnnotation> &gold,
                              const std::vector<std::string> &concepts);

// Classifies every result in order. Throws ValidationError when gold names a
// report that has no result, or on duplicate gold rows.
std::vector<Outcome> ClassifyCorpus(const std::vector<ExtractionResult> &results,
                                    const std::vector<GoldAnnotation> &gold,
                                    const std::vector<std::string> &concepts);

std::string SerializeOutcomes(const std::vector<Outcome> &outcomes);
std::vector<Outcome> ParseOutcomes(std::string_view text,
                                   const std::string &source);

struct Metrics {
  std::string concept_id;
  std::string corpus_tag;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double precision = 0;
  double recall = 0;
  double f_score = 0;
  bool absent = false;
  // Which of P, R, F had a zero denominator and were reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f_undefined = false;
};

Metrics ComputeMetrics(std::string concept_id, std::string corpus_tag,
                       std::size_t tp, std::size_t fp, std::size_t tn,
                       std::size_t fn);

// One Metrics per concept, in `concepts` order.
std::vector<Metrics> Aggregate(const std::vector<Outcome> &outcomes,
                               const std::string &corpus_tag,
                               const std::vector<std::string> &concepts);

struct TableRow {
  std::string concept_id;
  std::string label;
};

// Tab-separated table: a header, then one row per concept with Recall(%),
// Precision(%) and F-score for each corpus in the given order. Absent cells
// read "A".
std::string RenderTable(const std::vector<std::vector<Metrics>> &corpora,
                        const std::vector<TableRow> &rows);

std::string SerializeMetrics(const std::vector<std::vector<Metrics>> &corpora);

}  // namespace echox

#endif  // ECHOX_EVALUATOR_H_
