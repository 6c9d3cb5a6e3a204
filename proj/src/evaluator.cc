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

#include "echox/evaluator.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include "echox/severity.h"

namespace echox {

namespace {

constexpr double kTolerance = 1e-9;

bool Near(double a, double b) { return std::fabs(a - b) <= kTolerance; }

std::optional<double> CentimetreFactor(const std::string &unit) {
  if (unit == "cm") return 1.0;
  if (unit == "mm") return 0.1;
  return std::nullopt;
}

std::string Key(const std::string &report, const std::string &concept_id) {
  return report + "/" + concept_id;
}

OutcomeClass ParseOutcomeClass(std::string_view name, const std::string &source,
                               int line) {
  if (name == "TP") return OutcomeClass::kTP;
  if (name == "FP") return OutcomeClass::kFP;
  if (name == "TN") return OutcomeClass::kTN;
  if (name == "FN") return OutcomeClass::kFN;
  throw ParseError(source, line, "unknown outcome class '" + std::string(name) + "'");
}

std::string Percent(double v) {
  return std::to_string(std::lround(v * 100.0));
}

std::string Fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

ExpectedValue ToExpected(const ValueMention &value) {
  ExpectedValue e;
  e.kind = value.kind;
  e.value_min = value.value_min;
  e.value_max = value.value_max;
  e.unit = value.unit;
  e.qualitative_label = value.qualitative_label;
  return e;
}

std::string GoldHeader() {
  return "report_id\tconcept_id\tpresent\tkind\tvalue_min\tvalue_max\tunit\t"
         "qualitative_label\n";
}

std::vector<GoldAnnotation> ParseGold(std::string_view text,
                                      const std::string &source) {
  std::vector<TsvRecord> records = ParseTsv(text);
  if (records.empty() || records[0].fields.empty() ||
      records[0].fields[0] != "report_id") {
    throw ParseError(source, records.empty() ? 1 : records[0].line,
                     "missing header line");
  }
  std::vector<GoldAnnotation> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const TsvRecord &rec = records[r];
    const std::vector<std::string> &f = rec.fields;
    if (f.size() != 8) {
      throw ParseError(source, rec.line, "expected 8 tab-separated fields");
    }
    GoldAnnotation g;
    g.report_id = f[0];
    g.concept_id = f[1];
    if (g.report_id.empty() || g.concept_id.empty()) {
      throw ParseError(source, rec.line, "empty report_id or concept_id");
    }
    if (f[2] != "0" && f[2] != "1") {
      throw ParseError(source, rec.line, "present must be 0 or 1");
    }
    g.present = f[2] == "1";
    if (!g.present) {
      for (std::size_t i = 3; i < 8; ++i) {
        if (!f[i].empty()) {
          throw ParseError(source, rec.line, "absent row carries a value");
        }
      }
      out.push_back(std::move(g));
      continue;
    }
    ExpectedValue e;
    if (f[3] == "quantitative") {
      auto lo = ParseNumber(f[4]);
      auto hi = ParseNumber(f[5]);
      if (!lo || !hi || *lo > *hi) {
        throw ParseError(source, rec.line, "bad numeric value");
      }
      e.kind = ValueType::kQuantitative;
      e.value_min = *lo;
      e.value_max = *hi;
      e.unit = f[6];
    } else if (f[3] == "qualitative") {
      if (f[7].empty()) {
        throw ParseError(source, rec.line, "qualitative row without label");
      }
      e.kind = ValueType::kQualitative;
      e.qualitative_label = f[7];
    } else {
      throw ParseError(source, rec.line, "unknown kind '" + f[3] + "'");
    }
    g.expected = std::move(e);
    out.push_back(std::move(g));
  }
  return out;
}

std::string SerializeGold(const std::vector<GoldAnnotation> &gold) {
  std::string out = GoldHeader();
  for (const GoldAnnotation &g : gold) {
    out += g.report_id + "\t" + g.concept_id + "\t" + (g.present ? "1" : "0");
    if (g.present && g.expected) {
      const ExpectedValue &e = *g.expected;
      bool quant = e.kind == ValueType::kQuantitative;
      out += "\t" + std::string(ValueTypeName(e.kind)) + "\t" +
             (quant ? FormatNumber(e.value_min) : "") + "\t" +
             (quant ? FormatNumber(e.value_max) : "") + "\t" + e.unit + "\t" +
             e.qualitative_label;
    } else {
      out += "\t\t\t\t\t";
    }
    out += "\n";
  }
  return out;
}

std::vector<std::string> DuplicateGoldKeys(
    const std::vector<GoldAnnotation> &gold) {
  std::set<std::string> seen;
  std::set<std::string> dups;
  for (const GoldAnnotation &g : gold) {
    std::string key = Key(g.report_id, g.concept_id);
    if (!seen.insert(key).second) dups.insert(key);
  }
  return {dups.begin(), dups.end()};
}

bool CompareValues(const ExpectedValue &a, const ExpectedValue &b) {
  if (a.kind != b.kind) return false;
  if (a.kind == ValueType::kQualitative) {
    return CanonicalSeverityLabel(a.qualitative_label) ==
           CanonicalSeverityLabel(b.qualitative_label);
  }
  double scale_a = 1.0;
  double scale_b = 1.0;
  auto fa = CentimetreFactor(a.unit);
  auto fb = CentimetreFactor(b.unit);
  if (fa && fb) {
    scale_a = *fa;
    scale_b = *fb;
  }
  return Near(a.value_min * scale_a, b.value_min * scale_b) &&
         Near(a.value_max * scale_a, b.value_max * scale_b);
}

bool CompareValues(const ValueMention &extracted,
                   const ExpectedValue &expected) {
  return CompareValues(ToExpected(extracted), expected);
}

std::string_view OutcomeClassName(OutcomeClass c) {
  switch (c) {
    case OutcomeClass::kTP:
      return "TP";
    case OutcomeClass::kFP:
      return "FP";
    case OutcomeClass::kTN:
      return "TN";
    case OutcomeClass::kFN:
      return "FN";
  }
  return "TN";
}

std::vector<Outcome> Classify(const ExtractionResult &result,
                              const std::vector<GoldAnnotation> &gold,
                              const std::vector<std::string> &concepts) {
  std::unordered_map<std::string, const GoldAnnotation *> rows;
  for (const GoldAnnotation &g : gold) {
    if (g.report_id != result.report_id) continue;
    if (!rows.emplace(g.concept_id, &g).second) {
      throw ValidationError("duplicate gold rows for " +
                            Key(g.report_id, g.concept_id));
    }
  }
  std::vector<Outcome> out;
  out.reserve(concepts.size());
  for (const std::string &concept_id : concepts) {
    Outcome o{result.report_id, concept_id, OutcomeClass::kTN, "none"};
    auto g = rows.find(concept_id);
    bool present = g != rows.end() && g->second->present;
    auto pair = result.final_pairs.find(concept_id);
    bool extracted = pair != result.final_pairs.end();
    if (present) {
      if (!extracted) {
        o.cls = OutcomeClass::kFN;
        o.reason = "concept-missed";
      } else if (CompareValues(pair->second.value, *g->second->expected)) {
        o.cls = OutcomeClass::kTP;
        o.reason = "match";
      } else {
        o.cls = OutcomeClass::kFN;
        o.reason = "value-mismatch";
      }
    } else if (extracted) {
      o.cls = OutcomeClass::kFP;
      o.reason = "spurious-pair";
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<Outcome> ClassifyCorpus(const std::vector<ExtractionResult> &results,
                                    const std::vector<GoldAnnotation> &gold,
                                    const std::vector<std::string> &concepts) {
  std::vector<std::string> dups = DuplicateGoldKeys(gold);
  if (!dups.empty()) {
    throw ValidationError("duplicate gold rows for " + dups.front());
  }
  std::map<std::string, std::vector<GoldAnnotation>> by_report;
  for (const GoldAnnotation &g : gold) by_report[g.report_id].push_back(g);
  std::set<std::string> known;
  for (const ExtractionResult &r : results) known.insert(r.report_id);
  for (const auto &[report, rows] : by_report) {
    if (!known.count(report)) {
      throw ValidationError("gold references report '" + report +
                            "' with no extraction result");
    }
  }
  static const std::vector<GoldAnnotation> kNone;
  std::vector<Outcome> out;
  out.reserve(results.size() * concepts.size());
  for (const ExtractionResult &r : results) {
    auto it = by_report.find(r.report_id);
    std::vector<Outcome> part =
        Classify(r, it == by_report.end() ? kNone : it->second, concepts);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string SerializeOutcomes(const std::vector<Outcome> &outcomes) {
  std::string out = "report_id\tconcept_id\tclass\treason\n";
  for (const Outcome &o : outcomes) {
    out += o.report_id + "\t" + o.concept_id + "\t" +
           std::string(OutcomeClassName(o.cls)) + "\t" + o.reason + "\n";
  }
  return out;
}

std::vector<Outcome> ParseOutcomes(std::string_view text,
                                   const std::string &source) {
  std::vector<Outcome> out;
  for (const TsvRecord &rec : ParseTsv(text)) {
    const std::vector<std::string> &f = rec.fields;
    if (!f.empty() && f[0] == "report_id") continue;
    if (f.size() != 4) {
      throw ParseError(source, rec.line, "expected 4 tab-separated fields");
    }
    out.push_back(
        Outcome{f[0], f[1], ParseOutcomeClass(f[2], source, rec.line), f[3]});
  }
  return out;
}

Metrics ComputeMetrics(std::string concept_id, std::string corpus_tag,
                       std::size_t tp, std::size_t fp, std::size_t tn,
                       std::size_t fn) {
  Metrics m;
  m.concept_id = std::move(concept_id);
  m.corpus_tag = std::move(corpus_tag);
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  m.absent = tp == 0 && fp == 0 && fn == 0;
  if (tp + fp > 0) {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  } else {
    m.precision_undefined = true;
  }
  if (tp + fn > 0) {
    m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  } else {
    m.recall_undefined = true;
  }
  if (m.precision + m.recall > 0) {
    m.f_score = 2 * m.precision * m.recall / (m.precision + m.recall);
  } else {
    m.f_undefined = true;
  }
  return m;
}

std::vector<Metrics> Aggregate(const std::vector<Outcome> &outcomes,
                               const std::string &corpus_tag,
                               const std::vector<std::string> &concepts) {
  struct Counts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  };
  std::unordered_map<std::string, Counts> counts;
  for (const Outcome &o : outcomes) {
    Counts &c = counts[o.concept_id];
    switch (o.cls) {
      case OutcomeClass::kTP:
        ++c.tp;
        break;
      case OutcomeClass::kFP:
        ++c.fp;
        break;
      case OutcomeClass::kTN:
        ++c.tn;
        break;
      case OutcomeClass::kFN:
        ++c.fn;
        break;
    }
  }
  std::vector<Metrics> out;
  out.reserve(concepts.size());
  for (const std::string &id : concepts) {
    const Counts &c = counts[id];
    out.push_back(ComputeMetrics(id, corpus_tag, c.tp, c.fp, c.tn, c.fn));
  }
  return out;
}

std::string RenderTable(const std::vector<std::vector<Metrics>> &corpora,
                        const std::vector<TableRow> &rows) {
  std::string out = "Concept";
  std::vector<std::unordered_map<std::string, const Metrics *>> lookup;
  for (const std::vector<Metrics> &corpus : corpora) {
    std::string tag = corpus.empty() ? "" : corpus.front().corpus_tag;
    out += "\t" + tag + " Recall(%)\t" + tag + " Precision(%)\t" + tag +
           " F-score";
    auto &map = lookup.emplace_back();
    for (const Metrics &m : corpus) map[m.concept_id] = &m;
  }
  out += "\n";
  for (const TableRow &row : rows) {
    out += row.label;
    for (const auto &map : lookup) {
      auto it = map.find(row.concept_id);
      if (it == map.end() || it->second->absent) {
        out += "\tA\tA\tA";
        continue;
      }
      const Metrics &m = *it->second;
      out += "\t" + Percent(m.recall) + "\t" + Percent(m.precision) + "\t" +
             Fixed2(m.f_score);
    }
    out += "\n";
  }
  return out;
}

std::string SerializeMetrics(const std::vector<std::vector<Metrics>> &corpora) {
  std::string out =
      "corpus_tag\tconcept_id\ttp\tfp\ttn\tfn\tprecision\trecall\tf_score\t"
      "absent\tzero_denominator\n";
  for (const std::vector<Metrics> &corpus : corpora) {
    for (const Metrics &m : corpus) {
      std::string zero;
      auto add = [&zero](bool flag, const char *name) {
        if (!flag) return;
        if (!zero.empty()) zero += ",";
        zero += name;
      };
      add(m.precision_undefined, "precision");
      add(m.recall_undefined, "recall");
      add(m.f_undefined, "f_score");
      out += m.corpus_tag + "\t" + m.concept_id + "\t" + std::to_string(m.tp) +
             "\t" + std::to_string(m.fp) + "\t" + std::to_string(m.tn) + "\t" +
             std::to_string(m.fn) + "\t" + FormatNumber(m.precision) + "\t" +
             FormatNumber(m.recall) + "\t" + FormatNumber(m.f_score) + "\t" +
             (m.absent ? "1" : "0") + "\t" + zero + "\n";
    }
  }
  return out;
}

}  // namespace echox
