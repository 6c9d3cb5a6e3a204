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

// Property checks shared by the property test and the acceptance binary.
// Each check counts the cases it examined and the ones that broke.

#ifndef ECHOX_TESTS_INVARIANTS_H_
#define ECHOX_TESTS_INVARIANTS_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "echox/corpusgen.h"
#include "echox/evaluator.h"
#include "echox/extractor.h"

namespace echox::testing {

struct PropertyResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void Check(bool ok, const std::string &what) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
};

// Generated reports from every site plus reports of random printable noise.
struct Sample {
  std::vector<EchoReport> reports;
  std::vector<GoldAnnotation> gold;
  std::vector<ExtractionResult> fidelity;
  std::vector<ExtractionResult> robust;
};

inline std::string NoiseText(SplitMix64 &rng) {
  static const std::array<const char *, 24> kPieces = {
      "LVEF",  " ",    "\n",   ":",     ";",      "65",   "%",  "-",
      ">",     "?",    "cm",   "cm\xC2\xB2", "mild", "no", "aortic valve area",
      "ejection fraction", "mitral regurgitation", "is", "(", ")", "0.5",
      "without stenosis",  "are all normal", "\t"};
  std::string text;
  auto n = rng.UniformInt(1, 40);
  for (std::int64_t i = 0; i < n; ++i) {
    text += kPieces[static_cast<std::size_t>(
        rng.UniformInt(0, static_cast<std::int64_t>(kPieces.size()) - 1))];
  }
  return text;
}

inline Sample BuildSample(std::size_t per_site, std::size_t noise,
                          std::uint64_t seed) {
  Sample s;
  Lexicon fid = DefaultLexicon();
  Lexicon rob = MergeRulePack(fid, RobustPack());
  for (const char *site : {"wcm", "mayo", "nw", "mimic"}) {
    for (const GeneratedReport &g :
         GenerateCorpus(BuiltinProfile(site), per_site, seed)) {
      s.reports.push_back(SegmentReport(g.report_id, g.site_tag, g.text));
      s.gold.insert(s.gold.end(), g.gold.begin(), g.gold.end());
    }
  }
  SplitMix64 rng(seed ^ 0xA5A5A5A5ULL);
  for (std::size_t i = 0; i < noise; ++i) {
    s.reports.push_back(
        SegmentReport("noise-" + std::to_string(i), "noise", NoiseText(rng)));
  }
  for (const EchoReport &r : s.reports) {
    s.fidelity.push_back(ExtractReport(r, fid));
    s.robust.push_back(ExtractReport(r, rob));
  }
  return s;
}

inline bool SpanInside(const Span &span, std::size_t size) {
  return span.start < span.end && span.end <= size;
}

// Every concept and value span lies inside its report and the concept span
// covers text the lexicon maps to that concept.
inline PropertyResult CheckSpans(const Sample &s) {
  PropertyResult r;
  for (const auto *results : {&s.fidelity, &s.robust}) {
    for (std::size_t i = 0; i < s.reports.size(); ++i) {
      const std::string &text = s.reports[i].raw_text;
      for (const ConceptValuePair &p : (*results)[i].all_pairs) {
        r.Check(SpanInside(p.concept_span, text.size()) &&
                    SpanInside(p.value.span, text.size()),
                s.reports[i].report_id + " " + p.concept_id);
      }
    }
  }
  return r;
}

// At most one final pair per concept, and it is the last extracted one.
inline PropertyResult CheckOneFinalPair(const Sample &s,
                                        const std::vector<std::string> &ids) {
  PropertyResult r;
  for (const auto *results : {&s.fidelity, &s.robust}) {
    for (const ExtractionResult &res : *results) {
      for (const std::string &id : ids) {
        const ConceptValuePair *last = nullptr;
        for (const ConceptValuePair &p : res.all_pairs) {
          if (p.concept_id != id) continue;
          if (!last || p.concept_span.start >= last->concept_span.start) last = &p;
        }
        auto it = res.final_pairs.find(id);
        bool ok = (last == nullptr) == (it == res.final_pairs.end());
        if (ok && last) {
          ok = it->second.concept_span == last->concept_span &&
               it->second.value.span == last->value.span;
        }
        r.Check(ok, res.report_id + " " + id);
      }
      for (const auto &[id, pair] : res.final_pairs) {
        r.Check(id == pair.concept_id, res.report_id + " key " + id);
      }
    }
  }
  return r;
}

// Every (report, concept) cell gets exactly one of the four outcomes.
inline PropertyResult CheckPartition(const Sample &s,
                                     const std::vector<std::string> &ids) {
  PropertyResult r;
  std::vector<ExtractionResult> generated;
  std::set<std::string> gold_reports;
  for (const GoldAnnotation &g : s.gold) gold_reports.insert(g.report_id);
  for (const auto *results : {&s.fidelity, &s.robust}) {
    std::vector<Outcome> outcomes = ClassifyCorpus(*results, s.gold, ids);
    std::map<std::pair<std::string, std::string>, int> seen;
    for (const Outcome &o : outcomes) ++seen[{o.report_id, o.concept_id}];
    for (const ExtractionResult &res : *results) {
      for (const std::string &id : ids) {
        auto it = seen.find({res.report_id, id});
        r.Check(it != seen.end() && it->second == 1, res.report_id + " " + id);
      }
    }
    r.Check(outcomes.size() == results->size() * ids.size(), "outcome count");
    std::vector<Metrics> m = Aggregate(outcomes, "t", ids);
    for (const Metrics &x : m) {
      r.Check(x.tp + x.fp + x.tn + x.fn == results->size(), "sum " + x.concept_id);
    }
  }
  return r;
}

// F lies between min(P, R) and max(P, R) and never above their mean.
inline PropertyResult CheckHarmonicBounds(std::size_t n, std::uint64_t seed) {
  PropertyResult r;
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    auto tp = static_cast<std::size_t>(rng.UniformInt(0, 300));
    auto fp = static_cast<std::size_t>(rng.UniformInt(0, 300));
    auto fn = static_cast<std::size_t>(rng.UniformInt(0, 300));
    auto tn = static_cast<std::size_t>(rng.UniformInt(0, 300));
    if (rng.Bernoulli(0.1)) tp = 0;
    Metrics m = ComputeMetrics("c", "t", tp, fp, tn, fn);
    double lo = std::min(m.precision, m.recall);
    double hi = std::max(m.precision, m.recall);
    bool ok = m.f_score >= 0 && m.f_score <= 1 && m.f_score >= lo - 1e-12 &&
              m.f_score <= hi + 1e-12 &&
              m.f_score <= (m.precision + m.recall) / 2 + 1e-12;
    r.Check(ok, std::to_string(tp) + "/" + std::to_string(fp) + "/" +
                    std::to_string(fn));
  }
  return r;
}

inline ExpectedValue RandomExpected(SplitMix64 &rng) {
  static const std::array<const char *, 6> kUnits = {"", "cm", "mm", "%", "cm2",
                                                     "mmHg"};
  static const std::array<const char *, 10> kLabels = {
      "no",       "none",     "normal",           "mild",
      "mildly",   "moderate", "mild-to-moderate", "mildly to moderately reduced",
      "severe",   "trace"};
  ExpectedValue e;
  if (rng.Bernoulli(0.4)) {
    e.kind = ValueType::kQualitative;
    e.qualitative_label =
        kLabels[static_cast<std::size_t>(rng.UniformInt(0, kLabels.size() - 1))];
    return e;
  }
  e.kind = ValueType::kQuantitative;
  e.unit = kUnits[static_cast<std::size_t>(rng.UniformInt(0, kUnits.size() - 1))];
  // Small grids so that equal values come up often.
  e.value_min = static_cast<double>(rng.UniformInt(0, 6)) / 2;
  e.value_max = rng.Bernoulli(0.7) ? e.value_min
                                   : e.value_min + static_cast<double>(
                                                       rng.UniformInt(1, 3));
  if (e.unit == "mm") {
    e.value_min *= 10;
    e.value_max *= 10;
  }
  return e;
}

inline PropertyResult CheckCompareSymmetry(std::size_t n, std::uint64_t seed) {
  PropertyResult r;
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    ExpectedValue a = RandomExpected(rng);
    ExpectedValue b = RandomExpected(rng);
    r.Check(CompareValues(a, b) == CompareValues(b, a) && CompareValues(a, a),
            "case " + std::to_string(i));
  }
  return r;
}

}  // namespace echox::testing

#endif  // ECHOX_TESTS_INVARIANTS_H_
