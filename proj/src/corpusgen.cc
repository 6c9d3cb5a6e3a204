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

#include "echox/corpusgen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "echox/builtin_data.h"

namespace echox {

// ---- random stream -----------------------------------------------------------

std::uint64_t SplitMix64::Next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::Uniform01() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

std::int64_t SplitMix64::UniformInt(std::int64_t lo, std::int64_t hi) {
  double span = static_cast<double>(hi - lo + 1);
  auto offset = static_cast<std::int64_t>(std::floor(Uniform01() * span));
  return lo + std::min<std::int64_t>(offset, hi - lo);
}

bool SplitMix64::Bernoulli(double p) { return Uniform01() < p; }

// ---- quirk catalog -------------------------------------------------------------

const std::vector<QuirkInfo> &QuirkCatalog() {
  static const std::vector<QuirkInfo> kCatalog = {
      {"reference_range_tabular",
       "Table row gives the measured value followed by the reference range.",
       "Aortic Valve Area 1.1 > 2.4 cm\xC2\xB2",
       "Aortic Valve Area 1.1 > 2.4 cm\xC2\xB2"},
      {"reference_only_row",
       "Table row holds only the reference range; nothing was measured.",
       "Aortic Valve Area > 2.40 cm\xC2\xB2",
       "Aortic Valve Area > 2.40 cm\xC2\xB2"},
      {"semicolon_separator",
       "A semicolon stands where a colon would separate concept and value.",
       "Calculated left ventricular ejection fraction; 65 %",
       "Calculated left ventricular ejection fraction; 65 %"},
      {"sclerosis_without_stenosis",
       "Stenosis is negated through a 'sclerosis without stenosis' phrase.",
       "Mitral valve sclerosis without stenosis",
       "Mitral valve sclerosis without stenosis"},
      {"doppler_insertion",
       "The word Doppler is inserted into the gradient concept name.",
       "Aortic valve systolic mean Doppler gradient 12 mmHg;",
       "Aortic valve systolic mean Doppler gradient 12 mmHg;"},
      {"abbreviated_table_label",
       "Table label is partly abbreviated instead of spelled out.",
       "LV Size-end systole", "LV Size-end systole"},
      {"missing_space",
       "No space between the concept and its value.",
       "Ao valve open2.2 cm", "Ao valve open2.2 cm"},
      {"cross_line_concept",
       "A line break falls inside the concept name.",
       "The right\natrial pressure is estimated at 8 mmHg.", ""},
      {"compound_normal_sentence",
       "Several findings share one 'are all normal' statement.",
       "Left ventricular size, systolic function, wall thickness, and wall "
       "motion are all normal.",
       "Left ventricular size, systolic function, wall thickness, and wall "
       "motion are all normal."},
      {"free_text_only",
       "The report has free text only, without tabular sections.",
       "Findings: The left atrium is mildly dilated.", ""},
      {"adjacent_concepts",
       "Two concepts share one sentence with the second in parentheses.",
       "Mild AS (AoVA 1.2-1.9cm\xC2\xB2)", "Mild AS (AoVA 1.2-1.9cm\xC2\xB2)"},
      {"term_mismap_ea",
       "An E:A ratio row that a loose matcher reads as e/e prime ratio.",
       "Mitral E:A Rt 2", "Mitral E:A Rt 2"},
      {"term_mismap_interatrial",
       "Interatrial septum text that a loose matcher reads as the "
       "interventricular septum.",
       "The interatrial septum is 0.9 cm.", "interatrial septum"},
      {"substring_available",
       "The word 'available', which contains the short form 'ava'.",
       "Prior study not available for comparison.", "available"},
      {"thickened_not_present",
       "A severity for the leaflets sits next to a negated stenosis.",
       "The aortic valve leaflets (3) are mildly thickened but aortic "
       "stenosis is not present.",
       "The aortic valve leaflets (3) are mildly thickened but aortic "
       "stenosis is not present."},
      {"uncommon_abbreviation",
       "Aortic regurgitation written with the less common short form AI.",
       "Mild AI.", ""},
  };
  return kCatalog;
}

bool IsKnownQuirk(std::string_view quirk_id) {
  for (const QuirkInfo &q : QuirkCatalog()) {
    if (q.quirk_id == quirk_id) return true;
  }
  return false;
}

// ---- profiles ------------------------------------------------------------------

double SiteProfile::QuirkRate(const std::string &quirk_id,
                              const std::string &concept_id) const {
  if (!concept_id.empty()) {
    auto it = quirk_rates.find(quirk_id + "@" + concept_id);
    if (it != quirk_rates.end()) return it->second;
  }
  auto it = quirk_rates.find(quirk_id);
  return it == quirk_rates.end() ? 0.0 : it->second;
}

namespace {

double ParseProbability(const std::string &field, const std::string &source,
                        int line) {
  auto p = ParseNumber(field);
  if (!p) throw ParseError(source, line, "bad probability '" + field + "'");
  if (*p < 0.0 || *p > 1.0) {
    throw ValidationError(source + ":" + std::to_string(line) +
                          ": probability " + field + " outside [0, 1]");
  }
  return *p;
}

}  // namespace

std::map<std::string, SiteProfile> ParseProfiles(std::string_view text,
                                                 const std::string &source) {
  std::map<std::string, SiteProfile> out;
  for (const TsvRecord &rec : ParseTsv(text)) {
    const std::vector<std::string> &f = rec.fields;
    const std::string &type = f[0];
    auto site = [&]() -> SiteProfile & {
      auto it = out.find(f[1]);
      if (it == out.end()) {
        throw ParseError(source, rec.line, "site '" + f[1] + "' has no SITE line");
      }
      return it->second;
    };
    if (type == "SITE") {
      if (f.size() != 5) throw ParseError(source, rec.line, "SITE needs 4 fields");
      SiteProfile p;
      p.site_tag = f[1];
      if (f[2] == "tabular") {
        p.layout = Layout::kTabular;
      } else if (f[2] == "narrative") {
        p.layout = Layout::kNarrative;
      } else {
        throw ParseError(source, rec.line, "layout must be tabular or narrative");
      }
      auto spl = ParseNumber(f[3]);
      if (!spl || *spl < 1 || *spl != std::floor(*spl)) {
        throw ParseError(source, rec.line, "sentences_per_line must be >= 1");
      }
      p.sentences_per_line = static_cast<int>(*spl);
      if (f[4] != "0" && f[4] != "1") {
        throw ParseError(source, rec.line, "numbered_impression must be 0 or 1");
      }
      p.numbered_impression = f[4] == "1";
      if (!out.emplace(p.site_tag, p).second) {
        throw ParseError(source, rec.line, "duplicate site '" + p.site_tag + "'");
      }
    } else if (type == "FREQ") {
      if (f.size() != 4) throw ParseError(source, rec.line, "FREQ needs 3 fields");
      site().concept_frequencies[f[2]] = ParseProbability(f[3], source, rec.line);
    } else if (type == "QUIRK") {
      if (f.size() != 4) throw ParseError(source, rec.line, "QUIRK needs 3 fields");
      std::string quirk = f[2].substr(0, f[2].find('@'));
      if (!IsKnownQuirk(quirk)) {
        throw ValidationError(source + ":" + std::to_string(rec.line) +
                              ": unknown quirk_id '" + quirk + "'");
      }
      site().quirk_rates[f[2]] = ParseProbability(f[3], source, rec.line);
    } else {
      throw ParseError(source, rec.line, "unknown record type '" + type + "'");
    }
  }
  return out;
}

std::map<std::string, SiteProfile> BuiltinProfiles() {
  return ParseProfiles(builtin::ProfilesText(), "profiles.tsv");
}

SiteProfile BuiltinProfile(std::string_view site_tag) {
  std::map<std::string, SiteProfile> all = BuiltinProfiles();
  auto it = all.find(std::string(site_tag));
  if (it == all.end()) {
    throw ValidationError("unknown site profile '" + std::string(site_tag) + "'");
  }
  return it->second;
}

// ---- template library ----------------------------------------------------------

class TemplateLibrary {
 public:
  struct RangeSpec {
    double min = 0;
    double max = 0;
    int decimals = 0;
    std::string unit_text;  // "-" for none
    std::string gold_unit;  // empty for none
  };
  struct QualSpec {
    std::string target, label, surface;
  };
  struct SurfSpec {
    std::string target, kind, phrase;
  };
  struct RowSpec {
    std::string site, concept_id, quirk, label;
  };
  struct RefSpec {
    std::string site, concept_id, text;
  };
  struct SentSpec {
    std::string site, target;
    std::vector<std::string> labels;  // empty means any
    std::string quirk;                // empty for the plain form
    std::string section;              // narr | impr
    std::string text;
  };
  struct TrapSpec {
    std::string site, quirk, concept_id, place, text;
  };
  struct SiteText {
    std::string site, kind, text;
  };

  std::map<std::string, std::vector<std::string>> groups;
  std::map<std::string, RangeSpec> ranges;
  std::vector<QualSpec> quals;
  std::vector<SurfSpec> surfs;
  std::vector<RowSpec> rows;
  std::vector<RefSpec> refs;
  std::vector<SentSpec> sents;
  std::vector<TrapSpec> traps;
  std::vector<SiteText> metas;
  std::vector<SiteText> heads;
  std::vector<SiteText> fills;

  bool Targets(const std::string &target, const std::string &concept_id) const {
    if (target == concept_id) return true;
    auto it = groups.find(target);
    return it != groups.end() &&
           std::find(it->second.begin(), it->second.end(), concept_id) !=
               it->second.end();
  }

  // Concept ids named anywhere, with groups expanded.
  std::set<std::string> ReferencedConcepts() const {
    std::set<std::string> ids;
    auto add = [&](const std::string &target) {
      if (!target.empty() && target[0] == '@') {
        auto it = groups.find(target);
        if (it == groups.end()) {
          throw ValidationError("templates reference unknown group '" + target +
                                "'");
        }
        ids.insert(it->second.begin(), it->second.end());
      } else {
        ids.insert(target);
      }
    };
    for (const auto &[id, r] : ranges) add(id);
    for (const QualSpec &q : quals) add(q.target);
    for (const SurfSpec &s : surfs) add(s.target);
    for (const RowSpec &r : rows) add(r.concept_id);
    for (const RefSpec &r : refs) add(r.concept_id);
    for (const SentSpec &s : sents) add(s.target);
    for (const TrapSpec &t : traps) add(t.concept_id);
    return ids;
  }
};

namespace {

std::string Unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == 'n') {
      out += '\n';
      ++i;
    } else {
      out += s[i];
    }
  }
  return out;
}

bool SiteMatches(const std::string &spec, const std::string &site) {
  return spec == "*" || spec == site;
}

std::string Capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 32);
  return s;
}

std::string FormatFixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

}  // namespace

std::shared_ptr<const TemplateLibrary> ParseTemplates(std::string_view text,
                                                      const std::string &source) {
  auto lib = std::make_shared<TemplateLibrary>();
  for (const TsvRecord &rec : ParseTsv(text)) {
    const std::vector<std::string> &f = rec.fields;
    const std::string &type = f[0];
    auto need = [&](std::size_t n) {
      if (f.size() != n) {
        throw ParseError(source, rec.line,
                         type + " needs " + std::to_string(n - 1) + " fields");
      }
    };
    if (type == "GROUP") {
      need(3);
      if (f[1].empty() || f[1][0] != '@') {
        throw ParseError(source, rec.line, "group names start with '@'");
      }
      lib->groups[f[1]] = Split(f[2], ',');
    } else if (type == "RANGE") {
      need(7);
      auto lo = ParseNumber(f[2]);
      auto hi = ParseNumber(f[3]);
      auto dec = ParseNumber(f[4]);
      if (!lo || !hi || !dec || *lo > *hi || *dec < 0 || *dec > 3) {
        throw ParseError(source, rec.line, "bad RANGE numbers");
      }
      lib->ranges[f[1]] = {*lo, *hi, static_cast<int>(*dec), f[5],
                           f[6] == "-" ? "" : f[6]};
    } else if (type == "QUAL") {
      need(4);
      lib->quals.push_back({f[1], f[2], f[3]});
    } else if (type == "SURF") {
      need(4);
      lib->surfs.push_back({f[1], f[2], f[3]});
    } else if (type == "ROW") {
      need(5);
      lib->rows.push_back({f[1], f[2], f[3] == "-" ? "" : f[3], f[4]});
    } else if (type == "REF") {
      need(4);
      lib->refs.push_back({f[1], f[2], f[3]});
    } else if (type == "SENT") {
      need(7);
      if (f[5] != "narr" && f[5] != "impr") {
        throw ParseError(source, rec.line, "SENT section must be narr or impr");
      }
      TemplateLibrary::SentSpec s{f[1], f[2], {}, f[4] == "-" ? "" : f[4], f[5],
                                  Unescape(f[6])};
      if (f[3] != "*") s.labels = Split(f[3], ',');
      lib->sents.push_back(std::move(s));
    } else if (type == "TRAP") {
      need(6);
      if (f[4] != "table" && f[4] != "narr") {
        throw ParseError(source, rec.line, "TRAP place must be table or narr");
      }
      lib->traps.push_back({f[1], f[2], f[3], f[4], Unescape(f[5])});
    } else if (type == "META") {
      need(3);
      lib->metas.push_back({f[1], "", Unescape(f[2])});
    } else if (type == "HEAD") {
      need(4);
      lib->heads.push_back({f[1], f[2], Unescape(f[3])});
    } else if (type == "FILL") {
      need(3);
      lib->fills.push_back({f[1], "", Unescape(f[2])});
    } else {
      throw ParseError(source, rec.line, "unknown record type '" + type + "'");
    }
  }
  for (const auto &s : lib->sents) {
    if (!s.quirk.empty() && !IsKnownQuirk(s.quirk)) {
      throw ValidationError(source + ": unknown quirk_id '" + s.quirk + "'");
    }
  }
  for (const auto &t : lib->traps) {
    if (!IsKnownQuirk(t.quirk)) {
      throw ValidationError(source + ": unknown quirk_id '" + t.quirk + "'");
    }
  }
  return lib;
}

std::shared_ptr<const TemplateLibrary> BuiltinTemplates() {
  static const std::shared_ptr<const TemplateLibrary> kLib =
      ParseTemplates(builtin::TemplatesText(), "templates.tsv");
  return kLib;
}

// ---- generation ----------------------------------------------------------------

namespace {

constexpr std::size_t kLabelWidth = 30;

using Lib = TemplateLibrary;

struct Fact {
  std::string concept_id;
  bool mentioned = false;
  bool qualitative = false;
  std::string label;
  std::string q_surface;
  bool present = false;  // gold
  bool rendered = false;
  double lo = 0;
  double hi = 0;
  std::string lo_text;
  std::string hi_text;
};

struct Piece {
  std::string text;
  std::vector<std::pair<std::string, std::string>> evidence;  // concept, value
};

std::string PadTo(const std::string &s) {
  std::size_t pad = s.size() + 2 > kLabelWidth ? 2 : kLabelWidth - s.size();
  return s + std::string(pad, ' ');
}

class ReportBuilder {
 public:
  ReportBuilder(const SiteProfile &profile, const Lexicon &lexicon,
                const Lib &lib, SplitMix64 &rng, GeneratedReport &out)
      : profile_(profile), lexicon_(lexicon), lib_(lib), rng_(rng), out_(out) {}

  void Build() {
    const std::string &site = profile_.site_tag;
    std::vector<std::string> concepts = lexicon_.EvaluatedConceptIds();
    for (const std::string &id : concepts) {
      Fact f;
      f.concept_id = id;
      auto it = profile_.concept_frequencies.find(id);
      double p = it == profile_.concept_frequencies.end() ? 0.0 : it->second;
      f.mentioned = rng_.Bernoulli(p);
      facts_.push_back(f);
    }
    tables_ = profile_.layout == Layout::kTabular;
    if (Trial("free_text_only", "")) tables_ = false;

    for (Fact &f : facts_) {
      if (f.mentioned) ChooseKind(f);
    }
    for (Fact &f : facts_) {
      if (!f.mentioned || f.rendered) continue;
      Render(f);
    }
    for (const Lib::TrapSpec &t : lib_.traps) {
      if (!SiteMatches(t.site, site)) continue;
      if (t.place == "table" && !tables_) continue;
      if (FactFor(t.concept_id).rendered) continue;
      if (!Trial(t.quirk, t.concept_id)) continue;
      Piece piece{FillPad(t.text), {}};
      (t.place == "table" ? table_ : narr_).push_back(piece);
    }
    AddFills();
    Shuffle(narr_);
    Assemble();
    Gold(concepts);
  }

 private:
  bool Trial(const std::string &quirk, const std::string &concept_id) {
    double p = profile_.QuirkRate(quirk, concept_id);
    if (p <= 0) return false;
    bool applied = rng_.Bernoulli(p);
    out_.trials.push_back({quirk, concept_id, applied});
    if (applied) out_.applied_quirks.emplace_back(quirk, concept_id);
    return applied;
  }

  Fact &FactFor(const std::string &id) {
    for (Fact &f : facts_) {
      if (f.concept_id == id) return f;
    }
    throw ValidationError("no fact slot for concept '" + id + "'");
  }

  const Lib::RowSpec *Row(const std::string &id, const std::string &quirk) const {
    for (const Lib::RowSpec &r : lib_.rows) {
      if (r.site == profile_.site_tag && r.concept_id == id && r.quirk == quirk) {
        return &r;
      }
    }
    return nullptr;
  }

  const Lib::RefSpec *Ref(const std::string &id) const {
    for (const Lib::RefSpec &r : lib_.refs) {
      if (r.site == profile_.site_tag && r.concept_id == id) return &r;
    }
    return nullptr;
  }

  const Lib::RangeSpec &Range(const std::string &id) const {
    auto it = lib_.ranges.find(id);
    if (it == lib_.ranges.end()) {
      throw ValidationError("templates give no RANGE for '" + id + "'");
    }
    return it->second;
  }

  std::vector<const Lib::QualSpec *> Quals(const std::string &id) const {
    std::vector<const Lib::QualSpec *> out;
    for (const Lib::QualSpec &q : lib_.quals) {
      if (lib_.Targets(q.target, id)) out.push_back(&q);
    }
    return out;
  }

  template <typename T>
  const T &Pick(const std::vector<const T *> &items) {
    return *items[static_cast<std::size_t>(
        rng_.UniformInt(0, static_cast<std::int64_t>(items.size()) - 1))];
  }

  void ChooseKind(Fact &f) {
    const ConceptDef *def = lexicon_.Find(f.concept_id);
    switch (def->value_kind) {
      case ValueKind::kQuantitative:
        f.qualitative = false;
        break;
      case ValueKind::kQualitative:
        f.qualitative = true;
        break;
      case ValueKind::kBoth:
        if (tables_ && Row(f.concept_id, "")) {
          f.qualitative = false;
        } else {
          f.qualitative = rng_.Bernoulli(0.5);
        }
        break;
    }
    if (f.qualitative) {
      std::vector<const Lib::QualSpec *> quals = Quals(f.concept_id);
      if (quals.empty()) {
        throw ValidationError("templates give no QUAL for '" + f.concept_id + "'");
      }
      const Lib::QualSpec &q = Pick(quals);
      f.label = q.label;
      f.q_surface = q.surface;
    }
  }

  // Draws a value on the concept's grid and keeps its printed form.
  std::pair<double, std::string> Draw(const Lib::RangeSpec &r) {
    double scale = std::pow(10.0, r.decimals);
    auto lo = static_cast<std::int64_t>(std::llround(r.min * scale));
    auto hi = static_cast<std::int64_t>(std::llround(r.max * scale));
    double v = static_cast<double>(rng_.UniformInt(lo, hi)) / scale;
    std::string text = FormatFixed(v, r.decimals);
    return {*ParseNumber(text), text};
  }

  void DrawSingle(Fact &f) {
    auto [v, text] = Draw(Range(f.concept_id));
    f.lo = f.hi = v;
    f.lo_text = f.hi_text = text;
  }

  void DrawRange(Fact &f) {
    const Lib::RangeSpec &r = Range(f.concept_id);
    auto [lo, lo_text] = Draw(r);
    double step = r.decimals == 0 ? 5.0 * static_cast<double>(rng_.UniformInt(1, 2))
                                  : static_cast<double>(rng_.UniformInt(2, 7)) /
                                        std::pow(10.0, r.decimals);
    std::string hi_text = FormatFixed(lo + step, r.decimals);
    f.lo = lo;
    f.lo_text = lo_text;
    f.hi = *ParseNumber(hi_text);
    f.hi_text = hi_text;
  }

  std::string UnitSuffix(const std::string &id) const {
    const Lib::RangeSpec &r = Range(id);
    return r.unit_text == "-" ? "" : " " + r.unit_text;
  }

  void Render(Fact &f) {
    if (tables_ && !f.qualitative && Row(f.concept_id, "")) {
      RenderRow(f);
      return;
    }
    RenderSentence(f);
    const Lib::RowSpec *ref_row = Row(f.concept_id, "reference_only_row");
    const Lib::RefSpec *ref = Ref(f.concept_id);
    if (tables_ && ref_row && ref && !Row(f.concept_id, "") &&
        Trial("reference_only_row", f.concept_id)) {
      table_.push_back({PadTo(ref_row->label) + ref->text, {}});
    }
  }

  void RenderRow(Fact &f) {
    const Lib::RowSpec *row = Row(f.concept_id, "");
    std::string label = row->label;
    if (const Lib::RowSpec *alt = Row(f.concept_id, "abbreviated_table_label")) {
      if (Trial("abbreviated_table_label", f.concept_id)) label = alt->label;
    }
    f.rendered = true;
    const Lib::RefSpec *ref = Ref(f.concept_id);
    if (ref && Trial("reference_only_row", f.concept_id)) {
      table_.push_back({PadTo(label) + ref->text, {}});
      return;  // nothing measured: the concept stays absent in gold
    }
    DrawSingle(f);
    f.present = true;
    std::string text;
    if (ref && Trial("reference_range_tabular", f.concept_id)) {
      text = PadTo(label) + f.lo_text + "    " + ref->text;
    } else {
      text = PadTo(label) + f.lo_text + UnitSuffix(f.concept_id);
    }
    table_.push_back({text, {{f.concept_id, f.lo_text}}});
  }

  bool Usable(const Lib::SentSpec &s, const Fact &f) const {
    if (!SiteMatches(s.site, profile_.site_tag)) return false;
    if (!lib_.Targets(s.target, f.concept_id)) return false;
    bool has_num = s.text.find("{num}") != std::string::npos ||
                   s.text.find("{lo}") != std::string::npos;
    bool has_q = s.text.find("{q}") != std::string::npos ||
                 s.text.find("{Q}") != std::string::npos;
    if (!f.qualitative) return has_num && s.labels.empty();
    if (has_num) return false;
    if (s.labels.empty()) return has_q;
    return std::find(s.labels.begin(), s.labels.end(), f.label) != s.labels.end();
  }

  // Companion concept named by a {Q@id} slot, or empty.
  static std::string Companion(const std::string &text) {
    std::size_t at = text.find("{Q@");
    if (at == std::string::npos) return "";
    std::size_t close = text.find('}', at);
    return text.substr(at + 3, close - at - 3);
  }

  bool CompanionFree(const Lib::SentSpec &s) {
    std::string c = Companion(s.text);
    return c.empty() || !FactFor(c).rendered;
  }

  void RenderSentence(Fact &f) {
    std::vector<const Lib::SentSpec *> plain;
    std::vector<std::string> quirk_order;
    for (const Lib::SentSpec &s : lib_.sents) {
      if (!Usable(s, f)) continue;
      if (s.quirk.empty()) {
        plain.push_back(&s);
      } else if (CompanionFree(s) &&
                 std::find(quirk_order.begin(), quirk_order.end(), s.quirk) ==
                     quirk_order.end()) {
        quirk_order.push_back(s.quirk);
      }
    }
    const Lib::SentSpec *chosen = nullptr;
    for (const std::string &quirk : quirk_order) {
      if (!Trial(quirk, f.concept_id)) continue;
      std::vector<const Lib::SentSpec *> options;
      for (const Lib::SentSpec &s : lib_.sents) {
        if (s.quirk == quirk && Usable(s, f) && CompanionFree(s)) {
          options.push_back(&s);
        }
      }
      chosen = &Pick(options);
      break;
    }
    if (!chosen) {
      if (plain.empty()) {
        throw ValidationError("no sentence template for '" + f.concept_id +
                              "' at site '" + profile_.site_tag + "'");
      }
      chosen = &Pick(plain);
    }

    if (!f.qualitative) {
      if (chosen->text.find("{lo}") != std::string::npos) {
        DrawRange(f);
      } else {
        DrawSingle(f);
      }
    }
    Piece piece;
    piece.text = Fill(chosen->text, f);
    f.rendered = true;
    f.present = true;
    piece.evidence.emplace_back(f.concept_id, EvidenceText(*chosen, f));
    std::string companion = Companion(chosen->text);
    if (!companion.empty()) {
      Fact &c = FactFor(companion);
      piece.evidence.emplace_back(companion, c.q_surface);
    }
    (chosen->section == "impr" ? impr_ : narr_).push_back(std::move(piece));
  }

  static std::string EvidenceText(const Lib::SentSpec &s, const Fact &f) {
    if (!f.qualitative) return f.lo_text;
    if (s.text.find("{q}") != std::string::npos ||
        s.text.find("{Q}") != std::string::npos) {
      return f.q_surface;
    }
    if (f.label == "no") {
      if (s.text.find("without") != std::string::npos) return "without";
      if (s.text.find("not present") != std::string::npos) return "not present";
    }
    return f.label;
  }

  std::string Surface(const std::string &id, bool qualitative) {
    std::vector<const Lib::SurfSpec *> options;
    for (const Lib::SurfSpec &s : lib_.surfs) {
      if (!lib_.Targets(s.target, id)) continue;
      if (s.kind == "*" || s.kind == (qualitative ? "qual" : "quant")) {
        options.push_back(&s);
      }
    }
    if (options.empty()) return lexicon_.Find(id)->canonical_name;
    return Pick(options).phrase;
  }

  // Claims the companion fact and gives it a positive finding.
  std::string CompanionSurface(const std::string &id) {
    Fact &c = FactFor(id);
    std::vector<const Lib::QualSpec *> quals;
    for (const Lib::QualSpec *q : Quals(id)) {
      if (q->label != "no") quals.push_back(q);
    }
    if (quals.empty()) {
      throw ValidationError("no positive QUAL for companion '" + id + "'");
    }
    const Lib::QualSpec &q = Pick(quals);
    c.mentioned = c.rendered = c.present = c.qualitative = true;
    c.label = q.label;
    c.q_surface = q.surface;
    return Capitalize(q.surface);
  }

  std::string Fill(const std::string &tmpl, const Fact &f) {
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
      if (tmpl[i] != '{') {
        out += tmpl[i++];
        continue;
      }
      std::size_t close = tmpl.find('}', i);
      std::string key = tmpl.substr(i + 1, close - i - 1);
      i = close + 1;
      if (key == "num" || key == "lo") {
        out += f.lo_text;
      } else if (key == "hi") {
        out += f.hi_text;
      } else if (key == "u") {
        out += UnitSuffix(f.concept_id);
      } else if (key == "unit") {
        out += Range(f.concept_id).unit_text;
      } else if (key == "q") {
        out += f.q_surface;
      } else if (key == "Q") {
        out += Capitalize(f.q_surface);
      } else if (key == "term") {
        out += Surface(f.concept_id, f.qualitative);
      } else if (key == "Term") {
        out += Capitalize(Surface(f.concept_id, f.qualitative));
      } else if (key.rfind("Q@", 0) == 0) {
        out += CompanionSurface(key.substr(2));
      } else if (key == "pad") {
        out += std::string(PadTo(out).size() - out.size(), ' ');
      } else if (key == "id") {
        out += out_.report_id;
      } else if (key == "date") {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d",
                      static_cast<int>(rng_.UniformInt(2000, 2017)),
                      static_cast<int>(rng_.UniformInt(1, 12)),
                      static_cast<int>(rng_.UniformInt(1, 28)));
        out += buf;
      } else {
        throw ValidationError("unknown template slot '{" + key + "}'");
      }
    }
    return out;
  }

  std::string FillPad(const std::string &tmpl) {
    Fact none;
    return Fill(tmpl, none);
  }

  void AddFills() {
    std::vector<const Lib::SiteText *> options;
    for (const Lib::SiteText &t : lib_.fills) {
      if (SiteMatches(t.site, profile_.site_tag)) options.push_back(&t);
    }
    if (options.empty()) return;
    std::int64_t count = rng_.UniformInt(1, 2);
    std::set<const Lib::SiteText *> used;
    for (std::int64_t k = 0; k < count; ++k) {
      const Lib::SiteText &t = Pick(options);
      if (used.insert(&t).second) narr_.push_back({t.text, {}});
    }
  }

  void Shuffle(std::vector<Piece> &pieces) {
    for (std::size_t i = pieces.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(
          rng_.UniformInt(0, static_cast<std::int64_t>(i) - 1));
      std::swap(pieces[i - 1], pieces[j]);
    }
  }

  std::string Head(const std::string &kind) const {
    const Lib::SiteText *fallback = nullptr;
    for (const Lib::SiteText &t : lib_.heads) {
      if (t.kind != kind) continue;
      if (t.site == profile_.site_tag) return t.text;
      if (t.site == "*") fallback = &t;
    }
    return fallback ? fallback->text : "";
  }

  void Place(std::string &text, const Piece &piece) {
    std::size_t start = text.size();
    text += piece.text;
    for (const auto &[concept_id, value] : piece.evidence) {
      out_.evidence.push_back({concept_id, Span{start, text.size()}, value});
    }
  }

  void Assemble() {
    std::string text;
    for (const Lib::SiteText &m : lib_.metas) {
      if (SiteMatches(m.site, profile_.site_tag)) text += FillPad(m.text) + "\n";
    }
    if (tables_ && !table_.empty()) {
      text += "\n" + Head("table") + "\n";
      for (const Piece &p : table_) {
        Place(text, p);
        text += "\n";
      }
    }
    if (!narr_.empty()) {
      text += "\n";
      if (std::string h = Head("narr"); !h.empty()) text += h + "\n";
      std::size_t per_line = static_cast<std::size_t>(profile_.sentences_per_line);
      for (std::size_t i = 0; i < narr_.size(); ++i) {
        if (i % per_line != 0) text += " ";
        Place(text, narr_[i]);
        if (i % per_line == per_line - 1 || i + 1 == narr_.size()) text += "\n";
      }
    }
    if (!impr_.empty()) {
      text += "\n" + Head("impr") + "\n";
      for (std::size_t i = 0; i < impr_.size(); ++i) {
        if (profile_.numbered_impression) text += std::to_string(i + 1) + ". ";
        Place(text, impr_[i]);
        text += "\n";
      }
    }
    out_.text = std::move(text);
  }

  void Gold(const std::vector<std::string> &concepts) {
    for (const std::string &id : concepts) {
      const Fact &f = FactFor(id);
      GoldAnnotation g{out_.report_id, id, f.present, std::nullopt};
      if (f.present) {
        ExpectedValue e;
        if (f.qualitative) {
          e.kind = ValueType::kQualitative;
          e.qualitative_label = f.label;
        } else {
          e.kind = ValueType::kQuantitative;
          e.value_min = f.lo;
          e.value_max = f.hi;
          e.unit = Range(id).gold_unit;
        }
        g.expected = e;
      }
      out_.gold.push_back(std::move(g));
    }
  }

  const SiteProfile &profile_;
  const Lexicon &lexicon_;
  const Lib &lib_;
  SplitMix64 &rng_;
  GeneratedReport &out_;
  std::vector<Fact> facts_;
  bool tables_ = false;
  std::vector<Piece> table_;
  std::vector<Piece> narr_;
  std::vector<Piece> impr_;
};

void Validate(const SiteProfile &profile, const Lexicon &lexicon,
              const TemplateLibrary &templates) {
  for (const auto &[key, rate] : profile.quirk_rates) {
    std::string quirk = key.substr(0, key.find('@'));
    if (!IsKnownQuirk(quirk)) {
      throw ValidationError("unknown quirk_id '" + quirk + "'");
    }
    if (key.find('@') != std::string::npos &&
        !lexicon.Find(key.substr(key.find('@') + 1))) {
      throw ValidationError("quirk rate '" + key + "' names an unknown concept");
    }
    if (rate < 0 || rate > 1) {
      throw ValidationError("quirk rate for '" + key + "' outside [0, 1]");
    }
  }
  for (const auto &[id, p] : profile.concept_frequencies) {
    if (!lexicon.Find(id)) {
      throw ValidationError("profile '" + profile.site_tag +
                            "' names unknown concept '" + id + "'");
    }
    if (p < 0 || p > 1) {
      throw ValidationError("frequency for '" + id + "' outside [0, 1]");
    }
  }
  for (const std::string &id : templates.ReferencedConcepts()) {
    if (!lexicon.Find(id)) {
      throw ValidationError("templates name unknown concept '" + id + "'");
    }
  }
}

std::string ReportId(const std::string &site, std::size_t index, std::size_t n) {
  std::size_t width = std::max<std::size_t>(4, std::to_string(n).size());
  std::string digits = std::to_string(index);
  return site + "-" + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

std::vector<GeneratedReport> GenerateCorpus(const SiteProfile &profile,
                                            std::size_t n, std::uint64_t seed,
                                            const Lexicon &lexicon,
                                            const TemplateLibrary &templates) {
  if (n == 0) throw ValidationError("n must be at least 1");
  Validate(profile, lexicon, templates);
  SplitMix64 rng(seed);
  std::vector<GeneratedReport> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    GeneratedReport &r = out[i];
    r.report_id = ReportId(profile.site_tag, i + 1, n);
    r.site_tag = profile.site_tag;
    ReportBuilder(profile, lexicon, templates, rng, r).Build();
  }
  return out;
}

std::vector<GeneratedReport> GenerateCorpus(const SiteProfile &profile,
                                            std::size_t n, std::uint64_t seed) {
  return GenerateCorpus(profile, n, seed, DefaultLexicon(), *BuiltinTemplates());
}

std::vector<ManifestEntry> CorpusManifest(
    const std::vector<GeneratedReport> &reports) {
  std::vector<ManifestEntry> out;
  out.reserve(reports.size());
  for (const GeneratedReport &r : reports) {
    out.push_back({r.report_id, r.site_tag, "reports/" + r.report_id + ".txt"});
  }
  return out;
}

std::string SerializeCorpusGold(const std::vector<GeneratedReport> &reports) {
  std::vector<GoldAnnotation> all;
  for (const GeneratedReport &r : reports) {
    all.insert(all.end(), r.gold.begin(), r.gold.end());
  }
  return SerializeGold(all);
}

std::string SerializeQuirks(const std::vector<GeneratedReport> &reports) {
  std::string out = "# report_id\tquirk_id\tconcept_id\n";
  for (const GeneratedReport &r : reports) {
    for (const auto &[quirk, concept_id] : r.applied_quirks) {
      out += r.report_id + "\t" + quirk + "\t" + concept_id + "\n";
    }
  }
  return out;
}

std::string SerializeCatalog() {
  auto escape = [](const std::string &s) {
    std::string out;
    for (char c : s) {
      if (c == '\n') {
        out += "\\n";
      } else {
        out += c;
      }
    }
    return out;
  };
  std::string out = "quirk_id\tdescription\texample_sentence\tpaper_quote\n";
  for (const QuirkInfo &q : QuirkCatalog()) {
    out += q.quirk_id + "\t" + q.description + "\t" + escape(q.example_sentence) +
           "\t" + q.paper_quote + "\n";
  }
  return out;
}

}  // namespace echox
