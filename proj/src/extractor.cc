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

#include "echox/extractor.h"

#include <algorithm>
#include <array>
#include <optional>
#include <regex>

#include "echox/severity.h"

namespace echox {

namespace {

constexpr std::size_t kNpos = std::string::npos;

bool IsAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }

bool Seam(char a, char b) {
  return (IsAlpha(a) && IsDigit(b)) || (IsDigit(a) && IsAlpha(b));
}

bool LeftBoundary(std::string_view text, std::size_t pos, bool tolerant) {
  if (pos == 0 || !IsWordChar(text[pos - 1])) return true;
  return tolerant && Seam(text[pos - 1], text[pos]);
}

bool RightBoundary(std::string_view text, std::size_t end, bool tolerant) {
  if (end == 0 || end >= text.size()) return true;
  if (!IsWordChar(text[end - 1]) || !IsWordChar(text[end])) return true;
  return tolerant && Seam(text[end - 1], text[end]);
}

// End of `phrase` matched at `pos`, or npos. A space in the phrase matches a
// run of spaces and tabs, which may include one newline when cross-line
// matching is on. Case-insensitive phrases are stored lower-case.
std::size_t MatchPhraseAt(std::string_view text, std::size_t pos,
                          std::string_view phrase, bool case_insensitive,
                          bool cross_line) {
  std::size_t i = pos;
  for (char p : phrase) {
    if (p == ' ') {
      std::size_t run = i;
      bool newline = false;
      while (run < text.size()) {
        char c = text[run];
        if (IsSpaceOrTab(c)) {
          ++run;
        } else if (c == '\n' && cross_line && !newline) {
          newline = true;
          ++run;
        } else {
          break;
        }
      }
      if (run == i) return kNpos;
      i = run;
      continue;
    }
    if (i >= text.size()) return kNpos;
    char t = case_insensitive ? AsciiLower(text[i]) : text[i];
    if (t != p) return kNpos;
    ++i;
  }
  return i;
}

struct Candidate {
  std::size_t start;
  std::size_t end;
  std::size_t order;
  const IndexedPhrase *entry;
};

SectionKind KindAt(const EchoReport &report, std::size_t offset) {
  const Section *s = report.SectionAt(offset);
  return s ? s->kind : SectionKind::kNarrative;
}

// ---- values ----------------------------------------------------------------

struct UnitForm {
  std::string_view surface;
  std::string_view normalized;
};

// Longest surfaces first where they share a prefix.
constexpr std::array<UnitForm, 7> kUnits = {{
    {"cm\xC2\xB2", "cm2"},
    {"cm2", "cm2"},
    {"cm", "cm"},
    {"mmHg", "mmHg"},
    {"mm", "mm"},
    {"m/s", "m/s"},
    {"%", "%"},
}};

std::size_t SkipBlanks(std::string_view text, std::size_t pos) {
  while (pos < text.size() && IsSpaceOrTab(text[pos])) ++pos;
  return pos;
}

// Digits with an optional fractional part; returns the end or npos.
std::size_t ScanDecimal(std::string_view text, std::size_t pos) {
  std::size_t i = pos;
  while (i < text.size() && IsDigit(text[i])) ++i;
  if (i == pos) return kNpos;
  if (i + 1 < text.size() && text[i] == '.' && IsDigit(text[i + 1])) {
    ++i;
    while (i < text.size() && IsDigit(text[i])) ++i;
  }
  return i;
}

std::optional<ValueMention> ScanNumber(std::string_view text, std::size_t pos,
                                       bool tolerant, std::size_t *next) {
  ValueMention v;
  v.kind = ValueType::kQuantitative;
  std::size_t j = pos;
  char c = text[j];
  if (c == '>' || c == '<' || c == '?') {
    if (c == '?') {
      v.uncertain = true;
      ++j;
    } else {
      v.comparator = c == '>' ? Comparator::kGreaterThan : Comparator::kLessThan;
      j = SkipBlanks(text, j + 1);
    }
    if (j >= text.size() || !IsDigit(text[j])) return std::nullopt;
  } else {
    if (pos > 0) {
      char prev = text[pos - 1];
      bool glued = IsWordChar(prev) || prev == '.';
      if (glued && !(tolerant && IsAlpha(prev))) return std::nullopt;
    }
  }
  std::size_t a_end = ScanDecimal(text, j);
  double a = *ParseNumber(text.substr(j, a_end - j));
  v.value_min = v.value_max = a;
  std::size_t k = a_end;

  std::size_t r = SkipBlanks(text, k);
  if (r < text.size() && text[r] == '-') {
    std::size_t b_start = SkipBlanks(text, r + 1);
    if (b_start < text.size() && IsDigit(text[b_start])) {
      std::size_t b_end = ScanDecimal(text, b_start);
      double b = *ParseNumber(text.substr(b_start, b_end - b_start));
      if (b >= a) {
        v.value_max = b;
        k = b_end;
      }
    }
  }

  std::size_t u = SkipBlanks(text, k);
  for (const UnitForm &form : kUnits) {
    if (text.substr(u, form.surface.size()) != form.surface) continue;
    std::size_t u_end = u + form.surface.size();
    if (IsWordChar(form.surface.back()) && u_end < text.size() &&
        IsWordChar(text[u_end])) {
      continue;
    }
    v.unit = std::string(form.normalized);
    k = u_end;
    break;
  }
  *next = k;
  if (k < text.size() && IsWordChar(text[k]) &&
      !(tolerant && Seam(text[k - 1], text[k]))) {
    return std::nullopt;  // "2D", "3x"
  }
  v.span = Span{pos, k};
  return v;
}

// ---- linking ---------------------------------------------------------------

constexpr std::array<std::string_view, 12> kLinkWords = {
    "is",       "are",      "was",        "were",          "of",
    "at",       "estimated", "measured",  "measures",      "calculated",
    "approximately", "appears"};

bool IsLinkWord(std::string_view word) {
  std::string low = ToLower(word);
  return std::find(kLinkWords.begin(), kLinkWords.end(), low) !=
         kLinkWords.end();
}

struct Gap {
  bool ok = false;
  bool has_words = false;
};

// Text between a concept and a value: separators and link words only.
Gap CheckGap(std::string_view text, std::size_t from, std::size_t to,
             const RulePack &pack) {
  Gap gap;
  bool newline = false;
  std::size_t i = from;
  while (i < to) {
    char c = text[i];
    if (IsAlpha(c)) {
      std::size_t j = i;
      while (j < to && IsAlpha(text[j])) ++j;
      if (j < to && IsWordChar(text[j])) return gap;
      if (!IsLinkWord(text.substr(i, j - i))) return gap;
      gap.has_words = true;
      i = j;
    } else if (c == '\n') {
      if (!pack.cross_line_linking || newline) return gap;
      newline = true;
      ++i;
    } else if (pack.separator_chars.count(c)) {
      ++i;
    } else {
      return gap;
    }
  }
  if (newline && gap.has_words) return gap;
  gap.ok = true;
  return gap;
}

bool IsSentenceBreak(std::string_view text, std::size_t i) {
  char c = text[i];
  if (c == '\n' || c == ';') return true;
  if (c == '.' || c == '!' || c == '?') {
    return i + 1 >= text.size() || text[i + 1] == ' ' || text[i + 1] == '\t' ||
           text[i + 1] == '\n';
  }
  return false;
}

std::size_t SentenceStart(std::string_view text, std::size_t pos) {
  while (pos > 0) {
    if (IsSentenceBreak(text, pos - 1)) return pos;
    --pos;
  }
  return 0;
}

std::size_t SentenceEnd(std::string_view text, std::size_t pos) {
  while (pos < text.size() && !IsSentenceBreak(text, pos)) ++pos;
  return pos;
}

bool Compatible(ValueKind concept_kind, ValueType value) {
  switch (concept_kind) {
    case ValueKind::kQuantitative:
      return value == ValueType::kQuantitative;
    case ValueKind::kQualitative:
      return value == ValueType::kQualitative;
    case ValueKind::kBoth:
      return true;
  }
  return false;
}

ValueMention NegationValue(Span span) {
  ValueMention v;
  v.span = span;
  v.kind = ValueType::kQualitative;
  v.qualitative_label = "no";
  return v;
}

class Linker {
 public:
  Linker(const EchoReport &report, const std::vector<ConceptMention> &mentions,
         const std::vector<ValueMention> &values, const Lexicon &lexicon)
      : text_(report.raw_text),
        mentions_(mentions),
        values_(values),
        lexicon_(lexicon),
        pack_(lexicon.active_pack()),
        concept_used_(mentions.size(), false),
        value_used_(values.size(), false) {
    for (const ConceptMention &m : mentions) {
      concept_kind_.push_back(KindAt(report, m.span.start));
      const ConceptDef *def = lexicon.Find(m.concept_id);
      value_kinds_.push_back(def ? def->value_kind : ValueKind::kBoth);
    }
    for (const ValueMention &v : values) {
      value_section_.push_back(KindAt(report, v.span.start));
    }
    if (pack_.exclude_tabular) {
      for (std::size_t i = 0; i < mentions.size(); ++i) {
        if (concept_kind_[i] == SectionKind::kTabular) concept_used_[i] = true;
      }
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (value_section_[i] == SectionKind::kTabular) value_used_[i] = true;
      }
    }
  }

  std::vector<ConceptValuePair> Run() {
    NoConcept();
    if (pack_.post_negation) NotPresent();
    if (pack_.negation_without_pattern) Without();
    TableRows();
    ValueCentric();
    SeverityFirst();
    if (pack_.distribute_coordinated) Coordinated();
    std::stable_sort(pairs_.begin(), pairs_.end(),
                     [](const ConceptValuePair &a, const ConceptValuePair &b) {
                       if (a.concept_span.start != b.concept_span.start) {
                         return a.concept_span.start < b.concept_span.start;
                       }
                       return a.value.span.start < b.value.span.start;
                     });
    return std::move(pairs_);
  }

 private:
  void Emit(std::size_t mention, const ValueMention &value,
            std::string pattern, bool negated) {
    concept_used_[mention] = true;
    pairs_.push_back(ConceptValuePair{mentions_[mention].concept_id, value,
                                      mentions_[mention].span,
                                      std::move(pattern), negated});
  }

  bool Qualitative(std::size_t mention) const {
    return value_kinds_[mention] != ValueKind::kQuantitative;
  }

  // First mention starting at or after `pos`.
  std::size_t MentionFrom(std::size_t pos) const {
    auto it = std::lower_bound(
        mentions_.begin(), mentions_.end(), pos,
        [](const ConceptMention &m, std::size_t p) { return m.span.start < p; });
    return static_cast<std::size_t>(it - mentions_.begin());
  }

  // "no CONCEPT"
  void NoConcept() {
    for (std::size_t vi = 0; vi < values_.size(); ++vi) {
      const ValueMention &v = values_[vi];
      if (value_used_[vi] || v.kind != ValueType::kQualitative) continue;
      if (ToLower(text_.substr(v.span.start, v.span.size())) != "no") continue;
      std::size_t mi = MentionFrom(v.span.end);
      if (mi >= mentions_.size() || concept_used_[mi] || !Qualitative(mi)) {
        continue;
      }
      std::size_t gap_end = mentions_[mi].span.start;
      if (gap_end == v.span.end) continue;
      bool blank = true;
      for (std::size_t i = v.span.end; i < gap_end; ++i) {
        blank &= IsSpaceOrTab(text_[i]);
      }
      if (!blank) continue;
      value_used_[vi] = true;
      Emit(mi, NegationValue(v.span), "P1-no", true);
    }
  }

  // "CONCEPT is not present"
  void NotPresent() {
    static const std::regex kNot(R"(^[ \t]+(?:is|was)[ \t]+(not[ \t]+(?:present|seen))\b)",
                                 std::regex::icase);
    for (std::size_t mi = 0; mi < mentions_.size(); ++mi) {
      if (concept_used_[mi] || !Qualitative(mi)) continue;
      std::size_t end = mentions_[mi].span.end;
      std::string_view rest = text_.substr(end, std::min<std::size_t>(40, text_.size() - end));
      std::match_results<std::string_view::const_iterator> m;
      if (!std::regex_search(rest.begin(), rest.end(), m, kNot)) continue;
      std::size_t start = end + static_cast<std::size_t>(m.position(1));
      Span span{start, start + static_cast<std::size_t>(m.length(1))};
      ConsumeValuesIn(span);
      Emit(mi, NegationValue(span), "P1-not-present", true);
    }
  }

  // "<valve> [valve] X without <finding>", resolved through the dictionary.
  void Without() {
    static const std::regex kWithout(
        R"(\b(aortic|mitral|tricuspid)(?:[ \t]+valve)?[ \t]+[A-Za-z]+[ \t]+(without)[ \t]+(stenosis|regurgitation)\b)",
        std::regex::icase);
    auto begin = text_.begin();
    for (auto it = std::regex_iterator<std::string_view::const_iterator>(
             begin, text_.end(), kWithout);
         it != std::regex_iterator<std::string_view::const_iterator>(); ++it) {
      const auto &m = *it;
      std::string phrase = ToLower(m.str(1)) + " valve " + ToLower(m.str(3));
      const ConceptDef *def = lexicon_.FindByPhrase(phrase);
      if (!def || def->value_kind == ValueKind::kQuantitative) continue;
      std::size_t f_start = static_cast<std::size_t>(m.position(3));
      Span finding{f_start, f_start + static_cast<std::size_t>(m.length(3))};
      std::size_t w_start = static_cast<std::size_t>(m.position(2));
      Span without{w_start, w_start + static_cast<std::size_t>(m.length(2))};
      if (OverlapsMention(Span{static_cast<std::size_t>(m.position(0)),
                               finding.end})) {
        continue;
      }
      pairs_.push_back(ConceptValuePair{def->concept_id, NegationValue(without),
                                        finding, "P1-without", true});
    }
  }

  bool OverlapsMention(Span span) const {
    for (const ConceptMention &m : mentions_) {
      if (m.span.start < span.end && span.start < m.span.end) return true;
    }
    return false;
  }

  void ConsumeValuesIn(Span span) {
    for (std::size_t vi = 0; vi < values_.size(); ++vi) {
      const Span &s = values_[vi].span;
      if (s.start < span.end && span.start < s.end) value_used_[vi] = true;
    }
  }

  // Table rows: label cell, measured value, optional reference column.
  void TableRows() {
    for (std::size_t mi = 0; mi < mentions_.size(); ++mi) {
      if (concept_used_[mi] || concept_kind_[mi] != SectionKind::kTabular) {
        continue;
      }
      if (value_kinds_[mi] == ValueKind::kQualitative) continue;
      const Span &c = mentions_[mi].span;
      std::size_t limit = text_.find('\n', c.end);
      if (limit == kNpos) limit = text_.size();
      if (mi + 1 < mentions_.size()) {
        limit = std::min(limit, mentions_[mi + 1].span.start);
      }
      std::vector<std::size_t> cells;
      for (std::size_t vi = 0; vi < values_.size(); ++vi) {
        const ValueMention &v = values_[vi];
        if (value_used_[vi] || v.kind != ValueType::kQuantitative) continue;
        if (v.span.start >= c.end && v.span.start < limit) cells.push_back(vi);
      }
      if (cells.empty()) continue;
      std::size_t first = cells[0];
      if (values_[first].span.start - c.end > pack_.max_link_window_chars) {
        continue;
      }
      ValueMention measured = values_[first];
      bool is_reference =
          measured.comparator != Comparator::kNone || measured.IsRange();
      value_used_[first] = true;
      if (!is_reference) {
        if (cells.size() > 1) {
          const ValueMention &ref = values_[cells[1]];
          if (ref.comparator != Comparator::kNone || ref.IsRange()) {
            value_used_[cells[1]] = true;
            if (measured.unit.empty()) measured.unit = ref.unit;
          }
        }
        Emit(mi, measured, "P4-tab", false);
      } else if (pack_.reference_range_discrimination) {
        concept_used_[mi] = true;
      } else {
        Emit(mi, measured, "P4-tab-ref", false);
      }
    }
  }

  // CONCEPT [separators | link words] VALUE
  void ValueCentric() {
    for (std::size_t vi = 0; vi < values_.size(); ++vi) {
      if (value_used_[vi]) continue;
      SectionKind section = value_section_[vi];
      if (section == SectionKind::kTabular || section == SectionKind::kMetadata) {
        continue;
      }
      const ValueMention &v = values_[vi];
      std::size_t after = MentionFrom(v.span.start);
      // Nearest mention ending before the value.
      std::size_t nearest = kNpos;
      for (std::size_t k = after; k > 0; --k) {
        if (mentions_[k - 1].span.end <= v.span.start) {
          nearest = k - 1;
          break;
        }
      }
      if (nearest == kNpos) continue;
      const Span &c = mentions_[nearest].span;
      if (v.span.start - c.end > pack_.max_link_window_chars) continue;
      Gap gap = CheckGap(text_, c.end, v.span.start, pack_);
      if (!gap.ok) continue;

      std::size_t owner = nearest;
      if (!pack_.nearest_concept_linking) {
        // Greedy capture: the earliest open concept of the sentence wins.
        std::size_t sentence = SentenceStart(text_, c.start);
        owner = kNpos;
        for (std::size_t k = MentionFrom(sentence); k <= nearest; ++k) {
          if (!concept_used_[k]) {
            owner = k;
            break;
          }
        }
        if (owner == kNpos) continue;
      } else if (concept_used_[owner]) {
        continue;
      }
      if (!Compatible(value_kinds_[owner], v.kind)) continue;
      value_used_[vi] = true;
      Emit(owner, v, gap.has_words ? "P3-copula" : "P2-sep", false);
    }
  }

  // SEVERITY CONCEPT
  void SeverityFirst() {
    for (std::size_t vi = 0; vi < values_.size(); ++vi) {
      const ValueMention &v = values_[vi];
      if (value_used_[vi] || v.kind != ValueType::kQualitative) continue;
      if (value_section_[vi] == SectionKind::kMetadata) continue;
      std::size_t mi = MentionFrom(v.span.end);
      if (mi >= mentions_.size() || concept_used_[mi] || !Qualitative(mi)) {
        continue;
      }
      std::size_t from = v.span.end;
      std::size_t to = mentions_[mi].span.start;
      if (to == from) continue;
      if (pack_.strict_qualitative_adjacency) {
        bool blank = true;
        for (std::size_t i = from; i < to; ++i) blank &= IsSpaceOrTab(text_[i]);
        if (!blank) continue;
      } else if (!LooseGap(from, to)) {
        continue;
      }
      value_used_[vi] = true;
      Emit(mi, v, "P3-sev", false);
    }
  }

  // Up to three words in the same sentence, spaces and commas around them.
  bool LooseGap(std::size_t from, std::size_t to) const {
    int words = 0;
    std::size_t i = from;
    while (i < to) {
      char c = text_[i];
      if (IsAlpha(c)) {
        while (i < to && IsAlpha(text_[i])) ++i;
        if (++words > 3) return false;
      } else if (IsSpaceOrTab(c) || c == ',') {
        ++i;
      } else {
        return false;
      }
    }
    return true;
  }

  // "CONCEPT, ..., and ... are all SEVERITY"
  void Coordinated() {
    static const std::regex kAll(R"(\b(?:are|were)[ \t]+all[ \t]+$)",
                                 std::regex::icase);
    for (std::size_t mi = 0; mi < mentions_.size(); ++mi) {
      if (concept_used_[mi] || !Qualitative(mi)) continue;
      std::size_t after = SkipBlanks(text_, mentions_[mi].span.end);
      if (after >= text_.size() || text_[after] != ',') continue;
      std::size_t end = SentenceEnd(text_, after);
      for (std::size_t vi = 0; vi < values_.size(); ++vi) {
        const ValueMention &v = values_[vi];
        if (value_used_[vi] || v.kind != ValueType::kQualitative) continue;
        if (v.span.start <= after || v.span.start >= end) continue;
        std::string_view lead = text_.substr(after, v.span.start - after);
        if (!std::regex_search(lead.begin(), lead.end(), kAll)) continue;
        value_used_[vi] = true;
        Emit(mi, v, "P3-coord", false);
        break;
      }
    }
  }

  std::string_view text_;
  const std::vector<ConceptMention> &mentions_;
  const std::vector<ValueMention> &values_;
  const Lexicon &lexicon_;
  const RulePack &pack_;
  std::vector<bool> concept_used_;
  std::vector<bool> value_used_;
  std::vector<SectionKind> concept_kind_;
  std::vector<ValueKind> value_kinds_;
  std::vector<SectionKind> value_section_;
  std::vector<ConceptValuePair> pairs_;
};

}  // namespace

std::string_view ValueTypeName(ValueType type) {
  return type == ValueType::kQuantitative ? "quantitative" : "qualitative";
}

std::vector<ConceptMention> IdentifyConcepts(const EchoReport &report,
                                             const Lexicon &lexicon) {
  const RulePack &pack = lexicon.active_pack();
  const std::string &text = report.raw_text;
  const bool boundary = pack.word_boundary_matching;
  const bool tolerant = pack.tolerant_tokenization;
  const bool cross = pack.cross_line_linking;

  std::vector<const IndexedPhrase *> phrases;
  std::vector<std::pair<const IndexedPhrase *, std::regex>> patterns;
  for (const IndexedPhrase &p : lexicon.index()) {
    switch (p.source) {
      case TermSource::kTerm:
      case TermSource::kAbbreviation:
        phrases.push_back(&p);
        break;
      case TermSource::kTrap:
        if (!boundary) phrases.push_back(&p);
        break;
      case TermSource::kPattern:
        patterns.emplace_back(&p, std::regex(p.phrase, std::regex::ECMAScript |
                                                           std::regex::icase));
        break;
    }
  }

  auto accept = [&](std::size_t start, std::size_t end) {
    if (!LeftBoundary(text, start, tolerant)) return false;
    return !boundary || RightBoundary(text, end, tolerant);
  };

  std::vector<Candidate> candidates;
  std::size_t order = 0;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    if (!IsWordChar(text[pos]) || !LeftBoundary(text, pos, tolerant)) continue;
    char lower = AsciiLower(text[pos]);
    for (const IndexedPhrase *p : phrases) {
      bool ci = p->source != TermSource::kAbbreviation;
      if ((ci ? lower : text[pos]) != p->phrase[0]) continue;
      std::size_t end = MatchPhraseAt(text, pos, p->phrase, ci, cross);
      if (end != kNpos && accept(pos, end)) {
        candidates.push_back({pos, end, order++, p});
      }
    }
  }
  for (const auto &[entry, re] : patterns) {
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
         it != std::sregex_iterator(); ++it) {
      std::size_t start = static_cast<std::size_t>(it->position());
      std::size_t end = start + static_cast<std::size_t>(it->length());
      if (end > start && accept(start, end)) {
        candidates.push_back({start, end, order++, entry});
      }
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &a, const Candidate &b) {
              if (a.start != b.start) return a.start < b.start;
              if (a.end != b.end) return a.end > b.end;
              return a.order < b.order;
            });
  std::vector<ConceptMention> out;
  std::size_t covered = 0;
  for (const Candidate &c : candidates) {
    if (c.start < covered) continue;
    covered = c.end;
    out.push_back(ConceptMention{c.entry->concept_id, Span{c.start, c.end},
                                 text.substr(c.start, c.end - c.start),
                                 KindAt(report, c.start), c.entry->source});
  }
  return out;
}

std::vector<ValueMention> IdentifyValues(const EchoReport &report,
                                         const ValueScanOptions &options) {
  const std::string &text = report.raw_text;
  const bool tolerant = options.tolerant_tokenization;
  std::vector<ValueMention> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (IsDigit(c) || c == '>' || c == '<' || c == '?') {
      std::size_t next = i + 1;
      std::optional<ValueMention> v = ScanNumber(text, i, tolerant, &next);
      if (v) {
        if (KindAt(report, i) != SectionKind::kMetadata) out.push_back(*v);
        i = v->span.end;
        continue;
      }
      if (IsDigit(c)) {
        // Skip the rest of an unreadable numeric token.
        std::size_t j = i;
        while (j < text.size() && (IsWordChar(text[j]) || text[j] == '.')) {
          if (tolerant && j > i && Seam(text[j - 1], text[j])) break;
          ++j;
        }
        i = std::max(j, i + 1);
        continue;
      }
      ++i;
      continue;
    }
    if (IsAlpha(c) && (i == 0 || !IsWordChar(text[i - 1]))) {
      if (auto m = MatchSeverityAt(text, i)) {
        ValueMention v;
        v.span = Span{i, i + m->length};
        v.kind = ValueType::kQualitative;
        v.qualitative_label = m->reading.label;
        v.descriptor = m->reading.descriptor;
        if (KindAt(report, i) != SectionKind::kMetadata) out.push_back(v);
        i += m->length;
        continue;
      }
      // Step over the word, stopping at a letter/digit seam when tolerant.
      std::size_t j = i;
      while (j < text.size() && IsWordChar(text[j])) {
        if (tolerant && j > i && Seam(text[j - 1], text[j])) break;
        ++j;
      }
      i = j;
      continue;
    }
    ++i;
  }
  return out;
}

std::vector<ConceptValuePair> LinkPairs(
    const EchoReport &report, const std::vector<ConceptMention> &mentions,
    const std::vector<ValueMention> &values, const Lexicon &lexicon) {
  return Linker(report, mentions, values, lexicon).Run();
}

std::map<std::string, ConceptValuePair> SelectFinal(
    const std::vector<ConceptValuePair> &pairs) {
  std::map<std::string, ConceptValuePair> out;
  for (const ConceptValuePair &p : pairs) {
    auto it = out.find(p.concept_id);
    if (it == out.end()) {
      out.emplace(p.concept_id, p);
    } else if (p.concept_span.start >= it->second.concept_span.start) {
      it->second = p;
    }
  }
  return out;
}

ExtractionResult ExtractReport(const EchoReport &report,
                               const Lexicon &lexicon) {
  ExtractionResult result;
  result.report_id = report.report_id;
  std::vector<ConceptMention> mentions = IdentifyConcepts(report, lexicon);
  std::vector<ValueMention> values = IdentifyValues(
      report, ValueScanOptions{lexicon.active_pack().tolerant_tokenization});
  result.all_pairs = LinkPairs(report, mentions, values, lexicon);
  result.final_pairs = SelectFinal(result.all_pairs);
  return result;
}

std::string ExtractionHeader() {
  return "report_id\tconcept_id\tkind\tvalue_min\tvalue_max\tunit\t"
         "qualitative_label\tstart\tend\tpattern_id\n";
}

std::string SerializeExtractions(const std::vector<ExtractionResult> &results) {
  std::string out = ExtractionHeader();
  for (const ExtractionResult &r : results) {
    for (const ConceptValuePair &p : r.all_pairs) {
      const ValueMention &v = p.value;
      bool quant = v.kind == ValueType::kQuantitative;
      out += r.report_id + "\t" + p.concept_id + "\t" +
             std::string(ValueTypeName(v.kind)) + "\t" +
             (quant ? FormatNumber(v.value_min) : "") + "\t" +
             (quant ? FormatNumber(v.value_max) : "") + "\t" + v.unit + "\t" +
             v.qualitative_label + "\t" + std::to_string(p.concept_span.start) +
             "\t" + std::to_string(p.concept_span.end) + "\t" + p.pattern_id +
             "\n";
    }
  }
  return out;
}

std::map<std::string, std::vector<ConceptValuePair>> ParseExtractions(
    std::string_view text, const std::string &source) {
  std::map<std::string, std::vector<ConceptValuePair>> out;
  bool header_seen = false;
  for (const TsvRecord &rec : ParseTsv(text)) {
    const std::vector<std::string> &f = rec.fields;
    if (!header_seen && !f.empty() && f[0] == "report_id") {
      header_seen = true;
      continue;
    }
    if (f.size() != 10) {
      throw ParseError(source, rec.line, "expected 10 tab-separated fields");
    }
    ConceptValuePair p;
    p.concept_id = f[1];
    p.pattern_id = f[9];
    p.negated_source = p.pattern_id.rfind("P1", 0) == 0;
    ValueMention &v = p.value;
    if (f[2] == "quantitative") {
      auto lo = ParseNumber(f[3]);
      auto hi = ParseNumber(f[4]);
      if (!lo || !hi || *lo > *hi) {
        throw ParseError(source, rec.line, "bad numeric value");
      }
      v.kind = ValueType::kQuantitative;
      v.value_min = *lo;
      v.value_max = *hi;
      v.unit = f[5];
    } else if (f[2] == "qualitative") {
      if (f[6].empty()) {
        throw ParseError(source, rec.line, "qualitative pair without label");
      }
      v.kind = ValueType::kQualitative;
      v.qualitative_label = f[6];
    } else {
      throw ParseError(source, rec.line, "unknown kind '" + f[2] + "'");
    }
    auto start = ParseNumber(f[7]);
    auto end = ParseNumber(f[8]);
    if (!start || !end || *start < 0 || *end < *start) {
      throw ParseError(source, rec.line, "bad span");
    }
    p.concept_span = Span{static_cast<std::size_t>(*start),
                          static_cast<std::size_t>(*end)};
    if (f[0].empty() || p.concept_id.empty()) {
      throw ParseError(source, rec.line, "empty report_id or concept_id");
    }
    out[f[0]].push_back(std::move(p));
  }
  return out;
}

}  // namespace echox
