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

#include "echox/lexicon.h"

#include <algorithm>
#include <regex>

#include "echox/builtin_data.h"
#include "echox/text.h"

namespace echox {

namespace {

std::vector<std::string> SplitList(std::string_view field, char sep) {
  std::vector<std::string> out;
  if (Trim(field).empty()) return out;
  for (const std::string &part : Split(field, sep)) {
    std::string t = Trim(part);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

bool ParseFlagValue(std::string_view value, const std::string &source,
                    int line) {
  std::string v = ToLower(Trim(value));
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ParseError(source, line, "invalid boolean '" + std::string(value) + "'");
}

char ParseSeparator(std::string_view field, const std::string &source,
                    int line) {
  if (field == "\\t") return '\t';
  if (field == "\\n") return '\n';
  if (field == "space") return ' ';
  if (field.size() == 1) return field[0];
  throw ParseError(source, line,
                   "separator must be one character, \\t, \\n or space");
}

bool IsWhitespaceOnly(std::string_view s) { return Trim(s).empty(); }

}  // namespace

std::string_view ValueKindName(ValueKind kind) {
  switch (kind) {
    case ValueKind::kQuantitative:
      return "quantitative";
    case ValueKind::kQualitative:
      return "qualitative";
    case ValueKind::kBoth:
      return "both";
  }
  return "quantitative";
}

ValueKind ParseValueKind(std::string_view name) {
  std::string n = ToLower(Trim(name));
  if (n == "quantitative") return ValueKind::kQuantitative;
  if (n == "qualitative") return ValueKind::kQualitative;
  if (n == "both") return ValueKind::kBoth;
  throw ValidationError("unknown value kind '" + std::string(name) + "'");
}

bool RulePack::SameBehavior(const RulePack &o) const {
  return added_terms == o.added_terms && separator_chars == o.separator_chars &&
         word_boundary_matching == o.word_boundary_matching &&
         reference_range_discrimination == o.reference_range_discrimination &&
         negation_without_pattern == o.negation_without_pattern &&
         cross_line_linking == o.cross_line_linking &&
         max_link_window_chars == o.max_link_window_chars &&
         exclude_tabular == o.exclude_tabular &&
         tolerant_tokenization == o.tolerant_tokenization &&
         nearest_concept_linking == o.nearest_concept_linking &&
         strict_qualitative_adjacency == o.strict_qualitative_adjacency &&
         post_negation == o.post_negation &&
         distribute_coordinated == o.distribute_coordinated;
}

RulePack BaselinePack() { return RulePack{}; }

RulePack ParseRulePack(std::string_view text, const std::string &source,
                       const RulePack &base) {
  RulePack pack = base;
  pack.pack_id = std::filesystem::path(source).stem().string();
  if (pack.pack_id.empty()) pack.pack_id = "pack";
  for (const TsvRecord &rec : ParseTsv(text)) {
    const auto &f = rec.fields;
    const std::string type = Trim(f[0]);
    auto need = [&](std::size_t n) {
      if (f.size() < n) {
        throw ParseError(source, rec.line,
                         type + " record needs " + std::to_string(n - 1) +
                             " field(s)");
      }
    };
    if (type == "ID") {
      need(2);
      pack.pack_id = Trim(f[1]);
    } else if (type == "TERM") {
      need(3);
      std::string concept_id = Trim(f[1]);
      std::string phrase = NormalizePhrase(f[2]);
      if (concept_id.empty() || phrase.empty()) {
        throw ParseError(source, rec.line, "TERM needs a concept and phrase");
      }
      auto &terms = pack.added_terms[concept_id];
      if (std::find(terms.begin(), terms.end(), phrase) == terms.end()) {
        terms.push_back(phrase);
      }
      pack.term_lines.emplace(concept_id, rec.line);
    } else if (type == "SEP") {
      need(2);
      pack.separator_chars.insert(ParseSeparator(f[1], source, rec.line));
    } else if (type == "FLAG") {
      need(3);
      const std::string name = Trim(f[1]);
      if (name == "max_link_window_chars") {
        auto v = ParseNumber(f[2]);
        if (!v || *v < 1 || *v != static_cast<double>(static_cast<long>(*v))) {
          throw ParseError(source, rec.line,
                           "max_link_window_chars must be a positive integer");
        }
        pack.max_link_window_chars = static_cast<std::size_t>(*v);
        continue;
      }
      bool value = ParseFlagValue(f[2], source, rec.line);
      if (name == "word_boundary_matching") {
        pack.word_boundary_matching = value;
      } else if (name == "reference_range_discrimination") {
        pack.reference_range_discrimination = value;
      } else if (name == "negation_without_pattern") {
        pack.negation_without_pattern = value;
      } else if (name == "cross_line_linking") {
        pack.cross_line_linking = value;
      } else if (name == "exclude_tabular") {
        pack.exclude_tabular = value;
      } else if (name == "tolerant_tokenization") {
        pack.tolerant_tokenization = value;
      } else if (name == "nearest_concept_linking") {
        pack.nearest_concept_linking = value;
      } else if (name == "strict_qualitative_adjacency") {
        pack.strict_qualitative_adjacency = value;
      } else if (name == "post_negation") {
        pack.post_negation = value;
      } else if (name == "distribute_coordinated") {
        pack.distribute_coordinated = value;
      } else {
        throw ParseError(source, rec.line, "unknown flag '" + name + "'");
      }
    } else {
      throw ParseError(source, rec.line, "unknown record type '" + type + "'");
    }
  }
  // ':' and whitespace are always accepted.
  pack.separator_chars.insert({':', ' ', '\t'});
  return pack;
}

RulePack LoadRulePack(const std::filesystem::path &path, const RulePack &base) {
  return ParseRulePack(ReadFile(path), path.string(), base);
}

RulePack BuiltinRulePack(std::string_view name, const RulePack &base) {
  auto text = builtin::RulePackText(name);
  if (!text) {
    throw ValidationError("unknown built-in rule pack '" + std::string(name) +
                          "'");
  }
  return ParseRulePack(*text, std::string(name) + ".pack", base);
}

RulePack RobustPack() { return BuiltinRulePack("robust", BaselinePack()); }

Lexicon Lexicon::Create(std::vector<ConceptDef> concepts, RulePack pack) {
  Lexicon lex;
  if (pack.max_link_window_chars == 0) {
    throw ValidationError("max_link_window_chars must be positive");
  }
  pack.separator_chars.insert({':', ' ', '\t'});

  // Phrase owner, keyed case-insensitively so "LVEF" and "lvef" collide.
  std::unordered_map<std::string, std::string> owner;
  auto claim = [&](const std::string &phrase, const std::string &id) {
    std::string key = NormalizePhrase(phrase);
    auto [it, inserted] = owner.emplace(key, id);
    if (!inserted && it->second != id) {
      throw ValidationError("term '" + phrase + "' is defined under both '" +
                            it->second + "' and '" + id + "'");
    }
  };

  for (std::size_t i = 0; i < concepts.size(); ++i) {
    ConceptDef &c = concepts[i];
    if (c.concept_id.empty()) throw ValidationError("empty concept_id");
    if (!lex.by_id_.emplace(c.concept_id, i).second) {
      throw ValidationError("duplicate concept_id '" + c.concept_id + "'");
    }
    if (c.terms.empty()) {
      throw ValidationError("concept '" + c.concept_id + "' has no terms");
    }
    for (const std::string &t : c.terms) {
      if (IsWhitespaceOnly(t)) {
        throw ValidationError("concept '" + c.concept_id +
                              "' has an empty term");
      }
    }
    if (c.value_kind == ValueKind::kQuantitative && c.expected_units.empty()) {
      throw ValidationError("quantitative concept '" + c.concept_id +
                            "' lists no units");
    }
    for (const std::string &p : c.term_patterns) {
      try {
        std::regex re(p, std::regex::ECMAScript | std::regex::icase);
      } catch (const std::regex_error &) {
        throw ValidationError("concept '" + c.concept_id +
                              "' has an invalid pattern '" + p + "'");
      }
    }
  }

  for (const auto &[id, terms] : pack.added_terms) {
    if (!lex.by_id_.count(id)) {
      std::string where;
      if (auto it = pack.term_lines.find(id); it != pack.term_lines.end()) {
        where = " (" + pack.pack_id + " line " + std::to_string(it->second) +
                ")";
      }
      throw ValidationError("rule pack references unknown concept_id '" + id +
                            "'" + where);
    }
  }

  for (const ConceptDef &c : concepts) {
    for (const std::string &t : c.terms) {
      claim(t, c.concept_id);
      lex.index_.push_back({NormalizePhrase(t), c.concept_id, TermSource::kTerm});
    }
    for (const std::string &a : c.abbreviations) {
      claim(a, c.concept_id);
      lex.index_.push_back({Trim(a), c.concept_id, TermSource::kAbbreviation});
    }
    for (const std::string &t : c.trap_terms) {
      claim(t, c.concept_id);
      lex.index_.push_back({NormalizePhrase(t), c.concept_id, TermSource::kTrap});
    }
    for (const std::string &p : c.term_patterns) {
      lex.index_.push_back({p, c.concept_id, TermSource::kPattern});
    }
  }
  for (std::size_t i = 0; i < lex.index_.size(); ++i) {
    if (lex.index_[i].source == TermSource::kTerm) {
      lex.by_phrase_.emplace(lex.index_[i].phrase, lex.by_id_[lex.index_[i].concept_id]);
    }
  }
  lex.concepts_ = std::move(concepts);
  lex.pack_ = std::move(pack);
  return lex;
}

const ConceptDef *Lexicon::Find(std::string_view concept_id) const {
  auto it = by_id_.find(std::string(concept_id));
  return it == by_id_.end() ? nullptr : &concepts_[it->second];
}

const ConceptDef *Lexicon::FindByPhrase(std::string_view phrase) const {
  auto it = by_phrase_.find(NormalizePhrase(phrase));
  return it == by_phrase_.end() ? nullptr : &concepts_[it->second];
}

std::vector<std::string> Lexicon::EvaluatedConceptIds() const {
  std::vector<std::string> out;
  for (const ConceptDef &c : concepts_) {
    if (!c.optional) out.push_back(c.concept_id);
  }
  return out;
}

Lexicon ParseLexicon(std::string_view text, const std::string &source) {
  std::vector<ConceptDef> concepts;
  std::unordered_map<std::string, int> id_lines;
  std::unordered_map<std::string, std::pair<std::string, int>> phrase_lines;
  for (const TsvRecord &rec : ParseTsv(text)) {
    const auto &f = rec.fields;
    if (f.size() < 7 || f.size() > 9) {
      throw ParseError(source, rec.line,
                       "expected 7 to 9 tab-separated fields, got " +
                           std::to_string(f.size()));
    }
    ConceptDef c;
    c.concept_id = Trim(f[0]);
    c.canonical_name = Trim(f[1]);
    try {
      c.value_kind = ParseValueKind(f[2]);
    } catch (const ValidationError &e) {
      throw ParseError(source, rec.line, e.what());
    }
    c.expected_units = SplitList(f[3], ',');
    std::string opt = Trim(f[4]);
    if (opt != "0" && opt != "1") {
      throw ParseError(source, rec.line, "optional must be 0 or 1");
    }
    c.optional = opt == "1";
    c.terms = SplitList(f[5], '|');
    c.abbreviations = SplitList(f[6], '|');
    if (f.size() > 7) c.trap_terms = SplitList(f[7], '|');
    if (f.size() > 8) c.term_patterns = SplitList(f[8], '|');
    if (c.concept_id.empty()) throw ParseError(source, rec.line, "empty concept_id");
    if (auto [it, ok] = id_lines.emplace(c.concept_id, rec.line); !ok) {
      throw ParseError(source, rec.line,
                       "duplicate concept_id '" + c.concept_id +
                           "' (first defined on line " +
                           std::to_string(it->second) + ")");
    }
    if (c.terms.empty()) {
      throw ParseError(source, rec.line,
                       "concept '" + c.concept_id + "' has an empty terms list");
    }
    auto claim = [&](const std::string &phrase) {
      auto [it, ok] = phrase_lines.emplace(NormalizePhrase(phrase),
                                           std::make_pair(c.concept_id, rec.line));
      if (!ok && it->second.first != c.concept_id) {
        throw ParseError(source, rec.line,
                         "duplicate term '" + phrase + "' under '" +
                             it->second.first + "' (line " +
                             std::to_string(it->second.second) + ") and '" +
                             c.concept_id + "'");
      }
    };
    for (const auto &t : c.terms) claim(t);
    for (const auto &t : c.abbreviations) claim(t);
    for (const auto &t : c.trap_terms) claim(t);
    concepts.push_back(std::move(c));
  }
  try {
    return Lexicon::Create(std::move(concepts), BaselinePack());
  } catch (const ValidationError &e) {
    throw ParseError(source, 0, e.what());
  }
}

Lexicon LoadLexicon(const std::filesystem::path &path) {
  return ParseLexicon(ReadFile(path), path.string());
}

Lexicon DefaultLexicon() {
  return ParseLexicon(builtin::DefaultLexiconText(), "default.lexicon");
}

std::string SerializeLexicon(const Lexicon &lexicon) {
  std::string out =
      "# concept_id\tcanonical_name\tvalue_kind\tunits\toptional\tterms\t"
      "abbreviations\ttraps\tpatterns\n";
  for (const ConceptDef &c : lexicon.concepts()) {
    std::vector<std::string> fields = {
        c.concept_id,
        c.canonical_name,
        std::string(ValueKindName(c.value_kind)),
        Join(c.expected_units, ","),
        c.optional ? "1" : "0",
        Join(c.terms, "|"),
        Join(c.abbreviations, "|"),
        Join(c.trap_terms, "|"),
        Join(c.term_patterns, "|")};
    out += Join(fields, "\t");
    out += '\n';
  }
  return out;
}

Lexicon MergeRulePack(const Lexicon &lexicon, const RulePack &pack) {
  std::vector<ConceptDef> concepts = lexicon.concepts();
  for (const auto &[id, phrases] : pack.added_terms) {
    auto it = std::find_if(concepts.begin(), concepts.end(),
                           [&](const ConceptDef &c) { return c.concept_id == id; });
    if (it == concepts.end()) {
      std::string where;
      if (auto l = pack.term_lines.find(id); l != pack.term_lines.end()) {
        where = " (" + pack.pack_id + " line " + std::to_string(l->second) + ")";
      }
      throw ValidationError("rule pack references unknown concept_id '" + id +
                            "'" + where);
    }
    for (const std::string &p : phrases) {
      std::string norm = NormalizePhrase(p);
      bool present = std::any_of(
          it->terms.begin(), it->terms.end(),
          [&](const std::string &t) { return NormalizePhrase(t) == norm; });
      if (!present) it->terms.push_back(norm);
    }
  }
  return Lexicon::Create(std::move(concepts), pack);
}

}  // namespace echox
