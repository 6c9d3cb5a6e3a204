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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "echox/lexicon.h"
#include "echox/text.h"

namespace echox {
namespace {

// Target concept names as listed in the published concept table.
const std::vector<std::string> kTableOneNames = {
    "aortic valve mean gradient",
    "aortic valve orifice area",
    "aortic valve regurgitation",
    "aortic valve regurgitation peak velocity",
    "aortic valve stenosis",
    "e/e prime ratio",
    "inter-ventricular septum dimension at end diastole",
    "left atrium size at end systole",
    "left ventricular dimension at end diastole",
    "left ventricular dimension at end systole",
    "left ventricular size",
    "left ventricular ejection fraction",
    "left ventricular posterior wall thickness at end diastole",
    "mitral valve mean gradient",
    "mitral valve orifice area",
    "mitral valve regurgitation",
    "mitral valve regurgitation peak velocity",
    "mitral valve stenosis",
    "pulmonary artery pressure",
    "right atrial pressure",
    "tricuspid valve mean gradient",
    "tricuspid valve orifice area",
    "tricuspid valve regurgitation",
    "tricuspid valve regurgitation peak velocity",
};

const char kOneConcept[] =
    "lvef\tleft ventricular ejection fraction\tquantitative\t%\t0\t"
    "ejection fraction\tLVEF\n";

TEST_CASE("minimal lexicon file") {
  Lexicon lex = ParseLexicon(kOneConcept, "one.lexicon");
  REQUIRE(lex.concepts().size() == 1);
  CHECK(lex.concepts()[0].concept_id == "lvef");
  CHECK(lex.FindByPhrase("Ejection Fraction") == lex.Find("lvef"));
  CHECK(lex.Find("nope") == nullptr);
}

TEST_CASE("shipped lexicon holds 27 concepts, 24 evaluated, in table order") {
  Lexicon lex = DefaultLexicon();
  CHECK(lex.concepts().size() == 27);
  std::vector<std::string> ids = lex.EvaluatedConceptIds();
  REQUIRE(ids.size() == kTableOneNames.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    CHECK(lex.Find(ids[i])->canonical_name == kTableOneNames[i]);
  }
  std::size_t optional = 0;
  for (const ConceptDef &c : lex.concepts()) optional += c.optional ? 1 : 0;
  CHECK(optional == 3);
  CHECK(lex.Find("av_max_pressure_gradient") != nullptr);
}

TEST_CASE("a term claimed by two concepts is rejected naming both") {
  std::string text =
      "first_id\tone\tquantitative\t%\t0\tlvef\t\n"
      "second_id\ttwo\tquantitative\t%\t0\tejection fraction|lvef\t\n";
  try {
    ParseLexicon(text, "dup.lexicon");
    FAIL("expected an error");
  } catch (const std::exception &e) {
    std::string msg = e.what();
    CHECK(msg.find("first_id") != std::string::npos);
    CHECK(msg.find("second_id") != std::string::npos);
  }
}

TEST_CASE("malformed lexicon lines report their line number") {
  try {
    ParseLexicon("# c\nlvef\tname\tbogus\t%\t0\tx\t\n", "bad.lexicon");
    FAIL("expected an error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
  } catch (const ValidationError &) {
  }
}

TEST_CASE("empty pack merge only changes the pack id") {
  Lexicon lex = DefaultLexicon();
  RulePack empty = BaselinePack();
  empty.pack_id = "empty";
  Lexicon merged = MergeRulePack(lex, empty);
  CHECK(merged.concepts() == lex.concepts());
  CHECK(merged.active_pack().SameBehavior(lex.active_pack()));
  CHECK(merged.active_pack().pack_id == "empty");
}

TEST_CASE("site packs") {
  Lexicon lex = DefaultLexicon();
  Lexicon mayo = MergeRulePack(lex, BuiltinRulePack("mayo", lex.active_pack()));
  CHECK(mayo.active_pack().separator_chars.count(';') == 1);
  CHECK(lex.active_pack().separator_chars.count(';') == 0);

  CHECK(lex.FindByPhrase("peak aortic gradient") == nullptr);
  Lexicon wcm = MergeRulePack(lex, BuiltinRulePack("wcm", lex.active_pack()));
  const ConceptDef *c = wcm.FindByPhrase("peak aortic gradient");
  REQUIRE(c != nullptr);
  CHECK(c->concept_id == "av_max_pressure_gradient");

  CHECK_THROWS_AS(BuiltinRulePack("nowhere", lex.active_pack()),
                  ValidationError);
}

TEST_CASE("robust pack enables every corrective flag") {
  RulePack p = RobustPack();
  CHECK(p.word_boundary_matching);
  CHECK(p.reference_range_discrimination);
  CHECK(p.negation_without_pattern);
  CHECK(p.cross_line_linking);
  CHECK(p.tolerant_tokenization);
  CHECK(p.nearest_concept_linking);
  CHECK(p.strict_qualitative_adjacency);
  CHECK(p.post_negation);
  CHECK(p.distribute_coordinated);
  for (char c : {';', '~', '&', ':'}) CHECK(p.separator_chars.count(c) == 1);
  RulePack b = BaselinePack();
  CHECK_FALSE(b.word_boundary_matching);
  CHECK_FALSE(b.reference_range_discrimination);
}

TEST_CASE("rule pack flags override and terms accumulate") {
  RulePack base = BaselinePack();
  RulePack p = ParseRulePack(
      "ID\tx\nFLAG\tword_boundary_matching\t1\nSEP\t~\n"
      "TERM\tlvef\tpump function\n",
      "x.pack", base);
  CHECK(p.word_boundary_matching);
  CHECK(p.separator_chars.count('~') == 1);
  CHECK(p.separator_chars.count(':') == 1);
  CHECK(p.term_lines.at("lvef") == 4);
  RulePack q = ParseRulePack("FLAG\tword_boundary_matching\t0\n", "y.pack", p);
  CHECK_FALSE(q.word_boundary_matching);
  CHECK(q.added_terms.at("lvef").size() == 1);
  CHECK_THROWS_AS(ParseRulePack("FLAG\tno_such_flag\t1\n", "z.pack", base),
                  ParseError);
}

TEST_CASE("pack terms for unknown concepts cite the pack line") {
  RulePack p =
      ParseRulePack("ID\tbad\n# c\nTERM\tnot_a_concept\tfoo\n", "bad.pack",
                    BaselinePack());
  try {
    MergeRulePack(DefaultLexicon(), p);
    FAIL("expected an error");
  } catch (const ValidationError &e) {
    std::string msg = e.what();
    CHECK(msg.find("not_a_concept") != std::string::npos);
    CHECK(msg.find("line 3") != std::string::npos);
  }
}

TEST_CASE("default lexicon round-trips through its text form") {
  Lexicon lex = DefaultLexicon();
  Lexicon again = ParseLexicon(SerializeLexicon(lex), "round.lexicon");
  CHECK(again.concepts() == lex.concepts());
  CHECK(again.active_pack().SameBehavior(lex.active_pack()));
  CHECK(SerializeLexicon(again) == SerializeLexicon(lex));
}

TEST_CASE("trap phrases are indexed under their own source") {
  Lexicon lex = DefaultLexicon();
  auto has_trap = [](const Lexicon &l) {
    return std::any_of(l.index().begin(), l.index().end(),
                       [](const IndexedPhrase &p) {
                         return p.source == TermSource::kTrap;
                       });
  };
  CHECK(has_trap(lex));
  const ConceptDef *e = lex.Find("e_e_prime_ratio");
  CHECK(std::find(e->trap_terms.begin(), e->trap_terms.end(), "e:a") !=
        e->trap_terms.end());
  CHECK(std::find(e->terms.begin(), e->terms.end(), "e:a") == e->terms.end());
}

}  // namespace
}  // namespace echox
