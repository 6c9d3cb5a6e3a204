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

#include <filesystem>
#include <regex>

#include "echox/corpusgen.h"

namespace echox {
namespace {

TEST_CASE("SplitMix64 reference outputs") {
  // Published reference sequence for seed 0.
  SplitMix64 rng(0);
  CHECK(rng.Next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.Next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.Next() == 0x06C45D188009454FULL);
  SplitMix64 u(123);
  for (int i = 0; i < 1000; ++i) {
    double x = u.Uniform01();
    CHECK((x >= 0.0 && x < 1.0));
    auto k = u.UniformInt(3, 5);
    CHECK((k >= 3 && k <= 5));
  }
}

TEST_CASE("same seed, same corpus") {
  auto a = GenerateCorpus(BuiltinProfile("wcm"), 1, 7);
  auto b = GenerateCorpus(BuiltinProfile("wcm"), 1, 7);
  CHECK(a[0].text == b[0].text);
  CHECK(SerializeCorpusGold(a) == SerializeCorpusGold(b));
  auto c = GenerateCorpus(BuiltinProfile("wcm"), 1, 8);
  CHECK(c[0].text != a[0].text);
}

TEST_CASE("gold has one row per evaluated concept") {
  auto reports = GenerateCorpus(BuiltinProfile("nw"), 5, 3);
  for (const GeneratedReport &r : reports) {
    CHECK(r.gold.size() == 24);
    for (const GoldAnnotation &g : r.gold) {
      CHECK(g.present == g.expected.has_value());
      CHECK(g.report_id == r.report_id);
    }
  }
  CHECK(reports[0].report_id == "nw-0001");
}

// Counts LVEF lines written with a semicolon straight from the text.
TEST_CASE("mayo semicolon rate shows up in the text") {
  SiteProfile mayo = BuiltinProfile("mayo");
  CHECK(mayo.QuirkRate("semicolon_separator", "lvef") == doctest::Approx(0.45));
  auto reports = GenerateCorpus(mayo, 200, 42);
  std::regex lvef_line(
      R"((ejection fraction|\bLVEF\b|\bEF\b)([^0-9\n]{0,20})[0-9])");
  std::size_t lines = 0, semicolon = 0;
  for (const GeneratedReport &r : reports) {
    for (auto it = std::sregex_iterator(r.text.begin(), r.text.end(), lvef_line);
         it != std::sregex_iterator(); ++it) {
      ++lines;
      if ((*it)[2].str().find(';') != std::string::npos) ++semicolon;
    }
  }
  REQUIRE(lines > 100);
  double fraction = static_cast<double>(semicolon) / lines;
  CHECK(fraction >= 0.35);
  CHECK(fraction <= 0.55);
}

TEST_CASE("mimic reports are free text") {
  auto reports = GenerateCorpus(BuiltinProfile("mimic"), 50, 1);
  for (const GeneratedReport &r : reports) {
    EchoReport doc = SegmentReport(r.report_id, r.site_tag, r.text);
    for (const Section &s : doc.sections) CHECK(s.kind != SectionKind::kTabular);
  }
}

TEST_CASE("evidence spans carry their value text") {
  for (const char *site : {"wcm", "mayo", "nw", "mimic"}) {
    auto reports = GenerateCorpus(BuiltinProfile(site), 30, 9);
    for (const GeneratedReport &r : reports) {
      for (const Evidence &e : r.evidence) {
        REQUIRE(e.span.end <= r.text.size());
        std::string piece = r.text.substr(e.span.start, e.span.size());
        CHECK(ToLower(piece).find(ToLower(e.value_text)) != std::string::npos);
      }
    }
  }
}

// Quotes are checked verbatim against the source article shipped in the repo.
TEST_CASE("catalog examples contain their quotes, and the quotes are verbatim") {
  std::string article =
      ReadFile(std::filesystem::path(ECHOX_SOURCE_DIR) / "paper.md");
  std::size_t quoted = 0;
  for (const QuirkInfo &q : QuirkCatalog()) {
    CHECK(q.example_sentence.find(q.paper_quote) != std::string::npos);
    if (q.paper_quote.empty()) continue;
    ++quoted;
    INFO(q.quirk_id);
    CHECK(article.find(q.paper_quote) != std::string::npos);
  }
  CHECK(quoted >= 12);
  CHECK(IsKnownQuirk("semicolon_separator"));
  CHECK_FALSE(IsKnownQuirk("typo"));
}

TEST_CASE("profile parsing errors") {
  CHECK_THROWS_AS(ParseProfiles("FREQ\twcm\tlvef\t0.5\n", "p"), ParseError);
  CHECK_THROWS_AS(ParseProfiles("SITE\tx\ttabular\t1\t0\nQUIRK\tx\tnope\t0.5\n", "p"),
                  ValidationError);
  CHECK_THROWS_AS(ParseProfiles("SITE\tx\ttabular\t1\t0\nFREQ\tx\tlvef\t1.5\n", "p"),
                  ValidationError);
  CHECK_THROWS_AS(ParseProfiles("SITE\tx\tgrid\t1\t0\n", "p"), ParseError);
  CHECK_THROWS_AS(BuiltinProfile("nowhere"), ValidationError);
  auto p = ParseProfiles(
      "SITE\tx\tnarrative\t2\t1\nQUIRK\tx\tmissing_space\t0.2\n"
      "QUIRK\tx\tmissing_space@lvef\t0.9\n",
      "p");
  CHECK(p.at("x").QuirkRate("missing_space", "lvef") == doctest::Approx(0.9));
  CHECK(p.at("x").QuirkRate("missing_space", "lv_size") == doctest::Approx(0.2));
  CHECK(p.at("x").QuirkRate("free_text_only", "") == 0);
}

TEST_CASE("generation preconditions") {
  CHECK_THROWS_AS(GenerateCorpus(BuiltinProfile("wcm"), 0, 1), ValidationError);
  SiteProfile bad = BuiltinProfile("wcm");
  bad.concept_frequencies["not_a_concept"] = 0.5;
  CHECK_THROWS_AS(GenerateCorpus(bad, 1, 1), ValidationError);
}

TEST_CASE("corpus files") {
  auto reports = GenerateCorpus(BuiltinProfile("wcm"), 3, 2);
  auto manifest = CorpusManifest(reports);
  REQUIRE(manifest.size() == 3);
  CHECK(manifest[2].relative_path == "reports/wcm-0003.txt");
  std::string quirks = SerializeQuirks(reports);
  CHECK(quirks.rfind("# report_id\tquirk_id\tconcept_id\n", 0) == 0);
  std::string catalog = SerializeCatalog();
  CHECK(catalog.find("semicolon_separator") != std::string::npos);
}

}  // namespace
}  // namespace echox
