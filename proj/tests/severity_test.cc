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

#include "echox/severity.h"

namespace echox {
namespace {

TEST_CASE("grade words normalize to canonical labels") {
  CHECK(CanonicalSeverityLabel("mildly") == "mild");
  CHECK(CanonicalSeverityLabel("Moderately") == "moderate");
  CHECK(CanonicalSeverityLabel("trivial") == "trace");
  CHECK(CanonicalSeverityLabel("severe") == "severe");
  CHECK(CanonicalSeverityLabel("none") == "no");
}

TEST_CASE("compound grades") {
  CHECK(CanonicalSeverityLabel("mild to moderate") == "mild-to-moderate");
  CHECK(CanonicalSeverityLabel("mildly to moderately reduced") ==
        "mild-to-moderate");
  CHECK(CanonicalSeverityLabel("moderate-to-severe") == "moderate-to-severe");
  CHECK(CanonicalSeverityLabel("mild-to-moderate") ==
        CanonicalSeverityLabel("mildly to moderately reduced"));
}

TEST_CASE("descriptors are kept apart from the grade") {
  auto r = NormalizeSeverity("mildly dilated");
  REQUIRE(r.has_value());
  CHECK(r->label == "mild");
  CHECK(r->descriptor == "dilated");
  auto bare = NormalizeSeverity("dilated");
  REQUIRE(bare.has_value());
  CHECK(bare->label == "dilated");
}

TEST_CASE("matching at a position respects word ends") {
  std::string text = "There is trace mitral regurgitation";
  auto m = MatchSeverityAt(text, 9);
  REQUIRE(m.has_value());
  CHECK(m->reading.label == "trace");
  CHECK(m->length == 5);
  CHECK_FALSE(MatchSeverityAt("normally", 0).has_value());
  CHECK_FALSE(MatchSeverityAt("nothing", 0).has_value());
}

TEST_CASE("label vocabulary") {
  for (const char *l : {"no", "normal", "trace", "mild", "mild-to-moderate",
                        "moderate", "moderate-to-severe", "severe"}) {
    CHECK(IsKnownSeverityLabel(l));
  }
  CHECK_FALSE(IsKnownSeverityLabel("huge"));
}

}  // namespace
}  // namespace echox
