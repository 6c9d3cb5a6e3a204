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

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "echox/cli.h"
#include "echox/text.h"

namespace echox {
namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string &name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int RunQuiet(const RunConfig &config, std::string *err_text = nullptr) {
  std::ostringstream out, err;
  int code = Run(config, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

RunConfig Generate(const fs::path &dir, const std::string &profile, std::size_t n) {
  RunConfig c;
  c.command = "generate";
  c.profile = profile;
  c.n = n;
  c.seed = 42;
  c.out_path = dir.string();
  return c;
}

bool HasFinding(const std::vector<Finding> &f, const std::string &subject,
                const std::string &needle) {
  for (const Finding &x : f) {
    if (x.subject == subject && x.severity == "error" &&
        x.message.find(needle) != std::string::npos) {
      return true;
    }
  }
  return false;
}

TEST_CASE("generate writes the corpus files") {
  TempDir t("echox_cli_gen");
  REQUIRE(RunQuiet(Generate(t.path / "mayo", "mayo", 20)) == kExitOk);
  CHECK(fs::exists(t.path / "mayo" / "manifest.tsv"));
  CHECK(fs::exists(t.path / "mayo" / "gold.tsv"));
  CHECK(fs::exists(t.path / "mayo" / "quirks.tsv"));
  std::size_t files = 0;
  for (auto &unused : fs::directory_iterator(t.path / "mayo" / "reports")) {
    (void)unused;
    ++files;
  }
  CHECK(files == 20);
  std::string first = ReadFile(t.path / "mayo" / "gold.tsv");
  REQUIRE(RunQuiet(Generate(t.path / "again", "mayo", 20)) == kExitOk);
  CHECK(ReadFile(t.path / "again" / "gold.tsv") == first);
}

TEST_CASE("full pipeline separates fidelity from robust on mayo LVEF") {
  TempDir t("echox_cli_pipe");
  fs::path corpus = t.path / "mayo";
  REQUIRE(RunQuiet(Generate(corpus, "mayo", 200)) == kExitOk);
  std::vector<std::string> tagged;
  for (std::string mode : {"fidelity", "robust"}) {
    RunConfig x;
    x.command = "extract";
    x.mode = mode;
    x.lexicon_path = "default";
    x.corpus_dir = corpus.string();
    x.out_path = (t.path / (mode + ".tsv")).string();
    x.threads = 4;
    REQUIRE(RunQuiet(x) == kExitOk);
    RunConfig e;
    e.command = "evaluate";
    e.mode = mode;
    e.extractions_path = x.out_path;
    e.gold_path = (corpus / "gold.tsv").string();
    e.out_path = (t.path / (mode + ".outcomes.tsv")).string();
    REQUIRE(RunQuiet(e) == kExitOk);
    tagged.push_back(mode + "=" + e.out_path);
  }
  RunConfig s;
  s.command = "score";
  s.outcomes = tagged;
  s.out_path = (t.path / "table.tsv").string();
  s.metrics_path = (t.path / "metrics.tsv").string();
  REQUIRE(RunQuiet(s) == kExitOk);
  std::string table = ReadFile(s.out_path);
  std::size_t at = table.find("left ventricular ejection fraction\t");
  REQUIRE(at != std::string::npos);
  std::string row = table.substr(at, table.find('\n', at) - at);
  auto cells = Split(row, '\t');
  REQUIRE(cells.size() == 7);
  double fidelity_recall = *ParseNumber(cells[1]);
  double robust_recall = *ParseNumber(cells[4]);
  CHECK(fidelity_recall + 20 < robust_recall);
  CHECK(fs::exists(s.metrics_path));
}

TEST_CASE("validation findings") {
  RunConfig e;
  e.command = "evaluate";
  e.extractions_path = "x.tsv";
  e.out_path = "o.tsv";
  auto f = ValidateInputs(e);
  CHECK(HasFinding(f, "--gold", "--gold"));
  for (const Finding &x : f) CHECK_FALSE(x.hint.empty());

  TempDir t("echox_cli_valid");
  fs::path gold = t.path / "gold.tsv";
  WriteFileAtomic(gold,
                  "report_id\tconcept_id\tpresent\tkind\tvalue_min\tvalue_max\t"
                  "unit\tqualitative_label\n"
                  "r1\tlvef\t1\tquantitative\t55\t55\t%\t\n"
                  "r1\tlvef\t1\tquantitative\t60\t60\t%\t\n");
  e.gold_path = gold.string();
  CHECK(HasFinding(ValidateInputs(e), "--gold", "r1/lvef"));

  fs::path pack = t.path / "bad.pack";
  WriteFileAtomic(pack, "ID\tbad\nSEP\t;\nTERM\tnot_a_concept\tfoo\n");
  RunConfig x;
  x.command = "extract";
  x.corpus_dir = t.path.string();
  x.out_path = (t.path / "x.tsv").string();
  x.rulepack_paths = {pack.string()};
  CHECK(HasFinding(ValidateInputs(x), "--rulepack", ":3"));

  RunConfig unknown;
  unknown.command = "dance";
  CHECK(HasFinding(ValidateInputs(unknown), "command", "dance"));
  RunConfig gen;
  gen.command = "generate";
  CHECK(HasFinding(ValidateInputs(gen), "--profile", "--profile"));
  CHECK(HasFinding(ValidateInputs(gen), "--n", "--n"));
}

TEST_CASE("exit codes") {
  TempDir t("echox_cli_exit");
  RunConfig bad;
  bad.command = "generate";
  CHECK(RunQuiet(bad) == kExitValidation);

  RunConfig unknown_profile = Generate(t.path / "c", "atlantis", 5);
  CHECK(RunQuiet(unknown_profile) == kExitValidation);

  // A corpus whose manifest points at a missing report is an I/O failure.
  WriteFileAtomic(t.path / "broken" / "manifest.tsv", "r1\twcm\treports/r1.txt\n");
  RunConfig x;
  x.command = "extract";
  x.corpus_dir = (t.path / "broken").string();
  x.out_path = (t.path / "x.tsv").string();
  CHECK(RunQuiet(x) == kExitIo);
  CHECK_FALSE(fs::exists(x.out_path));

  // A malformed manifest names its file and line.
  WriteFileAtomic(t.path / "broken" / "manifest.tsv", "r1\twcm\n");
  std::string err;
  CHECK(RunQuiet(x, &err) == kExitValidation);
  CHECK(err.find("manifest.tsv") != std::string::npos);
  CHECK(err.find("1") != std::string::npos);
}

TEST_CASE("failed runs leave earlier outputs alone") {
  TempDir t("echox_cli_keep");
  fs::path out = t.path / "x.tsv";
  WriteFileAtomic(out, "previous");
  WriteFileAtomic(t.path / "c" / "manifest.tsv", "r1\twcm\treports/r1.txt\n");
  RunConfig x;
  x.command = "extract";
  x.corpus_dir = (t.path / "c").string();
  x.out_path = out.string();
  CHECK(RunQuiet(x) == kExitIo);
  CHECK(ReadFile(out) == "previous");
}

TEST_CASE("quirks prints the catalog") {
  RunConfig q;
  q.command = "quirks";
  std::ostringstream out, err;
  CHECK(Run(q, out, err) == kExitOk);
  CHECK(out.str().find("Calculated left ventricular ejection fraction; 65 %") !=
        std::string::npos);
}

TEST_CASE("lexicon comes from the environment when no flag is given") {
  TempDir t("echox_cli_env");
  fs::path lex = t.path / "tiny.lexicon";
  WriteFileAtomic(lex,
                  "lvef\tleft ventricular ejection fraction\tquantitative\t%\t0\t"
                  "ejection fraction\tLVEF\n");
  setenv("ECHOX_LEXICON", lex.string().c_str(), 1);
  RunConfig c;
  CHECK(ResolveLexicon(c).concepts().size() == 1);
  c.lexicon_path = "default";
  CHECK(ResolveLexicon(c).concepts().size() == 27);
  unsetenv("ECHOX_LEXICON");
  RunConfig r;
  r.mode = "robust";
  CHECK(ResolveLexicon(r).active_pack().word_boundary_matching);
  r.rulepack_paths = {"exclude_tabular"};
  CHECK(ResolveLexicon(r).active_pack().exclude_tabular);
}

#ifdef ECHOX_BINARY
TEST_CASE("the echox binary reports usage errors with status 1") {
  std::string bin = ECHOX_BINARY;
  CHECK(WEXITSTATUS(std::system((bin + " >/dev/null 2>&1").c_str())) == 1);
  CHECK(WEXITSTATUS(std::system((bin + " dance >/dev/null 2>&1").c_str())) == 1);
  CHECK(WEXITSTATUS(std::system((bin + " quirks >/dev/null").c_str())) == 0);
  CHECK(WEXITSTATUS(std::system(
            (bin + " extract --corpus /nonexistent --out /tmp/x 2>/dev/null")
                .c_str())) == 1);
}
#endif

}  // namespace
}  // namespace echox
