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

#include "echox/cli.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include "echox/builtin_data.h"
#include "echox/corpusgen.h"
#include "echox/docmodel.h"
#include "echox/evaluator.h"
#include "echox/extractor.h"

namespace echox {
namespace {

namespace fs = std::filesystem;

const std::set<std::string> kCommands = {"generate", "extract", "evaluate",
                                         "score", "quirks"};

std::string LexiconSpec(const RunConfig &config) {
  if (!config.lexicon_path.empty()) return config.lexicon_path;
  if (const char *env = std::getenv("ECHOX_LEXICON"); env && *env) return env;
  return "default";
}

bool IsBuiltinPack(const std::string &name) {
  return builtin::RulePackText(name).has_value();
}

std::pair<std::string, std::string> SplitTagged(const std::string &spec) {
  std::size_t eq = spec.find('=');
  if (eq == std::string::npos) return {fs::path(spec).stem().string(), spec};
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

void Need(std::vector<Finding> &findings, bool ok, const std::string &flag,
          const std::string &what) {
  if (!ok) {
    findings.push_back({"error", flag, flag + " is required for " + what,
                        "pass " + flag + " <value>"});
  }
}

void NeedFile(std::vector<Finding> &findings, const std::string &path,
              const std::string &flag) {
  if (path.empty()) return;
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    findings.push_back({"error", flag, "cannot read '" + path + "'",
                        "check that " + flag + " names an existing file"});
  }
}

// Parses "quirk[@concept]=p" into the profile.
void ApplyOverride(SiteProfile &profile, const std::string &spec) {
  std::size_t eq = spec.find('=');
  if (eq == std::string::npos) {
    throw ValidationError("quirk override '" + spec + "' is not quirk=p");
  }
  std::string key = spec.substr(0, eq);
  if (!IsKnownQuirk(key.substr(0, key.find('@')))) {
    throw ValidationError("unknown quirk_id in override '" + spec + "'");
  }
  auto p = ParseNumber(spec.substr(eq + 1));
  if (!p || *p < 0 || *p > 1) {
    throw ValidationError("quirk override '" + spec + "' needs p in [0, 1]");
  }
  profile.quirk_rates[key] = *p;
}

SiteProfile ResolveProfile(const RunConfig &config) {
  std::map<std::string, SiteProfile> all =
      config.profiles_path.empty()
          ? BuiltinProfiles()
          : ParseProfiles(ReadFile(config.profiles_path), config.profiles_path);
  auto it = all.find(config.profile);
  if (it == all.end()) {
    throw ValidationError("unknown site profile '" + config.profile + "'");
  }
  SiteProfile profile = it->second;
  for (const std::string &o : config.quirk_overrides) ApplyOverride(profile, o);
  return profile;
}

int Generate(const RunConfig &config, std::ostream &out) {
  SiteProfile profile = ResolveProfile(config);
  Lexicon lexicon = ResolveLexicon(config);
  std::vector<GeneratedReport> reports = GenerateCorpus(
      profile, *config.n, config.seed, lexicon, *BuiltinTemplates());
  fs::path dir(config.out_path);
  for (const GeneratedReport &r : reports) {
    WriteFileAtomic(dir / "reports" / (r.report_id + ".txt"), r.text);
  }
  WriteFileAtomic(dir / "gold.tsv", SerializeCorpusGold(reports));
  WriteFileAtomic(dir / "quirks.tsv", SerializeQuirks(reports));
  // The manifest goes last: a corpus is only usable once it exists.
  WriteFileAtomic(dir / "manifest.tsv", SerializeManifest(CorpusManifest(reports)));
  out << "generated " << reports.size() << " reports in " << dir.string() << "\n";
  return kExitOk;
}

std::vector<ExtractionResult> ExtractAll(const std::vector<EchoReport> &reports,
                                         const Lexicon &lexicon,
                                         std::size_t threads) {
  std::vector<ExtractionResult> results(reports.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, reports.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&]() {
    for (std::size_t i = next++; i < reports.size() && !failed; i = next++) {
      try {
        results[i] = ExtractReport(reports[i], lexicon);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (std::thread &t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

int Extract(const RunConfig &config, std::ostream &out) {
  Lexicon lexicon = ResolveLexicon(config);
  std::vector<EchoReport> reports = LoadCorpus(config.corpus_dir);
  std::vector<ExtractionResult> results =
      ExtractAll(reports, lexicon, config.threads);
  WriteFileAtomic(config.out_path, SerializeExtractions(results));
  std::size_t pairs = 0;
  for (const ExtractionResult &r : results) pairs += r.all_pairs.size();
  out << "extracted " << pairs << " pairs from " << results.size()
      << " reports\n";
  return kExitOk;
}

int Evaluate(const RunConfig &config, std::ostream &out) {
  Lexicon lexicon = ResolveLexicon(config);
  std::vector<GoldAnnotation> gold =
      ParseGold(ReadFile(config.gold_path), config.gold_path);
  auto pairs = ParseExtractions(ReadFile(config.extractions_path),
                                config.extractions_path);
  // Reports without pairs do not appear in extraction output, so the report
  // list comes from gold first, then from any extra extracted reports.
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const GoldAnnotation &g : gold) {
    if (seen.insert(g.report_id).second) ids.push_back(g.report_id);
  }
  for (const auto &[id, unused] : pairs) {
    if (seen.insert(id).second) ids.push_back(id);
  }
  std::vector<ExtractionResult> results;
  for (const std::string &id : ids) {
    ExtractionResult r;
    r.report_id = id;
    if (auto it = pairs.find(id); it != pairs.end()) r.all_pairs = it->second;
    r.final_pairs = SelectFinal(r.all_pairs);
    results.push_back(std::move(r));
  }
  std::vector<Outcome> outcomes =
      ClassifyCorpus(results, gold, lexicon.EvaluatedConceptIds());
  WriteFileAtomic(config.out_path, SerializeOutcomes(outcomes));
  out << "classified " << outcomes.size() << " cells\n";
  return kExitOk;
}

int Score(const RunConfig &config, std::ostream &out) {
  Lexicon lexicon = ResolveLexicon(config);
  std::vector<std::string> ids = lexicon.EvaluatedConceptIds();
  std::vector<std::vector<Metrics>> corpora;
  for (const std::string &spec : config.outcomes) {
    auto [tag, path] = SplitTagged(spec);
    corpora.push_back(Aggregate(ParseOutcomes(ReadFile(path), path), tag, ids));
  }
  std::vector<TableRow> rows;
  for (const std::string &id : ids) {
    rows.push_back({id, lexicon.Find(id)->canonical_name});
  }
  std::string table = RenderTable(corpora, rows);
  std::string dump = SerializeMetrics(corpora);
  WriteFileAtomic(config.out_path, table);
  if (!config.metrics_path.empty()) WriteFileAtomic(config.metrics_path, dump);
  out << table;
  return kExitOk;
}

int Quirks(const RunConfig &config, std::ostream &out) {
  std::string catalog = SerializeCatalog();
  if (config.out_path.empty()) {
    out << catalog;
  } else {
    WriteFileAtomic(config.out_path, catalog);
  }
  return kExitOk;
}

}  // namespace

Lexicon ResolveLexicon(const RunConfig &config) {
  std::string spec = LexiconSpec(config);
  Lexicon lexicon = spec == "default" ? DefaultLexicon() : LoadLexicon(spec);
  if (config.mode == "robust") {
    lexicon = MergeRulePack(lexicon, BuiltinRulePack("robust", lexicon.active_pack()));
  } else if (config.mode != "fidelity") {
    throw ValidationError("--mode must be fidelity or robust, not '" +
                          config.mode + "'");
  }
  for (const std::string &pack : config.rulepack_paths) {
    RulePack next = IsBuiltinPack(pack)
                        ? BuiltinRulePack(pack, lexicon.active_pack())
                        : LoadRulePack(pack, lexicon.active_pack());
    lexicon = MergeRulePack(lexicon, next);
  }
  return lexicon;
}

std::vector<Finding> ValidateInputs(const RunConfig &config) {
  std::vector<Finding> findings;
  const std::string &cmd = config.command;
  if (!kCommands.count(cmd)) {
    findings.push_back({"error", "command", "unknown command '" + cmd + "'",
                        "use generate, extract, evaluate, score or quirks"});
    return findings;
  }
  if (config.mode != "fidelity" && config.mode != "robust") {
    findings.push_back({"error", "--mode", "unknown mode '" + config.mode + "'",
                        "use --mode fidelity or --mode robust"});
  }

  if (cmd == "generate") {
    Need(findings, !config.profile.empty(), "--profile", cmd);
    Need(findings, config.n.has_value(), "--n", cmd);
    Need(findings, !config.out_path.empty(), "--out", cmd);
    if (config.n && *config.n == 0) {
      findings.push_back({"error", "--n", "--n must be at least 1",
                          "pass a positive report count"});
    }
    NeedFile(findings, config.profiles_path, "--profiles");
    if (!config.profile.empty() && findings.empty()) {
      try {
        ResolveProfile(config);
      } catch (const std::exception &e) {
        findings.push_back({"error", "--profile", e.what(),
                            "use one of wcm, mayo, nw, mimic or fix the profiles file"});
      }
    }
  } else if (cmd == "extract") {
    Need(findings, !config.corpus_dir.empty(), "--corpus", cmd);
    Need(findings, !config.out_path.empty(), "--out", cmd);
    if (!config.corpus_dir.empty()) {
      NeedFile(findings, (fs::path(config.corpus_dir) / "manifest.tsv").string(),
               "--corpus");
    }
  } else if (cmd == "evaluate") {
    Need(findings, !config.extractions_path.empty(), "--extractions", cmd);
    Need(findings, !config.gold_path.empty(), "--gold", cmd);
    Need(findings, !config.out_path.empty(), "--out", cmd);
    NeedFile(findings, config.extractions_path, "--extractions");
    NeedFile(findings, config.gold_path, "--gold");
    if (!config.gold_path.empty() && fs::is_regular_file(config.gold_path)) {
      try {
        std::vector<GoldAnnotation> gold =
            ParseGold(ReadFile(config.gold_path), config.gold_path);
        for (const std::string &key : DuplicateGoldKeys(gold)) {
          findings.push_back({"error", "--gold",
                              config.gold_path + ": duplicate gold row " + key,
                              "keep one row per (report, concept)"});
        }
      } catch (const std::exception &e) {
        findings.push_back({"error", "--gold", e.what(), "fix the gold file"});
      }
    }
  } else if (cmd == "score") {
    Need(findings, !config.outcomes.empty(), "--outcomes", cmd);
    Need(findings, !config.out_path.empty(), "--out", cmd);
    for (const std::string &spec : config.outcomes) {
      NeedFile(findings, SplitTagged(spec).second, "--outcomes");
    }
  }

  // Lexicon and rule packs matter to every command except quirks.
  if (cmd == "quirks") return findings;
  std::string spec = LexiconSpec(config);
  if (spec != "default") NeedFile(findings, spec, "--lexicon");
  std::optional<Lexicon> lexicon;
  try {
    lexicon = spec == "default" ? DefaultLexicon() : LoadLexicon(spec);
  } catch (const std::exception &e) {
    findings.push_back({"error", "--lexicon", e.what(), "fix the lexicon file"});
  }
  for (const std::string &pack : config.rulepack_paths) {
    if (IsBuiltinPack(pack)) continue;
    std::error_code ec;
    if (!fs::is_regular_file(pack, ec)) {
      findings.push_back({"error", "--rulepack",
                          "'" + pack + "' is neither a built-in pack nor a file",
                          "use robust, wcm, mayo, nw, mimic, exclude_tabular or a path"});
      continue;
    }
    try {
      RulePack parsed = ParseRulePack(ReadFile(pack), pack, BaselinePack());
      if (!lexicon) continue;
      for (const auto &[id, terms] : parsed.added_terms) {
        if (lexicon->Find(id)) continue;
        auto line = parsed.term_lines.find(id);
        std::string where =
            pack + (line == parsed.term_lines.end()
                        ? ""
                        : ":" + std::to_string(line->second));
        findings.push_back({"error", "--rulepack",
                            where + ": unknown concept_id '" + id + "'",
                            "use a concept_id defined in the lexicon"});
      }
    } catch (const std::exception &e) {
      findings.push_back({"error", "--rulepack", e.what(), "fix the rule pack"});
    }
  }
  return findings;
}

int Run(const RunConfig &config, std::ostream &out, std::ostream &err) {
  std::vector<Finding> findings = ValidateInputs(config);
  bool blocked = false;
  for (const Finding &f : findings) {
    err << f.severity << ": " << f.message << " (hint: " << f.hint << ")\n";
    blocked = blocked || f.severity == "error";
  }
  if (blocked) return kExitValidation;
  try {
    if (config.command == "generate") return Generate(config, out);
    if (config.command == "extract") return Extract(config, out);
    if (config.command == "evaluate") return Evaluate(config, out);
    if (config.command == "score") return Score(config, out);
    return Quirks(config, out);
  } catch (const IoError &e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError &e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace echox
