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

#include <iostream>

#include "CLI11.hpp"
#include "echox/cli.h"

namespace {

void AddLexiconFlags(CLI::App *cmd, echox::RunConfig &config) {
  cmd->add_option("--lexicon", config.lexicon_path,
                  "lexicon file or 'default' (falls back to $ECHOX_LEXICON)");
  cmd->add_option("--mode", config.mode, "fidelity or robust")
      ->check(CLI::IsMember({"fidelity", "robust"}));
  cmd->add_option("--rulepack", config.rulepack_paths,
                  "built-in pack name or pack file; repeatable, applied in order");
}

}  // namespace

int main(int argc, char **argv) {
  echox::RunConfig config;
  CLI::App app{"echox: concept-value extraction from echocardiography reports"};
  app.require_subcommand(1);

  CLI::App *generate = app.add_subcommand("generate", "write a synthetic corpus");
  generate->add_option("--profile", config.profile, "site profile tag");
  generate->add_option("--n", config.n, "number of reports");
  generate->add_option("--seed", config.seed, "random seed");
  generate->add_option("--out", config.out_path, "output directory");
  generate->add_option("--profiles", config.profiles_path, "profiles file");
  generate->add_option("--quirk-rate", config.quirk_overrides,
                       "override quirk_id[@concept_id]=p; repeatable");
  generate->add_option("--lexicon", config.lexicon_path, "lexicon file");

  CLI::App *extract = app.add_subcommand("extract", "extract concept-value pairs");
  extract->add_option("--corpus", config.corpus_dir, "corpus directory");
  extract->add_option("--out", config.out_path, "extraction output file");
  extract->add_option("--threads", config.threads, "worker threads (0 = auto)");
  AddLexiconFlags(extract, config);

  CLI::App *evaluate = app.add_subcommand("evaluate", "classify against gold");
  evaluate->add_option("--extractions", config.extractions_path,
                       "extraction output file");
  evaluate->add_option("--gold", config.gold_path, "gold annotation file");
  evaluate->add_option("--out", config.out_path, "outcomes file");
  AddLexiconFlags(evaluate, config);

  CLI::App *score = app.add_subcommand("score", "render the metrics table");
  score->add_option("--outcomes", config.outcomes,
                    "tag=outcomes file; repeatable, one table column group each");
  score->add_option("--out", config.out_path, "table file");
  score->add_option("--metrics", config.metrics_path, "metrics dump file");
  AddLexiconFlags(score, config);

  CLI::App *quirks = app.add_subcommand("quirks", "print the quirk catalog");
  quirks->add_option("--out", config.out_path, "write to a file instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? echox::kExitOk : echox::kExitValidation;
  }
  config.command = app.get_subcommands().front()->get_name();
  return echox::Run(config, std::cout, std::cerr);
}
