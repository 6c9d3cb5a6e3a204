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

// Batch driver behind the `echox` tool.
//
//   generate  --profile P --n N --seed S --out DIR
//   extract   --corpus DIR --out FILE [--lexicon L] [--mode M] [--rulepack R]...
//   evaluate  --extractions FILE --gold FILE --out FILE [--lexicon L]
//   score     --outcomes TAG=FILE... --out FILE [--metrics FILE] [--lexicon L]
//   quirks    [--out FILE]
//
// Exit status: 0 success, 1 invalid input or configuration, 2 I/O failure.
// Every output is built in memory and then written with a rename, so a
// failed run leaves earlier files in place.

#ifndef ECHOX_CLI_H_
#define ECHOX_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "echox/lexicon.h"

namespace echox {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

struct RunConfig {
  std::string command;
  std::string lexicon_path;                 // empty: $ECHOX_LEXICON, else "default"
  std::vector<std::string> rulepack_paths;  // built-in name or file, in order
  std::string corpus_dir;
  std::string gold_path;
  std::string out_path;
  std::string profile;
  std::optional<std::size_t> n;
  std::uint64_t seed = 42;
  std::string mode = "fidelity";
  std::string profiles_path;  // empty: built-in profiles
  // "quirk_id[@concept_id]=p", applied over the profile.
  std::vector<std::string> quirk_overrides;
  std::string extractions_path;
  std::vector<std::string> outcomes;  // "tag=path"
  std::string metrics_path;
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct Finding {
  std::string severity;  // "error" or "warning"
  std::string subject;   // flag or file the finding is about
  std::string message;
  std::string hint;
};

// Checks that `config` can run without touching any file.
std::vector<Finding> ValidateInputs(const RunConfig &config);

// Lexicon for the configuration: base lexicon, the robust pack in robust
// mode, then each rule pack in order.
Lexicon ResolveLexicon(const RunConfig &config);

int Run(const RunConfig &config, std::ostream &out, std::ostream &err);

}  // namespace echox

#endif  // ECHOX_CLI_H_
