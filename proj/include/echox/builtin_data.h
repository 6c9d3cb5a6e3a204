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

// Text of the files under data/, compiled in at build time.

#ifndef ECHOX_BUILTIN_DATA_H_
#define ECHOX_BUILTIN_DATA_H_

#include <optional>
#include <string_view>

namespace echox::builtin {

std::string_view DefaultLexiconText();
std::string_view ProfilesText();
std::string_view TemplatesText();
// "robust" or a file stem under data/packs/.
std::optional<std::string_view> RulePackText(std::string_view name);

}  // namespace echox::builtin

#endif  // ECHOX_BUILTIN_DATA_H_
