// Copyright 2026 The RAPM Authors.
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


// The rapm command line: build, retrieve, split-ood, audit, eval, rag-run,
// bench-recall.
//
// Every setting can come from a JSON object given with --config, keyed by the
// flag name without dashes ("hnsw-m": 16). Flags override the file and
// unknown keys are rejected.

#ifndef RAPM_CLI_H_
#define RAPM_CLI_H_

#include <iosfwd>

namespace rapm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rapm

#endif  // RAPM_CLI_H_
