// Copyright 2026 The AutoDis Authors. All Rights Reserved.
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

#ifndef AUTODIS_COMMANDS_H_
#define AUTODIS_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace autodis {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;

// Entry point behind the `autodis` binary. `args` excludes the program name.
// Subcommands: train, eval, gradcheck, synth, export, ablate. Any
// `--section.key=value` argument overrides the config file.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace autodis

#endif  // AUTODIS_COMMANDS_H_
