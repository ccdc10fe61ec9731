// Copyright 2026 The MistForge Authors
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

#ifndef MISTFORGE_TOOLS_CLI_H_
#define MISTFORGE_TOOLS_CLI_H_

#include <string>
#include <vector>

namespace mistforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTransport = 3;

inline constexpr unsigned long long kDefaultSeed = 7;

// Runs one command line (without the program name) and returns the exit
// code. Logs go to stderr.
int Run(const std::vector<std::string>& args);

}  // namespace mistforge::cli

#endif  // MISTFORGE_TOOLS_CLI_H_
