// Copyright 2026 The Simforge Authors
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

#ifndef SIMFORGE_CLI_HPP
#define SIMFORGE_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace simforge::cli {

/// Exit codes: 0 success (and score below --fail-at when set), 1 score at
/// or above --fail-at, 2 usage error, 3 I/O or provider error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailThreshold = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Run one invocation. `args` excludes the program name. Reports and
/// diagnostics go to `out`/`err`; the process-level main is a thin wrapper
/// so tests can drive the full CLI in-process.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace simforge::cli

#endif // SIMFORGE_CLI_HPP
