// Copyright 2026 the maxperim authors
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


#pragma once

#include <ostream>

namespace maxperim {

/// Exit codes of the command-line driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Command-line driver with the subcommands codes, phase1, phase2, solve,
/// enumerate-solve, verify and export. Data goes to `out`, diagnostics and the
/// usage synopsis to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace maxperim
