// Copyright 2026 The codeinterp Authors.
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

#ifndef CODEINTERP_TOOLS_CLI_COMMANDS_H_
#define CODEINTERP_TOOLS_CLI_COMMANDS_H_

#include <deque>
#include <memory>

#include "CLI11.hpp"
#include "support.h"

namespace codeinterp::cli {

// Registers every subcommand on `app`. The returned flag sets must outlive
// parsing.
std::deque<std::unique_ptr<FlagSet>> RegisterCommands(CLI::App& app);

}  // namespace codeinterp::cli

#endif  // CODEINTERP_TOOLS_CLI_COMMANDS_H_
