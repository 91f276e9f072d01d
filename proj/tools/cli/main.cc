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

// Command-line front end: codeinterp <command> [flags]. Run with --help for
// the list of commands.

#include <iostream>

#include "CLI11.hpp"
#include "codeinterp/errors.h"
#include "codeinterp/log.h"
#include "codeinterp/version.h"
#include "commands.h"
#include "support.h"

int main(int argc, char** argv) {
  namespace cli = codeinterp::cli;
  CLI::App app{"Clause classification and machine-interpretability scoring for building codes",
               "codeinterp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(codeinterp::Version()));
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "debug, info, warn, error or off")
      ->capture_default_str();
  app.parse_complete_callback([&log_level] { codeinterp::log::SetLevel(log_level); });
  auto flag_sets = cli::RegisterCommands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const codeinterp::Error& e) {
    std::cerr << "error: " << codeinterp::ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return cli::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return cli::kExitInternal;
  }
  return cli::kExitOk;
}
