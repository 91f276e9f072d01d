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

#ifndef CODEINTERP_TOOLS_CLI_SUPPORT_H_
#define CODEINTERP_TOOLS_CLI_SUPPORT_H_

#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "codeinterp/errors.h"
#include "json.hpp"

namespace codeinterp::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitData = 3,
  kExitDivergence = 4,
  kExitLocked = 5,
};

// Bad invocation: missing or malformed flags and config keys.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int ExitCodeFor(ErrorCode code);

// Reads a YAML (or JSON) config file into a JSON tree. Unquoted scalars
// become booleans, nulls or numbers where they parse as such.
nlohmann::json LoadConfigFile(const fs::path& path);

// Flags that override keys of one config section. Each flag maps to a JSON
// pointer below the section; values given on the command line win.
class FlagSet {
 public:
  enum class Kind { kString, kInt, kDouble, kBool, kStringList, kDoubleList };

  FlagSet(CLI::App* app, std::string section);

  void Add(const std::string& flag, const std::string& key, Kind kind,
           const std::string& help);

  const std::string& section() const { return section_; }
  CLI::App* app() const { return app_; }

  // Global seed and the config section merged with command-line overrides.
  nlohmann::json Resolve() const;

 private:
  struct Entry {
    std::string flag;
    std::string key;
    Kind kind;
    std::vector<std::string> values;
    bool set = false;
  };

  CLI::App* app_;
  std::string section_;
  std::string config_path_;
  std::optional<int64_t> seed_;
  std::deque<Entry> entries_;
};

// Typed access to a resolved section with usage errors naming both the flag
// and the config key.
class Section {
 public:
  Section(nlohmann::json root, std::string name)
      : root_(std::move(root)), name_(std::move(name)) {}

  const nlohmann::json& root() const { return root_; }
  const nlohmann::json& body() const;
  uint64_t seed() const;

  bool Has(const std::string& key) const;
  std::string String(const std::string& key) const;
  std::optional<std::string> OptString(const std::string& key) const;
  int64_t Int(const std::string& key, int64_t fallback) const;
  std::optional<int64_t> OptInt(const std::string& key) const;
  double Double(const std::string& key, double fallback) const;
  bool Bool(const std::string& key, bool fallback) const;
  std::vector<std::string> Strings(const std::string& key) const;
  nlohmann::json Object(const std::string& key) const;

  // An existing input path; throws UsageError otherwise.
  fs::path Input(const std::string& key) const;

 private:
  const nlohmann::json* Find(const std::string& key) const;
  [[noreturn]] void Fail(const std::string& key, const std::string& what) const;

  nlohmann::json root_;
  std::string name_;
};

// Output directory of one run. Holds an exclusive lock file for its
// lifetime and writes the run manifest, the only file with a timestamp.
class RunDir {
 public:
  explicit RunDir(fs::path dir);
  ~RunDir();
  RunDir(const RunDir&) = delete;
  RunDir& operator=(const RunDir&) = delete;

  const fs::path& dir() const { return dir_; }

  void AddInput(const std::string& name, const fs::path& path);
  void AddOutput(const fs::path& path);
  void WriteManifest(const fs::path& path, const std::string& command,
                     const Section& config,
                     const nlohmann::ordered_json& summary) const;

 private:
  fs::path dir_;
  fs::path lock_;
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::object();
  std::vector<std::string> outputs_;
};

std::string HexDigest(uint64_t value);

// FNV-1a over a file's bytes, or over the sorted file list of a directory.
std::string ContentDigest(const fs::path& path);

}  // namespace codeinterp::cli

#endif  // CODEINTERP_TOOLS_CLI_SUPPORT_H_
