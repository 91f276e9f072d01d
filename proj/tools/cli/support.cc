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

#include "support.h"

#include <fcntl.h>
#include <unistd.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>

#include "codeinterp/classify.h"
#include "codeinterp/jsonl.h"
#include "codeinterp/random.h"
#include "codeinterp/version.h"

namespace codeinterp::cli {
namespace {

nlohmann::json ScalarToJson(const YAML::Node& node) {
  const std::string& s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted
  if (s.empty() || s == "~" || s == "null" || s == "Null" || s == "NULL") {
    return nullptr;
  }
  if (s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "false" || s == "False" || s == "FALSE") return false;
  int64_t i = 0;
  auto [ip, iec] = std::from_chars(s.data(), s.data() + s.size(), i);
  if (iec == std::errc() && ip == s.data() + s.size()) return i;
  double d = 0;
  auto [dp, dec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (dec == std::errc() && dp == s.data() + s.size()) return d;
  return s;
}

nlohmann::json YamlToJson(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return ScalarToJson(node);
    case YAML::NodeType::Sequence: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& item : node) arr.push_back(YamlToJson(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      nlohmann::json obj = nlohmann::json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = YamlToJson(kv.second);
      return obj;
    }
  }
  return nullptr;
}

nlohmann::json::json_pointer Pointer(const std::string& key) {
  return nlohmann::json::json_pointer("/" + key);
}

int64_t ParseInt(const std::string& flag, const std::string& text) {
  int64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw UsageError(flag + ": expected an integer, got '" + text + "'");
  }
  return v;
}

double ParseDouble(const std::string& flag, const std::string& text) {
  double v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw UsageError(flag + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kRatio:
      return kExitUsage;
    case ErrorCode::kDivergedTraining:
      return kExitDivergence;
    case ErrorCode::kLocked:
      return kExitLocked;
    default:
      return kExitData;
  }
}

nlohmann::json LoadConfigFile(const fs::path& path) {
  if (!fs::is_regular_file(path)) {
    throw UsageError("config file not found: " + path.string());
  }
  try {
    nlohmann::json j = YamlToJson(YAML::LoadFile(path.string()));
    if (j.is_null()) return nlohmann::json::object();
    if (!j.is_object()) throw UsageError(path.string() + ": top level must be a mapping");
    return j;
  } catch (const YAML::Exception& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

FlagSet::FlagSet(CLI::App* app, std::string section)
    : app_(app), section_(std::move(section)) {
  app_->add_option("--config", config_path_, "YAML config file");
  app_->add_option("--seed", seed_, "Global seed (overrides the config's seed)");
}

void FlagSet::Add(const std::string& flag, const std::string& key, Kind kind,
                  const std::string& help) {
  Entry& e = entries_.emplace_back(Entry{flag, key, kind, {}, false});
  const std::string text = help + " [" + section_ + "." + key + "]";
  if (kind == Kind::kBool) {
    app_->add_flag_callback(
        flag, [&e] { e.set = true; }, text);
    return;
  }
  CLI::Option* opt = app_->add_option(flag, e.values, text);
  if (kind == Kind::kStringList || kind == Kind::kDoubleList) {
    opt->delimiter(',');
  } else {
    opt->expected(1);
  }
}

nlohmann::json FlagSet::Resolve() const {
  nlohmann::json file =
      config_path_.empty() ? nlohmann::json::object() : LoadConfigFile(config_path_);
  nlohmann::json section = file.value(section_, nlohmann::json::object());
  if (!section.is_object()) {
    throw UsageError("config section '" + section_ + "' must be a mapping");
  }
  for (const Entry& e : entries_) {
    if (e.kind == Kind::kBool) {
      if (e.set) section[Pointer(e.key)] = true;
      continue;
    }
    if (e.values.empty()) continue;
    nlohmann::json value;
    switch (e.kind) {
      case Kind::kString:
        value = e.values.front();
        break;
      case Kind::kInt:
        value = ParseInt(e.flag, e.values.front());
        break;
      case Kind::kDouble:
        value = ParseDouble(e.flag, e.values.front());
        break;
      case Kind::kStringList:
        value = e.values;
        break;
      case Kind::kDoubleList:
        value = nlohmann::json::array();
        for (const auto& v : e.values) value.push_back(ParseDouble(e.flag, v));
        break;
      case Kind::kBool:
        break;
    }
    section[Pointer(e.key)] = value;
  }
  nlohmann::json root;
  if (seed_) {
    root["seed"] = *seed_;
  } else {
    const nlohmann::json seed = file.value("seed", nlohmann::json(0));
    if (!seed.is_number_integer()) throw UsageError("seed must be an integer");
    root["seed"] = seed;
  }
  if (root["seed"].get<int64_t>() < 0) throw UsageError("seed must be non-negative");
  root[section_] = section;
  return root;
}

const nlohmann::json& Section::body() const { return root_.at(name_); }

uint64_t Section::seed() const { return root_.at("seed").get<uint64_t>(); }

const nlohmann::json* Section::Find(const std::string& key) const {
  const auto ptr = Pointer(key);
  if (!body().contains(ptr)) return nullptr;
  const nlohmann::json& v = body().at(ptr);
  return v.is_null() ? nullptr : &v;
}

void Section::Fail(const std::string& key, const std::string& what) const {
  std::string flag = key.substr(key.rfind('/') + 1);
  std::replace(flag.begin(), flag.end(), '_', '-');
  std::string dotted = key;
  std::replace(dotted.begin(), dotted.end(), '/', '.');
  throw UsageError("--" + flag + " (config key " + name_ + "." + dotted + "): " + what);
}

bool Section::Has(const std::string& key) const { return Find(key) != nullptr; }

std::string Section::String(const std::string& key) const {
  const auto v = OptString(key);
  if (!v) Fail(key, "required");
  return *v;
}

std::optional<std::string> Section::OptString(const std::string& key) const {
  const nlohmann::json* v = Find(key);
  if (!v) return std::nullopt;
  if (v->is_string()) return v->get<std::string>();
  if (v->is_number()) return v->dump();
  Fail(key, "expected a string");
}

int64_t Section::Int(const std::string& key, int64_t fallback) const {
  return OptInt(key).value_or(fallback);
}

std::optional<int64_t> Section::OptInt(const std::string& key) const {
  const nlohmann::json* v = Find(key);
  if (!v) return std::nullopt;
  if (!v->is_number_integer()) Fail(key, "expected an integer");
  return v->get<int64_t>();
}

double Section::Double(const std::string& key, double fallback) const {
  const nlohmann::json* v = Find(key);
  if (!v) return fallback;
  if (!v->is_number()) Fail(key, "expected a number");
  return v->get<double>();
}

bool Section::Bool(const std::string& key, bool fallback) const {
  const nlohmann::json* v = Find(key);
  if (!v) return fallback;
  if (!v->is_boolean()) Fail(key, "expected true or false");
  return v->get<bool>();
}

std::vector<std::string> Section::Strings(const std::string& key) const {
  const nlohmann::json* v = Find(key);
  if (!v) return {};
  std::vector<std::string> out;
  if (!v->is_array()) Fail(key, "expected a list");
  for (const auto& item : *v) {
    if (item.is_string()) {
      out.push_back(item.get<std::string>());
    } else if (item.is_number()) {
      out.push_back(item.dump());
    } else {
      Fail(key, "expected a list of strings");
    }
  }
  return out;
}

nlohmann::json Section::Object(const std::string& key) const {
  const nlohmann::json* v = Find(key);
  if (!v) return nlohmann::json::object();
  if (!v->is_object()) Fail(key, "expected a mapping");
  return *v;
}

fs::path Section::Input(const std::string& key) const {
  const fs::path p = String(key);
  if (!fs::exists(p)) Fail(key, "no such file or directory: " + p.string());
  return p;
}

RunDir::RunDir(fs::path dir) : dir_(std::move(dir)) {
  if (dir_.empty()) dir_ = ".";
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir_.string() + ": " + ec.message());
  lock_ = dir_ / ".codeinterp.lock";
  const int fd = ::open(lock_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    const int err = errno;
    const fs::path held = lock_;
    lock_.clear();
    if (err == EEXIST) {
      throw Error(ErrorCode::kLocked,
                  "output directory is in use by another run (" + held.string() +
                      " exists; remove it if no run is active)");
    }
    throw Error(ErrorCode::kIo, "cannot create " + held.string() + ": " + std::strerror(err));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] const ssize_t n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

RunDir::~RunDir() {
  if (!lock_.empty()) {
    std::error_code ec;
    fs::remove(lock_, ec);
  }
}

void RunDir::AddInput(const std::string& name, const fs::path& path) {
  inputs_[name] = {{"path", path.string()}, {"fnv1a64", ContentDigest(path)}};
}

void RunDir::AddOutput(const fs::path& path) { outputs_.push_back(path.string()); }

void RunDir::WriteManifest(const fs::path& path, const std::string& command,
                           const Section& config,
                           const nlohmann::ordered_json& summary) const {
  nlohmann::ordered_json versions;
  versions["codeinterp"] = Version();
  versions["libtorch"] = TorchVersion();
  const nlohmann::ordered_json core = CoreLibraryVersions();
  for (const auto& [k, v] : core.items()) versions[k] = v;
  versions["cli11"] = CLI11_VERSION;

  nlohmann::ordered_json m;
  m["command"] = command;
  m["config_hash"] = HexDigest(Fnv1a64(config.root().dump()));
  m["seed"] = config.seed();
  m["config"] = config.root();
  m["inputs"] = inputs_;
  m["outputs"] = outputs_;
  m["summary"] = summary;
  m["versions"] = versions;
  m["created_at"] = UtcTimestamp();
  WriteFile(path, m.dump(2) + "\n");
}

std::string HexDigest(uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string ContentDigest(const fs::path& path) {
  if (!fs::is_directory(path)) return HexDigest(Fnv1a64(ReadFile(path)));
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(path)) {
    if (e.is_regular_file() && e.path().filename() != ".codeinterp.lock") {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::string listing;
  for (const fs::path& f : files) {
    listing += fs::relative(f, path).generic_string() + " " +
               HexDigest(Fnv1a64(ReadFile(f))) + "\n";
  }
  return HexDigest(Fnv1a64(listing));
}

}  // namespace codeinterp::cli
