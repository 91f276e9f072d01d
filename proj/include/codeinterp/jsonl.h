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

#ifndef CODEINTERP_JSONL_H_
#define CODEINTERP_JSONL_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace codeinterp {

// Blank lines are skipped; a malformed line throws kParse with its number.
std::vector<nlohmann::json> ReadJsonl(const std::filesystem::path& path);

void WriteJsonl(const std::filesystem::path& path,
                const std::vector<nlohmann::ordered_json>& rows);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

nlohmann::json ReadJsonFile(const std::filesystem::path& path);

// Plain text, one entry per line, trailing '\r' stripped.
std::vector<std::string> ReadLines(const std::filesystem::path& path);

// Quotes a CSV field when it holds a comma, quote or line break.
std::string CsvField(std::string_view field);

}  // namespace codeinterp

#endif  // CODEINTERP_JSONL_H_
