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

#ifndef CODEINTERP_LOG_H_
#define CODEINTERP_LOG_H_

#include <string_view>

// Thin logging facade. Translation units that include libtorch must not
// include spdlog directly: libtorch bundles a different fmt release.
namespace codeinterp::log {

void Debug(std::string_view message);
void Info(std::string_view message);
void Warn(std::string_view message);
void Error(std::string_view message);

// "debug", "info", "warn", "error" or "off". Throws kInvalidArgument.
void SetLevel(std::string_view level);

}  // namespace codeinterp::log

#endif  // CODEINTERP_LOG_H_
