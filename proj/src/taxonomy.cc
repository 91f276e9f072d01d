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

#include "codeinterp/taxonomy.h"

#include <string>

#include "codeinterp/errors.h"

namespace codeinterp {

namespace {

constexpr std::array<std::string_view, kNumCategories> kNames = {
    "direct", "indirect", "method", "reference", "general", "term", "other",
};

}  // namespace

std::string_view CategoryName(Category c) { return kNames[Ordinal(c)]; }

Category ParseCategory(std::string_view token) {
  for (Category c : kAllCategories) {
    if (kNames[Ordinal(c)] == token) return c;
  }
  throw Error(ErrorCode::kParse,
              "unknown category '" + std::string(token) + "'");
}

std::string_view GroupName(InterpretabilityGroup g) {
  switch (g) {
    case InterpretabilityGroup::kEasy: return "easy";
    case InterpretabilityGroup::kMedium: return "medium";
    case InterpretabilityGroup::kHard: return "hard";
  }
  return "hard";
}

}  // namespace codeinterp
