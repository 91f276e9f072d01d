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

#ifndef CODEINTERP_TAXONOMY_H_
#define CODEINTERP_TAXONOMY_H_

#include <array>
#include <cstdint>
#include <string_view>

namespace codeinterp {

// The seven clause categories. Ordinals follow the row order of the
// category table and are used for deterministic tie-breaking.
enum class Category : uint8_t {
  kDirect = 0,
  kIndirect,
  kMethod,
  kReference,
  kGeneral,
  kTerm,
  kOther,
};

inline constexpr int kNumCategories = 7;

inline constexpr std::array<Category, kNumCategories> kAllCategories = {
    Category::kDirect,  Category::kIndirect, Category::kMethod,
    Category::kReference, Category::kGeneral, Category::kTerm,
    Category::kOther,
};

enum class InterpretabilityGroup : uint8_t { kEasy = 0, kMedium, kHard };

// Exact clause score stored as a count of half points, so document totals
// are integer sums and reproducible bit for bit.
class Score {
 public:
  constexpr Score() = default;
  static constexpr Score FromHalves(int64_t halves) { return Score(halves); }

  constexpr int64_t halves() const { return halves_; }
  constexpr double ToDouble() const { return static_cast<double>(halves_) / 2.0; }

  constexpr Score& operator+=(Score other) {
    halves_ += other.halves_;
    return *this;
  }
  friend constexpr Score operator+(Score a, Score b) { return a += b; }
  friend constexpr Score operator*(int64_t n, Score s) {
    return Score(n * s.halves_);
  }
  friend constexpr auto operator<=>(Score, Score) = default;

 private:
  explicit constexpr Score(int64_t halves) : halves_(halves) {}
  int64_t halves_ = 0;
};

constexpr int Ordinal(Category c) { return static_cast<int>(c); }

// Lowercase token used in every file format ("direct", "term", ...).
std::string_view CategoryName(Category c);

// Throws Error(kParse) for anything outside the seven tokens.
Category ParseCategory(std::string_view token);

std::string_view GroupName(InterpretabilityGroup g);

constexpr InterpretabilityGroup GroupOf(Category c) {
  switch (c) {
    case Category::kDirect:
    case Category::kIndirect:
      return InterpretabilityGroup::kEasy;
    case Category::kMethod:
    case Category::kReference:
      return InterpretabilityGroup::kMedium;
    case Category::kGeneral:
    case Category::kTerm:
    case Category::kOther:
      return InterpretabilityGroup::kHard;
  }
  return InterpretabilityGroup::kHard;
}

constexpr Score GroupScore(InterpretabilityGroup g) {
  switch (g) {
    case InterpretabilityGroup::kEasy:
      return Score::FromHalves(2);
    case InterpretabilityGroup::kMedium:
      return Score::FromHalves(1);
    case InterpretabilityGroup::kHard:
      return Score::FromHalves(0);
  }
  return Score::FromHalves(0);
}

constexpr Score ClauseScore(Category c) { return GroupScore(GroupOf(c)); }

// Categories kept ahead of rule interpretation (easy and medium groups).
constexpr bool IsInterpretable(Category c) {
  return GroupOf(c) != InterpretabilityGroup::kHard;
}

using CategoryCounts = std::array<int64_t, kNumCategories>;

}  // namespace codeinterp

#endif  // CODEINTERP_TAXONOMY_H_
