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

#ifndef CODEINTERP_METRICS_H_
#define CODEINTERP_METRICS_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "codeinterp/taxonomy.h"
#include "json.hpp"

namespace codeinterp {

struct ConfusionTally {
  CategoryCounts labeled{};  // predicted as c
  CategoryCounts truth{};    // gold c
  CategoryCounts correct{};  // predicted c and gold c
  int64_t total = 0;
};

// Throws kLengthMismatch on unequal lengths and kInvalidArgument when empty.
ConfusionTally Tally(std::span<const Category> predictions,
                     std::span<const Category> golds);

// Zero-denominator cells are set to 0 and flagged.
struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int64_t support = 0;
  bool precision_undefined = false;  // nothing predicted as this class
  bool recall_undefined = false;     // class absent from the gold labels
  bool f1_undefined = false;         // precision + recall == 0
};

std::array<ClassScores, kNumCategories> PerClassPrf(const ConfusionTally& t);

// Support-weighted mean of per-class F1; classes without support carry no
// weight. Throws kInvalidArgument when the total support is zero.
double WeightedF1(const std::array<ClassScores, kNumCategories>& classes);

struct EvalReport {
  std::array<ClassScores, kNumCategories> classes{};
  double weighted_f1 = 0.0;
  int64_t total = 0;
};

EvalReport Evaluate(std::span<const Category> predictions,
                    std::span<const Category> golds);

nlohmann::ordered_json EvalReportToJson(const EvalReport& report);
EvalReport EvalReportFromJson(const nlohmann::json& j);

// Columns category,precision,recall,f1,support plus a "weighted" summary
// row carrying weighted F1 and the total support.
std::string EvalReportToCsv(const EvalReport& report);

// Human-readable table with percentages rounded to two decimals.
std::string FormatEvalReport(const EvalReport& report);

}  // namespace codeinterp

#endif  // CODEINTERP_METRICS_H_
