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

#ifndef CODEINTERP_SCORE_H_
#define CODEINTERP_SCORE_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "codeinterp/corpus.h"
#include "codeinterp/taxonomy.h"
#include "json.hpp"

namespace codeinterp {

struct DocumentScore {
  std::string doc_id;
  int64_t clause_count = 0;
  CategoryCounts category_counts{};
  Score total_score;
  double interpretability_pct = 0.0;

  // Exact interpretability as a fraction: total_score / clause_count.
  // Returned as (numerator, denominator) in half points.
  std::pair<int64_t, int64_t> ExactRatio() const {
    return {total_score.halves(), 2 * clause_count};
  }
};

// Throws kEmptyDocument for an empty list.
DocumentScore ScoreDocument(std::string doc_id,
                            std::span<const Category> categories);
DocumentScore ScoreFromCounts(std::string doc_id, const CategoryCounts& counts);

// Fraction of documents whose interpretability is strictly above the
// threshold. Throws kInvalidArgument for an empty list.
double HighlyInterpretableFraction(std::span<const DocumentScore> scores,
                                   double threshold_pct = 50.0);

struct CorpusRow {
  std::string domain;
  std::string level;
  int64_t codes = 0;
  int64_t clauses = 0;
  double clause_weighted_pct = 0.0;
  double code_mean_pct = 0.0;
  double max_pct = 0.0;
  double highly_interpretable_frac = 0.0;
};

// Rows per (domain, level) sorted by domain then level, followed by one
// "Total" row per level and a final "All" row.
struct CorpusReport {
  std::vector<CorpusRow> rows;
  double highly_interpretable_threshold_pct = 50.0;
};

// Throws kMissingMeta when a score has no metadata entry.
CorpusReport Aggregate(std::span<const DocumentScore> scores,
                       const std::map<std::string, CodeMeta>& metas,
                       double threshold_pct = 50.0);

std::string CorpusReportToCsv(const CorpusReport& report);
nlohmann::ordered_json CorpusReportToJson(const CorpusReport& report);

nlohmann::ordered_json DocumentScoreToJson(const DocumentScore& score);
// Rebuilds the score from "doc_id" and "category_counts".
DocumentScore DocumentScoreFromJson(const nlohmann::json& j);
std::string DocumentScoresToCsv(std::span<const DocumentScore> scores);

}  // namespace codeinterp

#endif  // CODEINTERP_SCORE_H_
