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

#include "codeinterp/score.h"

#include <fmt/format.h>

#include <algorithm>

#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"

namespace codeinterp {

DocumentScore ScoreFromCounts(std::string doc_id, const CategoryCounts& counts) {
  DocumentScore s;
  s.doc_id = std::move(doc_id);
  s.category_counts = counts;
  for (Category c : kAllCategories) {
    const int64_t n = counts[Ordinal(c)];
    if (n < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative category count");
    }
    s.clause_count += n;
    s.total_score += n * ClauseScore(c);
  }
  if (s.clause_count == 0) {
    throw Error(ErrorCode::kEmptyDocument,
                "document '" + s.doc_id + "' has no clauses");
  }
  s.interpretability_pct = 100.0 * static_cast<double>(s.total_score.halves()) /
                           static_cast<double>(2 * s.clause_count);
  return s;
}

DocumentScore ScoreDocument(std::string doc_id,
                            std::span<const Category> categories) {
  CategoryCounts counts{};
  for (Category c : categories) ++counts[Ordinal(c)];
  return ScoreFromCounts(std::move(doc_id), counts);
}

double HighlyInterpretableFraction(std::span<const DocumentScore> scores,
                                   double threshold_pct) {
  if (scores.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no documents to evaluate");
  }
  const auto high = std::count_if(
      scores.begin(), scores.end(), [&](const DocumentScore& s) {
        return s.interpretability_pct > threshold_pct;
      });
  return static_cast<double>(high) / static_cast<double>(scores.size());
}

namespace {

CorpusRow Summarize(std::string domain, std::string level,
                    const std::vector<const DocumentScore*>& members,
                    double threshold_pct) {
  CorpusRow row;
  row.domain = std::move(domain);
  row.level = std::move(level);
  row.codes = static_cast<int64_t>(members.size());
  int64_t halves = 0;
  double pct_sum = 0.0;
  int64_t high = 0;
  for (const DocumentScore* s : members) {
    row.clauses += s->clause_count;
    halves += s->total_score.halves();
    pct_sum += s->interpretability_pct;
    row.max_pct = std::max(row.max_pct, s->interpretability_pct);
    if (s->interpretability_pct > threshold_pct) ++high;
  }
  if (row.codes > 0) {
    row.clause_weighted_pct =
        100.0 * static_cast<double>(halves) / static_cast<double>(2 * row.clauses);
    row.code_mean_pct = pct_sum / static_cast<double>(row.codes);
    row.highly_interpretable_frac =
        static_cast<double>(high) / static_cast<double>(row.codes);
  }
  return row;
}

}  // namespace

CorpusReport Aggregate(std::span<const DocumentScore> scores,
                       const std::map<std::string, CodeMeta>& metas,
                       double threshold_pct) {
  // (domain, level) -> members; std::map gives the row order directly.
  std::map<std::pair<std::string, int>, std::vector<const DocumentScore*>> groups;
  std::map<int, std::vector<const DocumentScore*>> by_level;
  std::vector<const DocumentScore*> all;
  for (const DocumentScore& s : scores) {
    auto it = metas.find(s.doc_id);
    if (it == metas.end()) {
      throw Error(ErrorCode::kMissingMeta,
                  "no metadata for document '" + s.doc_id + "'");
    }
    const int level = static_cast<int>(it->second.level);
    groups[{it->second.domain_tag, level}].push_back(&s);
    by_level[level].push_back(&s);
    all.push_back(&s);
  }
  CorpusReport report;
  report.highly_interpretable_threshold_pct = threshold_pct;
  for (const auto& [key, members] : groups) {
    report.rows.push_back(Summarize(
        key.first, std::string(CodeLevelName(static_cast<CodeLevel>(key.second))),
        members, threshold_pct));
  }
  for (const auto& [level, members] : by_level) {
    report.rows.push_back(Summarize(
        "Total", std::string(CodeLevelName(static_cast<CodeLevel>(level))),
        members, threshold_pct));
  }
  if (!all.empty()) {
    report.rows.push_back(Summarize("All", "All", all, threshold_pct));
  }
  return report;
}

std::string CorpusReportToCsv(const CorpusReport& report) {
  std::string out =
      "domain,level,codes,clauses,interp_clause_weighted_pct,"
      "interp_code_mean_pct,max_pct,highly_interpretable_frac\n";
  for (const CorpusRow& r : report.rows) {
    out += fmt::format("{},{},{},{},{:.2f},{:.2f},{:.2f},{:.4f}\n", CsvField(r.domain),
                       CsvField(r.level), r.codes, r.clauses, r.clause_weighted_pct,
                       r.code_mean_pct, r.max_pct, r.highly_interpretable_frac);
  }
  return out;
}

nlohmann::ordered_json CorpusReportToJson(const CorpusReport& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const CorpusRow& r : report.rows) {
    nlohmann::ordered_json row;
    row["domain"] = r.domain;
    row["level"] = r.level;
    row["codes"] = r.codes;
    row["clauses"] = r.clauses;
    row["interp_clause_weighted_pct"] = r.clause_weighted_pct;
    row["interp_code_mean_pct"] = r.code_mean_pct;
    row["max_pct"] = r.max_pct;
    row["highly_interpretable_frac"] = r.highly_interpretable_frac;
    rows.push_back(row);
  }
  nlohmann::ordered_json j;
  j["rows"] = rows;
  j["highly_interpretable_threshold_pct"] =
      report.highly_interpretable_threshold_pct;
  j["notes"] =
      "interp_clause_weighted_pct pools all clauses of a group; "
      "interp_code_mean_pct averages per-code percentages. The two differ "
      "whenever codes in a group have different clause counts.";
  return j;
}

nlohmann::ordered_json DocumentScoreToJson(const DocumentScore& score) {
  nlohmann::ordered_json counts;
  for (Category c : kAllCategories) {
    counts[std::string(CategoryName(c))] = score.category_counts[Ordinal(c)];
  }
  nlohmann::ordered_json j;
  j["doc_id"] = score.doc_id;
  j["clause_count"] = score.clause_count;
  j["category_counts"] = counts;
  j["total_score"] = score.total_score.ToDouble();
  j["interpretability_pct"] = score.interpretability_pct;
  return j;
}

DocumentScore DocumentScoreFromJson(const nlohmann::json& j) {
  try {
    CategoryCounts counts{};
    for (Category c : kAllCategories) {
      counts[Ordinal(c)] =
          j.at("category_counts").value(std::string(CategoryName(c)), int64_t{0});
    }
    return ScoreFromCounts(j.at("doc_id").get<std::string>(), counts);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("document score: ") + e.what());
  }
}

std::string DocumentScoresToCsv(std::span<const DocumentScore> scores) {
  std::string out = "doc_id,clause_count";
  for (Category c : kAllCategories) {
    out += ',';
    out += CategoryName(c);
  }
  out += ",total_score,interpretability_pct\n";
  for (const DocumentScore& s : scores) {
    out += fmt::format("{},{}", CsvField(s.doc_id), s.clause_count);
    for (Category c : kAllCategories) {
      out += fmt::format(",{}", s.category_counts[Ordinal(c)]);
    }
    out += fmt::format(",{},{:.2f}\n", s.total_score.ToDouble(),
                       s.interpretability_pct);
  }
  return out;
}

}  // namespace codeinterp
