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

#include "codeinterp/aripipe.h"

#include <fmt/format.h>

#include <cmath>

#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"

namespace codeinterp {

MockInterpreter MockInterpreter::FromFile(const std::filesystem::path& path,
                                          Outcome fallback) {
  std::unordered_map<std::string, Outcome> table;
  for (const auto& row : ReadJsonl(path)) {
    try {
      const std::string outcome = row.at("outcome").get<std::string>();
      Outcome o;
      if (outcome == "success") {
        o = Outcome::kSuccess;
      } else if (outcome == "failure") {
        o = Outcome::kFailure;
      } else {
        throw Error(ErrorCode::kParse, "unknown outcome '" + outcome + "'");
      }
      table[row.at("clause_id").get<std::string>()] = o;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse,
                  path.string() + ": bad interpreter script row: " + e.what());
    }
  }
  return MockInterpreter(std::move(table), fallback);
}

Outcome MockInterpreter::Interpret(const Clause& clause) {
  auto it = table_.find(clause.clause_id);
  return it == table_.end() ? fallback_ : it->second;
}

std::vector<Clause> FilterInterpretable(std::span<const Clause> clauses,
                                        std::span<const Category> predictions) {
  if (clauses.size() != predictions.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} clauses but {} predictions", clauses.size(),
                            predictions.size()));
  }
  std::vector<Clause> kept;
  for (size_t i = 0; i < clauses.size(); ++i) {
    if (IsInterpretable(predictions[i])) kept.push_back(clauses[i]);
  }
  return kept;
}

double StageResult::ExactPct() const {
  return input == 0 ? 0.0
                    : 100.0 * static_cast<double>(success) /
                          static_cast<double>(input);
}

int64_t StageResult::RoundedPct() const {
  if (input == 0) return 0;
  // round(100 * s / n) in integers: floor((200 s + n) / 2n).
  return (200 * success + input) / (2 * input);
}

namespace {

StageResult RunStage(std::span<const Clause> clauses,
                     InterpreterPort& interpreter) {
  StageResult r;
  r.input = static_cast<int64_t>(clauses.size());
  for (const Clause& c : clauses) {
    Outcome o = Outcome::kFailure;
    try {
      o = interpreter.Interpret(c);
    } catch (const std::exception&) {
      o = Outcome::kFailure;
    }
    if (o == Outcome::kSuccess) ++r.success;
  }
  return r;
}

}  // namespace

FilterReport RunFilterExperiment(std::span<const Clause> clauses,
                                 std::span<const Category> predictions,
                                 InterpreterPort& interpreter) {
  if (clauses.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no clauses to interpret");
  }
  const std::vector<Clause> kept = FilterInterpretable(clauses, predictions);
  FilterReport report;
  for (Category p : predictions) {
    ++(IsInterpretable(p) ? report.kept : report.dropped)[Ordinal(p)];
  }
  report.before = RunStage(clauses, interpreter);
  report.after = RunStage(kept, interpreter);
  return report;
}

FilterReport RunFilterExperiment(std::span<const Clause> clauses,
                                 const Classifier& classifier,
                                 InterpreterPort& interpreter) {
  std::vector<std::string> texts;
  texts.reserve(clauses.size());
  for (const Clause& c : clauses) texts.push_back(c.text);
  std::vector<Category> predictions;
  for (const Prediction& p : classifier.Predict(texts)) {
    predictions.push_back(p.category);
  }
  return RunFilterExperiment(clauses, predictions, interpreter);
}

nlohmann::ordered_json FilterReportToJson(const FilterReport& report) {
  auto stage = [](const StageResult& s) {
    nlohmann::ordered_json j;
    j["input_clauses"] = s.input;
    j["successful_clauses"] = s.success;
    j["pct_successful"] = s.RoundedPct();
    j["pct_exact"] = s.ExactPct();
    return j;
  };
  nlohmann::ordered_json per_category;
  for (Category c : kAllCategories) {
    nlohmann::ordered_json row;
    row["kept"] = report.kept[Ordinal(c)];
    row["dropped"] = report.dropped[Ordinal(c)];
    per_category[std::string(CategoryName(c))] = row;
  }
  nlohmann::ordered_json j;
  j["before"] = stage(report.before);
  j["after"] = stage(report.after);
  j["per_category"] = per_category;
  return j;
}

std::string FilterReportToCsv(const FilterReport& report) {
  std::string out =
      "stage,input_clauses,successful_clauses,pct_successful,pct_exact\n";
  out += fmt::format("before,{},{},{},{}\n", report.before.input,
                     report.before.success, report.before.RoundedPct(),
                     report.before.ExactPct());
  out += fmt::format("after,{},{},{},{}\n", report.after.input,
                     report.after.success, report.after.RoundedPct(),
                     report.after.ExactPct());
  return out;
}

}  // namespace codeinterp
