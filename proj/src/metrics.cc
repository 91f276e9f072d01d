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

#include "codeinterp/metrics.h"

#include <fmt/format.h>

#include "codeinterp/errors.h"

namespace codeinterp {

ConfusionTally Tally(std::span<const Category> predictions,
                     std::span<const Category> golds) {
  if (predictions.size() != golds.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} predictions for {} gold labels",
                            predictions.size(), golds.size()));
  }
  if (golds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot tally zero items");
  }
  ConfusionTally t;
  for (size_t i = 0; i < golds.size(); ++i) {
    const int p = Ordinal(predictions[i]);
    const int g = Ordinal(golds[i]);
    ++t.labeled[p];
    ++t.truth[g];
    if (p == g) ++t.correct[p];
  }
  t.total = static_cast<int64_t>(golds.size());
  return t;
}

std::array<ClassScores, kNumCategories> PerClassPrf(const ConfusionTally& t) {
  std::array<ClassScores, kNumCategories> out{};
  for (int c = 0; c < kNumCategories; ++c) {
    ClassScores& s = out[c];
    s.support = t.truth[c];
    if (t.labeled[c] == 0) {
      s.precision_undefined = true;
    } else {
      s.precision = static_cast<double>(t.correct[c]) / t.labeled[c];
    }
    if (t.truth[c] == 0) {
      s.recall_undefined = true;
    } else {
      s.recall = static_cast<double>(t.correct[c]) / t.truth[c];
    }
    if (s.precision + s.recall == 0.0) {
      s.f1_undefined = true;
    } else {
      s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    }
  }
  return out;
}

double WeightedF1(const std::array<ClassScores, kNumCategories>& classes) {
  double num = 0.0;
  int64_t den = 0;
  for (const ClassScores& s : classes) {
    if (s.support == 0) continue;
    num += static_cast<double>(s.support) * s.f1;
    den += s.support;
  }
  if (den == 0) {
    throw Error(ErrorCode::kInvalidArgument, "weighted F1 needs support >= 1");
  }
  return num / static_cast<double>(den);
}

EvalReport Evaluate(std::span<const Category> predictions,
                    std::span<const Category> golds) {
  const ConfusionTally t = Tally(predictions, golds);
  EvalReport r;
  r.classes = PerClassPrf(t);
  r.weighted_f1 = WeightedF1(r.classes);
  r.total = t.total;
  return r;
}

nlohmann::ordered_json EvalReportToJson(const EvalReport& report) {
  nlohmann::ordered_json classes = nlohmann::ordered_json::array();
  for (Category c : kAllCategories) {
    const ClassScores& s = report.classes[Ordinal(c)];
    nlohmann::ordered_json row;
    row["category"] = CategoryName(c);
    row["precision"] = s.precision;
    row["recall"] = s.recall;
    row["f1"] = s.f1;
    row["support"] = s.support;
    nlohmann::ordered_json flags = nlohmann::ordered_json::array();
    if (s.precision_undefined) flags.push_back("precision_undefined");
    if (s.recall_undefined) flags.push_back("recall_undefined");
    if (s.f1_undefined) flags.push_back("f1_undefined");
    row["flags"] = flags;
    classes.push_back(row);
  }
  nlohmann::ordered_json j;
  j["classes"] = classes;
  j["weighted_f1"] = report.weighted_f1;
  j["total"] = report.total;
  return j;
}

EvalReport EvalReportFromJson(const nlohmann::json& j) {
  EvalReport r;
  try {
    for (const auto& row : j.at("classes")) {
      ClassScores& s = r.classes[Ordinal(
          ParseCategory(row.at("category").get<std::string>()))];
      s.precision = row.at("precision").get<double>();
      s.recall = row.at("recall").get<double>();
      s.f1 = row.at("f1").get<double>();
      s.support = row.at("support").get<int64_t>();
      for (const auto& flag : row.value("flags", nlohmann::json::array())) {
        const std::string f = flag.get<std::string>();
        s.precision_undefined |= f == "precision_undefined";
        s.recall_undefined |= f == "recall_undefined";
        s.f1_undefined |= f == "f1_undefined";
      }
    }
    r.weighted_f1 = j.at("weighted_f1").get<double>();
    r.total = j.at("total").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad eval report: ") + e.what());
  }
  return r;
}

std::string EvalReportToCsv(const EvalReport& report) {
  std::string out = "category,precision,recall,f1,support\n";
  for (Category c : kAllCategories) {
    const ClassScores& s = report.classes[Ordinal(c)];
    out += fmt::format("{},{},{},{},{}\n", CategoryName(c), s.precision,
                       s.recall, s.f1, s.support);
  }
  out += fmt::format("weighted,,,{},{}\n", report.weighted_f1, report.total);
  return out;
}

std::string FormatEvalReport(const EvalReport& report) {
  std::string out = fmt::format("{:<10} {:>9} {:>9} {:>9} {:>8}\n", "category",
                                "precision", "recall", "f1", "support");
  for (Category c : kAllCategories) {
    const ClassScores& s = report.classes[Ordinal(c)];
    out += fmt::format("{:<10} {:>8.2f}% {:>8.2f}% {:>8.2f}% {:>8}\n",
                       CategoryName(c), 100.0 * s.precision,
                       100.0 * s.recall, 100.0 * s.f1, s.support);
  }
  out += fmt::format("weighted F1: {:.2f}% (n={})\n", 100.0 * report.weighted_f1,
                     report.total);
  return out;
}

}  // namespace codeinterp
