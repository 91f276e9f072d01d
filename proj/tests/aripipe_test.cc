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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "codeinterp/errors.h"
#include "codeinterp/score.h"

namespace codeinterp {
namespace {

using C = Category;

std::vector<C> Table5Predictions() {
  std::vector<C> p;
  auto add = [&](C c, int n) { p.insert(p.end(), n, c); };
  add(C::kDirect, 280);
  add(C::kIndirect, 193);
  add(C::kReference, 119);
  add(C::kMethod, 157);
  add(C::kGeneral, 70);
  add(C::kOther, 112);
  add(C::kTerm, 73);
  return p;
}

std::vector<Clause> MakeClauses(size_t n) {
  std::vector<Clause> clauses(n);
  for (size_t i = 0; i < n; ++i) {
    clauses[i].doc_id = "doc";
    clauses[i].clause_id = MakeClauseId("doc", i + 1);
    clauses[i].text = "clause " + std::to_string(i + 1);
  }
  return clauses;
}

TEST(FilterTest, Table5KeepsAll749InterpretableClauses) {
  const auto preds = Table5Predictions();
  ASSERT_EQ(preds.size(), 1004u);
  const auto clauses = MakeClauses(preds.size());
  const auto kept = FilterInterpretable(clauses, preds);
  EXPECT_EQ(kept.size(), 749u);
  for (size_t i = 1; i < kept.size(); ++i) {
    EXPECT_LT(std::stoi(kept[i - 1].clause_id.substr(4)),
              std::stoi(kept[i].clause_id.substr(4)));
  }
}

TEST(FilterTest, DropAllAndKeepAll) {
  const auto clauses = MakeClauses(6);
  EXPECT_TRUE(FilterInterpretable(clauses, std::vector<C>(6, C::kGeneral)).empty());
  EXPECT_EQ(FilterInterpretable(clauses, std::vector<C>(6, C::kDirect)), clauses);
}

TEST(FilterTest, LengthMismatch) {
  const auto clauses = MakeClauses(3);
  try {
    FilterInterpretable(clauses, std::vector<C>(2, C::kDirect));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(StageResultTest, Table6Percentages) {
  EXPECT_EQ((StageResult{1004, 679}).RoundedPct(), 68);
  EXPECT_EQ((StageResult{749, 539}).RoundedPct(), 72);
  EXPECT_NEAR((StageResult{1004, 679}).ExactPct(), 67.6294820717, 1e-9);
  EXPECT_EQ((StageResult{8, 1}).RoundedPct(), 13);  // 12.5 rounds up
}

TEST(ExperimentTest, SaturatedMock) {
  const auto preds = Table5Predictions();
  const auto clauses = MakeClauses(preds.size());
  MockInterpreter mock({}, Outcome::kSuccess);
  const FilterReport r = RunFilterExperiment(clauses, preds, mock);
  EXPECT_EQ(r.before.RoundedPct(), 100);
  EXPECT_EQ(r.after.RoundedPct(), 100);
  EXPECT_EQ(r.after.input, 749);
}

TEST(ExperimentTest, MockSucceedingOnlyOnKeptClauses) {
  const auto preds = Table5Predictions();
  const auto clauses = MakeClauses(preds.size());
  std::unordered_map<std::string, Outcome> table;
  int64_t kept = 0;
  for (size_t i = 0; i < clauses.size(); ++i) {
    if (IsInterpretable(preds[i])) {
      table[clauses[i].clause_id] = Outcome::kSuccess;
      ++kept;
    }
  }
  MockInterpreter mock(table);
  const FilterReport r = RunFilterExperiment(clauses, preds, mock);
  EXPECT_EQ(r.after.ExactPct(), 100.0);
  EXPECT_EQ(r.before.success, kept);
  EXPECT_DOUBLE_EQ(r.before.ExactPct(), 100.0 * kept / 1004.0);
  EXPECT_GE(r.after.ExactPct(), r.before.ExactPct());
  EXPECT_EQ(r.kept[Ordinal(C::kDirect)], 280);
  EXPECT_EQ(r.dropped[Ordinal(C::kTerm)], 73);
}

TEST(ExperimentTest, ReproducesTable6Arithmetic) {
  // Script 679 successes in the full run, 539 of them among the kept set.
  const auto preds = Table5Predictions();
  const auto clauses = MakeClauses(preds.size());
  std::unordered_map<std::string, Outcome> table;
  int kept_success = 0, dropped_success = 0;
  for (size_t i = 0; i < clauses.size(); ++i) {
    if (IsInterpretable(preds[i]) && kept_success < 539) {
      table[clauses[i].clause_id] = Outcome::kSuccess;
      ++kept_success;
    } else if (!IsInterpretable(preds[i]) && dropped_success < 140) {
      table[clauses[i].clause_id] = Outcome::kSuccess;
      ++dropped_success;
    }
  }
  MockInterpreter mock(table);
  const FilterReport r = RunFilterExperiment(clauses, preds, mock);
  EXPECT_EQ(r.before.input, 1004);
  EXPECT_EQ(r.before.success, 679);
  EXPECT_EQ(r.after.input, 749);
  EXPECT_EQ(r.after.success, 539);
  EXPECT_EQ(r.before.RoundedPct(), 68);
  EXPECT_EQ(r.after.RoundedPct(), 72);
  const std::string csv = FilterReportToCsv(r);
  EXPECT_NE(csv.find("before,1004,679,68,"), std::string::npos);
  EXPECT_NE(csv.find("after,749,539,72,"), std::string::npos);
}

class ThrowingInterpreter : public InterpreterPort {
 public:
  Outcome Interpret(const Clause& c) override {
    if (c.clause_id == "doc#2") throw std::runtime_error("parser crashed");
    return Outcome::kSuccess;
  }
};

TEST(ExperimentTest, InterpreterErrorsCountAsFailures) {
  const auto clauses = MakeClauses(3);
  ThrowingInterpreter interp;
  const FilterReport r =
      RunFilterExperiment(clauses, std::vector<C>(3, C::kDirect), interp);
  EXPECT_EQ(r.before.success, 2);
  EXPECT_EQ(r.after.success, 2);
}

TEST(ExperimentTest, FilterAndScoreAgree) {
  const auto preds = Table5Predictions();
  const auto clauses = MakeClauses(preds.size());
  MockInterpreter mock({}, Outcome::kFailure);
  const FilterReport r = RunFilterExperiment(clauses, preds, mock);
  const int64_t easy_kept = r.kept[Ordinal(C::kDirect)] + r.kept[Ordinal(C::kIndirect)];
  const int64_t medium_kept = r.kept[Ordinal(C::kMethod)] + r.kept[Ordinal(C::kReference)];
  const DocumentScore s = ScoreDocument("doc", preds);
  EXPECT_DOUBLE_EQ(s.interpretability_pct,
                   100.0 * (easy_kept + 0.5 * medium_kept) / 1004.0);
}

TEST(MockInterpreterTest, LoadsScript) {
  const auto path = std::filesystem::temp_directory_path() / "codeinterp_mock.jsonl";
  {
    std::ofstream out(path);
    out << R"({"clause_id":"doc#1","outcome":"success"})" << "\n"
        << R"({"clause_id":"doc#2","outcome":"failure"})" << "\n";
  }
  MockInterpreter mock = MockInterpreter::FromFile(path);
  const auto clauses = MakeClauses(3);
  EXPECT_EQ(mock.Interpret(clauses[0]), Outcome::kSuccess);
  EXPECT_EQ(mock.Interpret(clauses[1]), Outcome::kFailure);
  EXPECT_EQ(mock.Interpret(clauses[2]), Outcome::kFailure);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace codeinterp
