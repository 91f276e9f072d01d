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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "codeinterp/errors.h"

namespace codeinterp {
namespace {

using C = Category;

std::vector<C> Repeat(C c, int n) { return std::vector<C>(n, c); }

CategoryCounts Table5Counts() {
  CategoryCounts counts{};
  counts[Ordinal(C::kDirect)] = 280;
  counts[Ordinal(C::kIndirect)] = 193;
  counts[Ordinal(C::kReference)] = 119;
  counts[Ordinal(C::kMethod)] = 157;
  counts[Ordinal(C::kGeneral)] = 70;
  counts[Ordinal(C::kOther)] = 112;
  counts[Ordinal(C::kTerm)] = 73;
  return counts;
}

TEST(ScoreDocumentTest, FireCodeCounts) {
  // Exact rational evaluation: easy 280 + 193 = 473 points, medium
  // (119 + 157) / 2 = 138 points, so 611 / 1004.
  const int64_t easy = 280 + 193, medium_halves = 119 + 157;
  ASSERT_EQ(medium_halves % 2, 0);
  const int64_t expected_total = easy + medium_halves / 2;
  ASSERT_EQ(expected_total, 611);

  const DocumentScore s = ScoreFromCounts("GB50016-2014", Table5Counts());
  EXPECT_EQ(s.clause_count, 1004);
  EXPECT_EQ(s.total_score.halves(), 2 * expected_total);
  EXPECT_EQ(s.total_score.ToDouble(), 611.0);
  EXPECT_NEAR(s.interpretability_pct, 100.0 * 611.0 / 1004.0, 1e-12);
  EXPECT_NEAR(std::round(s.interpretability_pct * 100.0) / 100.0, 60.86, 1e-9);
}

TEST(ScoreDocumentTest, Extremes) {
  EXPECT_EQ(ScoreDocument("a", Repeat(C::kDirect, 10)).interpretability_pct, 100.0);
  EXPECT_EQ(ScoreDocument("b", Repeat(C::kTerm, 10)).interpretability_pct, 0.0);
}

TEST(ScoreDocumentTest, EmptyDocumentRejected) {
  try {
    ScoreDocument("empty", std::vector<C>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDocument);
  }
}

class RandomDocuments : public ::testing::Test {
 protected:
  std::mt19937_64 gen_{7};
  std::vector<C> Draw() {
    std::uniform_int_distribution<int> len(1, 300), cls(0, 6);
    std::vector<C> cats(len(gen_));
    for (auto& c : cats) c = static_cast<C>(cls(gen_));
    return cats;
  }
};

TEST_F(RandomDocuments, ClauseByClauseSumMatchesCounts) {
  for (int trial = 0; trial < 300; ++trial) {
    const auto cats = Draw();
    double sum = 0.0;
    for (C c : cats) {
      sum += c == C::kDirect || c == C::kIndirect      ? 1.0
             : c == C::kMethod || c == C::kReference ? 0.5
                                                     : 0.0;
    }
    const DocumentScore s = ScoreDocument("d", cats);
    EXPECT_EQ(s.total_score.ToDouble(), sum);
    EXPECT_EQ(s.clause_count, static_cast<int64_t>(cats.size()));
    EXPECT_GE(s.interpretability_pct, 0.0);
    EXPECT_LE(s.interpretability_pct, 100.0);
  }
}

TEST_F(RandomDocuments, HardToEasyRaisesByOneClauseShare) {
  for (int trial = 0; trial < 300; ++trial) {
    auto cats = Draw();
    auto it = std::find_if(cats.begin(), cats.end(), [](C c) {
      return GroupOf(c) == InterpretabilityGroup::kHard;
    });
    if (it == cats.end()) continue;
    const DocumentScore before = ScoreDocument("d", cats);
    *it = C::kIndirect;
    const DocumentScore after = ScoreDocument("d", cats);
    // Exact: numerator grows by one point (two halves) over the same N.
    EXPECT_EQ(after.ExactRatio().first - before.ExactRatio().first, 2);
    EXPECT_EQ(after.ExactRatio().second, before.ExactRatio().second);
    EXPECT_NEAR(after.interpretability_pct - before.interpretability_pct,
                100.0 / static_cast<double>(cats.size()), 1e-9);
  }
}

TEST_F(RandomDocuments, PermutationInvariant) {
  for (int trial = 0; trial < 100; ++trial) {
    auto cats = Draw();
    const double a = ScoreDocument("d", cats).interpretability_pct;
    std::shuffle(cats.begin(), cats.end(), gen_);
    EXPECT_EQ(ScoreDocument("d", cats).interpretability_pct, a);
  }
}

TEST(HighlyInterpretableTest, StrictThreshold) {
  std::vector<DocumentScore> all_full = {ScoreDocument("a", Repeat(C::kDirect, 4)),
                                         ScoreDocument("b", Repeat(C::kIndirect, 2))};
  EXPECT_EQ(HighlyInterpretableFraction(all_full), 1.0);

  std::vector<DocumentScore> all_half = {ScoreDocument("a", Repeat(C::kMethod, 4)),
                                         ScoreDocument("b", std::vector<C>{C::kDirect, C::kTerm})};
  ASSERT_EQ(all_half[0].interpretability_pct, 50.0);
  ASSERT_EQ(all_half[1].interpretability_pct, 50.0);
  EXPECT_EQ(HighlyInterpretableFraction(all_half), 0.0);

  EXPECT_THROW(HighlyInterpretableFraction({}), Error);
}

std::vector<C> Mix(int easy, int hard) {
  std::vector<C> v(easy, C::kDirect);
  v.insert(v.end(), hard, C::kGeneral);
  return v;
}

TEST(AggregateTest, SingleDocument) {
  const std::vector<DocumentScore> scores = {ScoreDocument("x", Mix(3, 1))};
  const std::map<std::string, CodeMeta> metas = {
      {"x", {"X", CodeLevel::kGB, "fire-protection", 2014}}};
  const CorpusReport r = Aggregate(scores, metas);
  ASSERT_EQ(r.rows.size(), 3u);  // group, level total, all
  for (const CorpusRow& row : r.rows) {
    EXPECT_EQ(row.clause_weighted_pct, 75.0);
    EXPECT_EQ(row.code_mean_pct, 75.0);
    EXPECT_EQ(row.max_pct, 75.0);
    EXPECT_EQ(row.highly_interpretable_frac, 1.0);
  }
}

TEST(AggregateTest, ClauseWeightedVersusCodeMean) {
  // 50% over 100 clauses and 0% over 300 clauses: code mean is
  // (50 + 0) / 2 = 25, pooled is 50 / 400 = 12.5.
  const std::vector<DocumentScore> scores = {
      ScoreDocument("a", Mix(50, 50)), ScoreDocument("b", Mix(0, 300))};
  const std::map<std::string, CodeMeta> metas = {
      {"a", {"A", CodeLevel::kGB, "structural", std::nullopt}},
      {"b", {"B", CodeLevel::kGB, "structural", std::nullopt}}};
  const CorpusReport r = Aggregate(scores, metas);
  const CorpusRow& all = r.rows.back();
  EXPECT_EQ(all.domain, "All");
  EXPECT_EQ(all.codes, 2);
  EXPECT_EQ(all.clauses, 400);
  EXPECT_DOUBLE_EQ(all.code_mean_pct, 25.0);
  EXPECT_DOUBLE_EQ(all.clause_weighted_pct, 12.5);
  EXPECT_DOUBLE_EQ(all.max_pct, 50.0);
  EXPECT_DOUBLE_EQ(all.highly_interpretable_frac, 0.0);
}

TEST(AggregateTest, RowOrderAndCsvSchema) {
  const std::vector<DocumentScore> scores = {
      ScoreDocument("s-hb", Mix(1, 1)), ScoreDocument("f-gb", Mix(2, 0)),
      ScoreDocument("s-gb", Mix(0, 2)), ScoreDocument("f-db", Mix(1, 3))};
  const std::map<std::string, CodeMeta> metas = {
      {"s-hb", {"", CodeLevel::kHB, "structural", {}}},
      {"f-gb", {"", CodeLevel::kGB, "fire-protection", {}}},
      {"s-gb", {"", CodeLevel::kGB, "structural", {}}},
      {"f-db", {"", CodeLevel::kDB, "fire-protection", {}}}};
  const CorpusReport r = Aggregate(scores, metas);
  std::vector<std::string> keys;
  for (const auto& row : r.rows) keys.push_back(row.domain + "/" + row.level);
  const std::vector<std::string> expected = {
      "fire-protection/GB", "fire-protection/DB", "structural/GB",
      "structural/HB",      "Total/GB",           "Total/HB",
      "Total/DB",           "All/All"};
  EXPECT_EQ(keys, expected);
  const std::string csv = CorpusReportToCsv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "domain,level,codes,clauses,interp_clause_weighted_pct,"
            "interp_code_mean_pct,max_pct,highly_interpretable_frac");
  EXPECT_NE(csv.find("fire-protection,GB,1,2,100.00,100.00,100.00,1.0000"),
            std::string::npos);
}

TEST(AggregateTest, CsvQuotesFreeTextFields) {
  const std::vector<DocumentScore> scores = {ScoreDocument("a,1", Mix(1, 1))};
  const std::map<std::string, CodeMeta> metas = {
      {"a,1", {"", CodeLevel::kGB, "heating, \"ventilation\"", {}}}};
  const std::string csv = CorpusReportToCsv(Aggregate(scores, metas));
  EXPECT_NE(csv.find("\"heating, \"\"ventilation\"\"\",GB,1,2,"), std::string::npos)
      << csv;
  EXPECT_NE(DocumentScoresToCsv(scores).find("\n\"a,1\",2,"), std::string::npos);
}

TEST(ScoreJsonTest, RoundTrip) {
  const DocumentScore s = ScoreDocument("d", Mix(3, 4));
  const DocumentScore back = DocumentScoreFromJson(DocumentScoreToJson(s));
  EXPECT_EQ(back.category_counts, s.category_counts);
  EXPECT_EQ(back.total_score, s.total_score);
  EXPECT_EQ(back.interpretability_pct, s.interpretability_pct);
  EXPECT_THROW(DocumentScoreFromJson(nlohmann::json::object()), Error);
}

TEST(AggregateTest, MissingMeta) {
  const std::vector<DocumentScore> scores = {ScoreDocument("a", Mix(1, 1))};
  try {
    Aggregate(scores, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingMeta);
  }
}

}  // namespace
}  // namespace codeinterp
