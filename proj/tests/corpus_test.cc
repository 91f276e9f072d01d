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

#include "codeinterp/corpus.h"

#include <gtest/gtest.h>

#include <random>

#include "codeinterp/errors.h"
#include "codeinterp/unicode.h"
#include "test_util.h"

namespace codeinterp {
namespace {

RawDocument FromLines(const std::vector<std::string>& lines) {
  RawDocument doc;
  doc.doc_id = "doc";
  for (size_t i = 0; i < lines.size(); ++i) doc.lines.push_back({i + 1, lines[i]});
  return doc;
}

std::vector<std::string> Texts(const RawDocument& doc) {
  std::vector<std::string> out;
  for (const auto& l : doc.lines) out.push_back(l.text);
  return out;
}

TEST(NormalizeTest, WhitespaceAndWidth) {
  EXPECT_EQ(unicode::NormalizeText("  a\t\tb　c  "), "a b c");
  EXPECT_EQ(unicode::NormalizeText("张　三"), "张 三");
  // Decomposed e + combining acute composes under NFC.
  EXPECT_EQ(unicode::NormalizeText("caf\x65\xCC\x81"), "caf\xC3\xA9");
  const std::string once = unicode::NormalizeText(" x 　 y ");
  EXPECT_EQ(unicode::NormalizeText(once), once);
}

TEST(CleanTest, CommitteeNamesRemoved) {
  const RawDocument doc = FromLines({
      "1.0.1 为了预防建筑火灾，制定本规范。",
      "主要起草人：张三 李四 王五",
      "1.0.2 本规范适用于新建建筑。",
      "Chief editor: Example Institute of Building Research",
  });
  const RawDocument clean = CleanDocument(doc, CleaningConfig::Default());
  EXPECT_EQ(Texts(clean), (std::vector<std::string>{
                              "1.0.1 为了预防建筑火灾，制定本规范。",
                              "1.0.2 本规范适用于新建建筑。"}));
  EXPECT_EQ(clean.lines[1].number, 3u);
}

TEST(CleanTest, ProvisionOnlyDocumentUnchanged) {
  const RawDocument doc = FromLines({
      "3.2.1 The height of the enclosure walls should not be less than 2 m.",
      "3.2.2 Natural ventilation should be adopted for building ventilation.",
  });
  const RawDocument clean = CleanDocument(doc, CleaningConfig::Default());
  EXPECT_EQ(clean.lines, doc.lines);
}

TEST(CleanTest, SampleDocument) {
  const RawDocument raw = ReadDocument(
      codeinterp::testing::DataDir() / "docs" / "fire-sample.txt", "fire-sample", {});
  const RawDocument clean = CleanDocument(raw, CleaningConfig::Default());
  const std::vector<size_t> kept_lines = {8, 9, 10, 11, 12, 14, 15, 18, 22, 23, 25};
  std::vector<size_t> numbers;
  for (const auto& l : clean.lines) numbers.push_back(l.number);
  EXPECT_EQ(numbers, kept_lines);
  for (const auto& l : clean.lines) {
    EXPECT_EQ(l.text, unicode::NormalizeText(raw.lines[l.number - 1].text));
  }
}

TEST(CleanTest, Errors) {
  try {
    CleanDocument(FromLines({}), CleaningConfig::Default());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  try {
    CleanDocument(FromLines({"", "@@@###", "1 2 3"}), CleaningConfig::Default());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyAfterCleaning);
  }
}

TEST(CleanTest, KeepRuleOverridesLaterDrops) {
  CleaningConfig config = CleaningConfig::Default();
  config.rules.insert(config.rules.begin(),
                      {"keep_marked", RuleAction::kKeep, RuleKind::kRegex, "^KEEP", 0});
  const RawDocument clean =
      CleanDocument(FromLines({"KEEP ##%%&&", "@@##%%"}), config);
  EXPECT_EQ(Texts(clean), std::vector<std::string>{"KEEP ##%%&&"});
}

TEST(CleanTest, CjkRatioRule) {
  CleaningConfig config;
  config.drop_preamble = false;
  config.rules = {{"cjk", RuleAction::kDrop, RuleKind::kMinCjkRatio, "", 0.3}};
  const RawDocument clean =
      CleanDocument(FromLines({"hello world", "建筑高度 m"}), config);
  EXPECT_EQ(Texts(clean), std::vector<std::string>{"建筑高度 m"});
}

TEST(CleanTest, ConfigJsonRoundTrip) {
  const CleaningConfig c = CleaningConfig::Default();
  const CleaningConfig back = CleaningConfig::FromJson(c.ToJson());
  EXPECT_EQ(back.ToJson(), c.ToJson());
  EXPECT_THROW(CleaningConfig::FromJson(
                   {{"rules", {{{"kind", "regex"}, {"pattern", "("}}}}}),
               Error);
  EXPECT_THROW(LineFilter(CleaningConfig::FromJson(
                   {{"rules", {{{"kind", "regex"}, {"pattern", "("}}}}})),
               Error);
}

// Line shapes mixed into random documents for the property tests.
const std::vector<std::string>& LinePool() {
  static const std::vector<std::string> pool = {
      "1.0.1 为了预防建筑火灾，制定本规范。",
      "3.2.7 钢材的物理性能指标应按表 3.2.7 采用。",
      "3.3.1 The distance between the safety exits should not exceed 120 m.",
      "and the rail height shall not be less than 1.1 m.",
      "  1 厂房；",
      "(2) 仓库；",
      "主编单位：某研究院",
      "主要审查人：张三 李四",
      "表3.2.1 厂房的耐火等级",
      "一级 二级 三级 四级",
      "3.00 2.50 2.00",
      "@@##%%&&",
      "",
      "   ",
      "2 术语",
      "建筑高度大于27m的住宅建筑。",
      "用水量：用户所消耗的水量。",
      "　　3.4.1 全角空格开头的条文。",
  };
  return pool;
}

RawDocument RandomDocument(std::mt19937& gen) {
  std::uniform_int_distribution<size_t> pick(0, LinePool().size() - 1);
  std::uniform_int_distribution<int> len(1, 40);
  std::vector<std::string> lines(len(gen));
  for (auto& l : lines) l = LinePool()[pick(gen)];
  // At least one survivor so cleaning never throws.
  lines.push_back("9.9.9 最后一条条文。");
  return FromLines(lines);
}

TEST(CleanPropertyTest, Idempotent) {
  std::mt19937 gen(1234);
  for (int trial = 0; trial < 300; ++trial) {
    const RawDocument raw = RandomDocument(gen);
    const RawDocument once = CleanDocument(raw, CleaningConfig::Default());
    const RawDocument twice = CleanDocument(once, CleaningConfig::Default());
    EXPECT_EQ(once.lines, twice.lines);
    // Order preserved and every line traceable to its source.
    for (size_t i = 1; i < once.lines.size(); ++i) {
      EXPECT_LT(once.lines[i - 1].number, once.lines[i].number);
    }
  }
}

TEST(SegmentTest, ContinuationMerged) {
  const RawDocument doc = FromLines({
      "3.3.2 单层仓库的最大允许占地面积不应大于6000m²，",
      "防火分区的最大允许建筑面积不应大于1500m²。",
  });
  const auto clauses = SegmentClauses(doc);
  ASSERT_EQ(clauses.size(), 1u);
  EXPECT_EQ(clauses[0].text,
            "3.3.2 单层仓库的最大允许占地面积不应大于6000m²， "
            "防火分区的最大允许建筑面积不应大于1500m²。");
  EXPECT_EQ(clauses[0].first_line, 1u);
  EXPECT_EQ(clauses[0].last_line, 2u);
  EXPECT_EQ(clauses[0].clause_id, "doc#1");
}

TEST(SegmentTest, EmptyDocument) {
  EXPECT_TRUE(SegmentClauses(FromLines({})).empty());
}

TEST(SegmentTest, ListItemsConfigurable) {
  const RawDocument doc = FromLines({
      "1.0.2 本规范适用于下列建筑：",
      "1 厂房；",
      "2 仓库。",
  });
  EXPECT_EQ(SegmentClauses(doc).size(), 1u);
  EXPECT_EQ(SegmentClauses(doc, {.list_items_start_clause = true}).size(), 3u);
}

TEST(SegmentTest, ProvisionNumberShapes) {
  EXPECT_TRUE(StartsWithProvisionNumber("3.2.7 钢材"));
  EXPECT_TRUE(StartsWithProvisionNumber("1.0.1为了"));
  EXPECT_TRUE(StartsWithProvisionNumber("5.1 General"));
  EXPECT_FALSE(StartsWithProvisionNumber("1.5m high"));
  EXPECT_FALSE(StartsWithProvisionNumber("1 厂房；"));
  EXPECT_FALSE(StartsWithProvisionNumber("and 3.2.7"));
  EXPECT_TRUE(StartsWithListMarker("1 厂房；"));
  EXPECT_TRUE(StartsWithListMarker("（3）民用建筑"));
  EXPECT_TRUE(StartsWithListMarker("① item"));
  EXPECT_FALSE(StartsWithListMarker("1.5 m"));
}

TEST(SegmentTest, SampleDocuments) {
  const auto dir = codeinterp::testing::DataDir() / "docs";
  const RawDocument zh = CleanDocument(
      ReadDocument(dir / "fire-sample.txt", "fire-sample", {}), CleaningConfig::Default());
  const auto zh_clauses = SegmentClauses(zh);
  ASSERT_EQ(zh_clauses.size(), 6u);
  EXPECT_EQ(zh_clauses[1].text,
            "1.0.2 本规范适用于下列新建、扩建和改建的建筑： 1 厂房； 2 仓库； 3 民用建筑。");
  EXPECT_EQ(zh_clauses[5].text, "3.3.5 厂区周围宜设围墙，其高度不宜小于2m。");

  const RawDocument en = CleanDocument(
      ReadDocument(dir / "example-en.txt", "example-en", {}), CleaningConfig::Default());
  const auto en_clauses = SegmentClauses(en);
  ASSERT_EQ(en_clauses.size(), 4u);
  EXPECT_EQ(en_clauses[2].text,
            "3.2.2 The distance between the safety exits should not exceed 120 m, "
            "and the exits shall be arranged separately.");
  EXPECT_EQ(en_clauses[2].first_line, 7u);
  EXPECT_EQ(en_clauses[2].last_line, 8u);
}

TEST(SegmentPropertyTest, CountsAndConcatenation) {
  std::mt19937 gen(99);
  for (int trial = 0; trial < 300; ++trial) {
    const RawDocument clean =
        CleanDocument(RandomDocument(gen), CleaningConfig::Default());
    const auto clauses = SegmentClauses(clean);
    EXPECT_LE(clauses.size(), clean.lines.size());
    std::string joined_lines, joined_clauses;
    for (const auto& l : clean.lines) {
      if (!joined_lines.empty()) joined_lines += ' ';
      joined_lines += l.text;
    }
    for (size_t i = 0; i < clauses.size(); ++i) {
      if (i) joined_clauses += ' ';
      joined_clauses += clauses[i].text;
      EXPECT_EQ(clauses[i].clause_id, MakeClauseId("doc", i + 1));
      EXPECT_FALSE(clauses[i].text.empty());
      EXPECT_EQ(clauses[i].text.find('\n'), std::string::npos);
    }
    EXPECT_EQ(joined_clauses, joined_lines);
  }
}

TEST(ClauseIoTest, JsonlRoundTrip) {
  const auto dir = codeinterp::testing::ScratchDir("clause_io");
  const std::vector<Clause> clauses = {
      {"d#1", "d", "3.2.1 文本 \"quoted\"", 3, 4},
      {"d#2", "d", "second", 5, 5},
  };
  WriteClauses(dir / "c.jsonl", clauses);
  EXPECT_EQ(ReadClauses(dir / "c.jsonl"), clauses);
}

TEST(MetaTest, ObjectAndArrayForms) {
  const auto metas =
      ReadMetaFile(codeinterp::testing::DataDir() / "docs" / "meta.json");
  ASSERT_EQ(metas.size(), 2u);
  EXPECT_EQ(metas.at("fire-sample").level, CodeLevel::kGB);
  EXPECT_EQ(metas.at("fire-sample").year, 2014);
  EXPECT_EQ(metas.at("example-en").level, CodeLevel::kHB);
  EXPECT_FALSE(metas.at("example-en").year.has_value());
  EXPECT_THROW(CodeMetaFromJson({{"level", "XB"}}), Error);
}

}  // namespace
}  // namespace codeinterp
