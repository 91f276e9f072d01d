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

#include "codeinterp/tokenizer.h"

#include <gtest/gtest.h>

#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"
#include "test_util.h"

namespace codeinterp {
namespace {

std::filesystem::path FixtureDir() {
  return codeinterp::testing::DataDir() / "tiny-encoder";
}

TEST(BasicTokenizeTest, SplitsCjkAndPunctuation) {
  EXPECT_EQ(BasicTokenize("建筑高度:27m", true),
            (std::vector<std::string>{"建", "筑", "高", "度", ":", "27m"}));
  EXPECT_EQ(BasicTokenize("  Hello, World!  ", true),
            (std::vector<std::string>{"hello", ",", "world", "!"}));
  EXPECT_EQ(BasicTokenize("Café", false), (std::vector<std::string>{"Café"}));
  EXPECT_EQ(BasicTokenize("Café", true), (std::vector<std::string>{"cafe"}));
  EXPECT_TRUE(BasicTokenize("", true).empty());
}

// Token ids recorded from the reference tokenizer at fixture export time.
TEST(BertTokenizerTest, MatchesReferenceTokenizer) {
  const BertTokenizer tok = BertTokenizer::FromFile(FixtureDir() / "vocab.txt", true);
  const nlohmann::json ref = ReadJsonFile(FixtureDir() / "reference.json");
  const size_t max_len = ref.at("max_len");
  ASSERT_GE(ref.at("cases").size(), 5u);
  for (const auto& c : ref.at("cases")) {
    const std::string text = c.at("text");
    EXPECT_EQ(tok.Tokenize(text), c.at("tokens").get<std::vector<std::string>>()) << text;
    const Encoding enc = tok.Encode(text, max_len);
    EXPECT_EQ(enc.ids, c.at("ids").get<std::vector<int64_t>>()) << text;
  }
}

TEST(BertTokenizerTest, EncodeShapes) {
  const BertTokenizer tok = BertTokenizer::FromFile(FixtureDir() / "vocab.txt", true);
  const Encoding short_enc = tok.Encode("ab", 8);
  EXPECT_EQ(short_enc.ids.size(), 8u);
  EXPECT_EQ(short_enc.ids.front(), tok.cls_id());
  EXPECT_EQ(short_enc.truncated, 0u);
  EXPECT_EQ(short_enc.mask, (std::vector<int64_t>{1, 1, 1, 1, 0, 0, 0, 0}));

  const Encoding long_enc = tok.Encode("建筑高度不应小于二十七米", 8);
  EXPECT_EQ(long_enc.truncated, 6u);
  EXPECT_EQ(long_enc.ids.back(), tok.sep_id());

  const Encoding pair = tok.EncodePair({10, 11, 12, 13, 14}, {20, 21}, 8);
  EXPECT_EQ(pair.truncated, 2u);
  EXPECT_EQ(pair.ids, (std::vector<int64_t>{tok.cls_id(), 10, 11, 12, tok.sep_id(), 20,
                                            21, tok.sep_id()}));
  EXPECT_EQ(pair.token_type, (std::vector<int64_t>{0, 0, 0, 0, 0, 1, 1, 1}));
}

TEST(BertTokenizerTest, RequiresSpecialTokens) {
  EXPECT_THROW(BertTokenizer({"a", "b"}, true), Error);
}

}  // namespace
}  // namespace codeinterp
