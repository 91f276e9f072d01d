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

#include <gtest/gtest.h>

#include <cmath>

#include "codeinterp/classify.h"
#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"
#include "test_util.h"

namespace codeinterp {
namespace {

DatasetSplit FixtureSplit() {
  SplitSpec spec;
  spec.seed = 21;
  spec.stratified = true;
  return Split(LoadDataset(codeinterp::testing::DataDir() / "labeled" / "clauses.jsonl"),
               spec);
}

// Small enough to train in well under a second per epoch.
BackendConfig Tiny(BackendFamily family) {
  BackendConfig c = BackendConfig::Defaults(family);
  c.epochs = 4;
  c.padding_size = 24;
  c.batch_size = 16;
  c.learning_rate_grid = {5e-3, 1e-3};
  c.seed = 3;
  c.options.embed_dim = 16;
  c.options.num_filters = 8;
  c.options.hidden_size = 8;
  c.options.num_layers = 1;
  c.options.attention_size = 8;
  c.options.num_heads = 2;
  c.options.ff_size = 32;
  c.options.dropout = 0.1;
  c.options.threads = 1;
  return c;
}

class NeuralFamilyTest : public ::testing::TestWithParam<BackendFamily> {};

TEST_P(NeuralFamilyTest, TrainPredictSaveLoad) {
  const DatasetSplit split = FixtureSplit();
  const BackendConfig config = Tiny(GetParam());
  const ClassifierModel model = Train(config, split.train, split.val);
  EXPECT_EQ(model.embedding_mode(), "random");
  ASSERT_EQ(model.training_log().size(), 8u);
  for (const auto& r : model.training_log()) {
    EXPECT_TRUE(std::isfinite(r.train_loss));
    EXPECT_LE(r.val_weighted_f1, model.best_val_weighted_f1());
  }

  const std::vector<std::string> texts = split.test.Texts();
  const auto preds = model.Predict(texts);
  ASSERT_EQ(preds.size(), texts.size());
  for (const auto& p : preds) {
    EXPECT_GE(p.confidence, 0.0);
    EXPECT_LE(p.confidence, 1.0);
  }
  const auto again = model.Probabilities(texts);
  EXPECT_EQ(again, model.Probabilities(texts));

  const auto dir = codeinterp::testing::ScratchDir(
      "neural_" + std::string(FamilyName(GetParam())));
  model.Save(dir);
  const ClassifierModel loaded = ClassifierModel::Load(dir);
  const auto reloaded = loaded.Probabilities(texts);
  ASSERT_EQ(reloaded.size(), again.size());
  for (size_t i = 0; i < again.size(); ++i) {
    for (size_t k = 0; k < kNumCategories; ++k) {
      EXPECT_NEAR(reloaded[i][k], again[i][k], 1e-12);
    }
  }
  EXPECT_EQ(ReadJsonFile(dir / "manifest.json").at("family"), FamilyName(GetParam()));
}

TEST_P(NeuralFamilyTest, DeterministicGivenSeed) {
  const DatasetSplit split = FixtureSplit();
  BackendConfig config = Tiny(GetParam());
  config.epochs = 2;
  config.learning_rate_grid = {1e-3};
  const ClassifierModel a = Train(config, split.train, split.val);
  const ClassifierModel b = Train(config, split.train, split.val);
  EXPECT_EQ(a.Manifest(), b.Manifest());
  EXPECT_EQ(a.Probabilities(split.test.Texts()), b.Probabilities(split.test.Texts()));
}

INSTANTIATE_TEST_SUITE_P(
    Families, NeuralFamilyTest,
    ::testing::Values(BackendFamily::kCnn, BackendFamily::kRnn,
                      BackendFamily::kRnnAttention, BackendFamily::kTransformerScratch),
    [](const auto& info) { return std::string(FamilyName(info.param)); });

TEST(NeuralTest, CnnLearnsFixture) {
  const DatasetSplit split = FixtureSplit();
  BackendConfig config = Tiny(BackendFamily::kCnn);
  config.epochs = 30;
  config.learning_rate_grid = {5e-3};
  const ClassifierModel model = Train(config, split.train, split.val);
  const auto& log = model.training_log();
  EXPECT_LT(log.back().train_loss, 0.5 * log.front().train_loss);
  // Well above the 1/7 chance level.
  EXPECT_GE(model.best_val_weighted_f1(), 0.5);
}

TEST(NeuralTest, PretrainedWordVectors) {
  const DatasetSplit split = FixtureSplit();
  const auto dir = codeinterp::testing::ScratchDir("word_vectors");
  std::string vectors = "3 4\n";
  vectors += "建 0.1 0.2 0.3 0.4\n";
  vectors += "shall 0.5 0.5 0.5 0.5\n";
  vectors += "nowhere 1 1 1 1\n";
  WriteFile(dir / "vec.txt", vectors);
  BackendConfig config = Tiny(BackendFamily::kCnn);
  config.epochs = 1;
  config.options.embed_dim = 4;
  config.options.embedding_path = (dir / "vec.txt").string();
  const ClassifierModel model = Train(config, split.train, split.val);
  EXPECT_EQ(model.embedding_mode().rfind("pretrained:2/", 0), 0u) << model.embedding_mode();

  config.options.embed_dim = 5;
  try {
    Train(config, split.train, split.val);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
  }
}

TEST(NeuralTest, TruncatesToPaddingSize) {
  const DatasetSplit split = FixtureSplit();
  BackendConfig config = Tiny(BackendFamily::kCnn);
  config.epochs = 1;
  config.padding_size = 8;
  config.options.filter_sizes = {2, 3};
  const ClassifierModel model = Train(config, split.train, split.val);
  const std::string head = "防火分区的面积应符";
  const auto p = model.Probabilities(
      std::vector<std::string>{head + "合规定", head + "甲乙丙丁"});
  EXPECT_EQ(p[0], p[1]);
}

}  // namespace
}  // namespace codeinterp
