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

#ifndef CODEINTERP_CLASSIFY_H_
#define CODEINTERP_CLASSIFY_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codeinterp/classifier.h"
#include "codeinterp/dataset.h"
#include "codeinterp/taxonomy.h"
#include "json.hpp"

namespace codeinterp {

class CheckpointResolver;

enum class BackendFamily {
  kNgramLinear,
  kCnn,
  kRnn,
  kRnnAttention,
  kTransformerScratch,
  kPretrainedEncoder,
};

inline constexpr std::array<BackendFamily, 6> kAllFamilies = {
    BackendFamily::kNgramLinear,        BackendFamily::kCnn,
    BackendFamily::kRnn,                BackendFamily::kRnnAttention,
    BackendFamily::kTransformerScratch, BackendFamily::kPretrainedEncoder,
};

std::string_view FamilyName(BackendFamily family);
// Throws kInvalidConfig.
BackendFamily ParseFamily(std::string_view name);

inline constexpr std::string_view kDefaultEncoderCheckpoint = "bert-base-chinese";

// Architecture and optimizer knobs. Each family reads only its own fields.
struct ModelOptions {
  // ngram_linear
  int ngram_min = 1;
  int ngram_max = 3;
  double l2 = 1e-4;
  int64_t max_features = 200000;
  int steps_per_epoch = 10;

  // cnn, rnn, rnn_attention, transformer_scratch
  int embed_dim = 300;
  int64_t max_vocab = 20000;
  // Word vectors in word2vec text format; random initialization when empty.
  std::string embedding_path;
  std::vector<int> filter_sizes = {2, 3, 4};
  int num_filters = 256;
  int hidden_size = 128;
  int num_layers = 2;
  int attention_size = 64;
  int num_heads = 5;
  int ff_size = 1024;
  double dropout = 0.5;

  // pretrained_encoder
  double head_dropout = 0.1;
  double weight_decay = 0.01;

  // Intra-op threads for libtorch; 0 keeps the library default.
  int threads = 0;

  static ModelOptions FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct BackendConfig {
  BackendFamily family = BackendFamily::kNgramLinear;
  std::optional<std::string> checkpoint_id;
  int epochs = 100;
  int padding_size = 64;
  std::vector<double> learning_rate_grid;
  int batch_size = 32;
  uint64_t seed = 0;
  ModelOptions options;

  // Family defaults, including the learning-rate grid.
  static BackendConfig Defaults(BackendFamily family);
  // Keys absent from `j` take the family defaults.
  static BackendConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
  // Throws kInvalidConfig.
  void Validate() const;
};

struct EpochRecord {
  double learning_rate = 0;
  int epoch = 0;  // 1-based
  double train_loss = 0;
  double val_weighted_f1 = 0;
};

using ProbabilityRow = std::array<double, kNumCategories>;

namespace internal {
class Engine;
}

// A trained classifier. Immutable after training or loading, so Predict
// may be called concurrently.
class ClassifierModel : public Classifier {
 public:
  ClassifierModel(BackendConfig config, std::unique_ptr<internal::Engine> engine);
  ~ClassifierModel() override;
  ClassifierModel(ClassifierModel&&) noexcept;
  ClassifierModel& operator=(ClassifierModel&&) noexcept;

  // Texts longer than padding_size tokens are truncated with a warning.
  std::vector<Prediction> Predict(std::span<const std::string> texts) const override;
  std::vector<ProbabilityRow> Probabilities(std::span<const std::string> texts) const;

  const BackendConfig& config() const { return config_; }
  double winning_lr() const { return winning_lr_; }
  int best_epoch() const { return best_epoch_; }
  double best_val_weighted_f1() const { return best_val_weighted_f1_; }
  const std::vector<EpochRecord>& training_log() const { return log_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  std::string embedding_mode() const;

  // Extra metrics stored in the manifest, e.g. test scores from eval.
  nlohmann::json& metrics() { return metrics_; }
  const nlohmann::json& metrics() const { return metrics_; }

  nlohmann::ordered_json Manifest() const;
  void Save(const std::filesystem::path& dir) const;
  static ClassifierModel Load(const std::filesystem::path& dir);

 private:
  friend ClassifierModel Train(const BackendConfig&, const Dataset&,
                               const Dataset&, const CheckpointResolver*);

  BackendConfig config_;
  std::unique_ptr<internal::Engine> engine_;
  double winning_lr_ = 0;
  int best_epoch_ = 0;
  double best_val_weighted_f1_ = 0;
  std::vector<EpochRecord> log_;
  std::vector<std::string> warnings_;
  nlohmann::json metrics_ = nlohmann::json::object();
};

// Grid search over the learning rates; every epoch of every grid point is
// scored on `val` and the best (lr, epoch) state is kept. Ties keep the
// earliest. Throws kDivergedTraining on a non-finite loss; a category absent
// from `train` only produces a warning.
ClassifierModel Train(const BackendConfig& config, const Dataset& train,
                      const Dataset& val,
                      const CheckpointResolver* resolver = nullptr);

// Index of the largest entry; ties go to the lowest category ordinal.
Category ArgmaxCategory(const ProbabilityRow& row);

// Version string of the tensor library backing the neural families.
std::string TorchVersion();

}  // namespace codeinterp

#endif  // CODEINTERP_CLASSIFY_H_
