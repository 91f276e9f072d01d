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

#ifndef CODEINTERP_PRETRAIN_H_
#define CODEINTERP_PRETRAIN_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace codeinterp {

// An exported encoder directory: encoder.pt, vocab.txt, manifest.json.
struct CheckpointInfo {
  std::string checkpoint_id;
  std::filesystem::path dir;
  nlohmann::json manifest;

  std::filesystem::path encoder_path() const { return dir / "encoder.pt"; }
  std::filesystem::path vocab_path() const { return dir / "vocab.txt"; }
  bool lower_case() const;
  int64_t hidden_size() const;
};

// Maps registry names to local checkpoint directories. An id that is itself
// a checkpoint directory resolves to that directory; otherwise each root is
// searched for a subdirectory of that name.
class CheckpointResolver {
 public:
  explicit CheckpointResolver(std::vector<std::filesystem::path> roots);
  // Roots from CODEINTERP_CHECKPOINTS (colon separated), then ./checkpoints.
  static CheckpointResolver FromEnvironment();

  // Throws kCheckpointNotFound.
  CheckpointInfo Resolve(const std::string& checkpoint_id) const;
  const std::vector<std::filesystem::path>& roots() const { return roots_; }

 private:
  std::vector<std::filesystem::path> roots_;
};

struct PretrainConfig {
  double learning_rate = 5e-5;
  int batch_size = 4;
  int epochs = 1;
  // Stop after this many optimizer steps when set.
  std::optional<int64_t> max_steps;
  int max_seq_len = 128;
  double mask_prob = 0.15;
  // Probability that the second segment is a random line.
  double random_next_prob = 0.5;
  // Corpora with fewer usable lines are rejected.
  size_t min_corpus_lines = 2;
  double weight_decay = 0.01;
  uint64_t seed = 0;

  static PretrainConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
  // Throws kInvalidConfig; a zero masking probability is rejected because
  // the masked-token loss would be empty.
  void Validate() const;
};

struct PretrainResult {
  std::string checkpoint_id;
  std::filesystem::path dir;
  int64_t steps = 0;
  std::vector<double> epoch_loss;
};

// Non-empty normalized lines of a UTF-8 text file.
std::vector<std::string> ReadDomainCorpus(const std::filesystem::path& path);

// Continues masked-token plus next-sentence training of `checkpoint_id` on
// unlabeled lines and writes a new checkpoint to `out_dir`. The source
// checkpoint is left untouched. Throws kCheckpointNotFound, kCorpusTooSmall,
// kInvalidConfig, kDivergedTraining.
PretrainResult FurtherPretrain(const std::string& checkpoint_id,
                               const std::vector<std::string>& corpus,
                               const PretrainConfig& config,
                               const std::filesystem::path& out_dir,
                               const CheckpointResolver& resolver);

}  // namespace codeinterp

#endif  // CODEINTERP_PRETRAIN_H_
