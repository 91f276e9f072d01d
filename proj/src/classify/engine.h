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

#ifndef CODEINTERP_SRC_CLASSIFY_ENGINE_H_
#define CODEINTERP_SRC_CLASSIFY_ENGINE_H_

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "codeinterp/classify.h"
#include "codeinterp/dataset.h"
#include "codeinterp/pretrain.h"

namespace codeinterp::internal {

// Inference half of a backend.
class Engine {
 public:
  virtual ~Engine() = default;
  // `truncated` receives the number of texts cut to padding_size.
  virtual std::vector<ProbabilityRow> Probabilities(
      std::span<const std::string> texts, size_t* truncated) const = 0;
  virtual void Save(const std::filesystem::path& dir) const = 0;
  virtual std::string embedding_mode() const { return "none"; }
};

// Opaque copy of trainable state.
class Snapshot {
 public:
  virtual ~Snapshot() = default;
};

// Training half. A trainer is also an engine so it can be scored on the
// validation split between epochs and handed over once training ends.
class Trainer : public Engine {
 public:
  // Fresh parameters for one grid point.
  virtual void Reset(double learning_rate, uint64_t seed) = 0;
  // One pass over the training data; returns the mean training loss.
  virtual double TrainEpoch(uint64_t epoch_seed) = 0;
  virtual std::unique_ptr<Snapshot> Capture() const = 0;
  virtual void Restore(const Snapshot& snapshot) = 0;
  // Frees training-only memory once the final state is restored.
  virtual void ReleaseTrainingData() {}
};

std::unique_ptr<Trainer> MakeNgramTrainer(const BackendConfig& config,
                                          const Dataset& train);
std::unique_ptr<Engine> LoadNgramEngine(const BackendConfig& config,
                                        const std::filesystem::path& dir);

std::unique_ptr<Trainer> MakeNeuralTrainer(const BackendConfig& config,
                                           const Dataset& train);
std::unique_ptr<Engine> LoadNeuralEngine(const BackendConfig& config,
                                         const std::filesystem::path& dir);

std::unique_ptr<Trainer> MakeEncoderTrainer(const BackendConfig& config,
                                            const Dataset& train,
                                            const CheckpointInfo& checkpoint);
std::unique_ptr<Engine> LoadEncoderEngine(const BackendConfig& config,
                                          const std::filesystem::path& dir);

// Row-wise softmax helper shared by the backends.
void SoftmaxInPlace(ProbabilityRow* row);

}  // namespace codeinterp::internal

#endif  // CODEINTERP_SRC_CLASSIFY_ENGINE_H_
