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

#ifndef CODEINTERP_SRC_CLASSIFY_TORCH_UTIL_H_
#define CODEINTERP_SRC_CLASSIFY_TORCH_UTIL_H_

#include <torch/torch.h>

#include <vector>

#include "classify/engine.h"

namespace codeinterp::internal {

// Deterministic kernels and the configured thread count.
void ConfigureTorch(const ModelOptions& options);

// Cloned parameter and buffer values.
struct TensorSnapshot : Snapshot {
  std::vector<torch::Tensor> values;
};

std::unique_ptr<TensorSnapshot> CaptureTensors(const std::vector<torch::Tensor>& live);
void RestoreTensors(const TensorSnapshot& snapshot,
                    const std::vector<torch::Tensor>& live);

// Softmax of logits as rows of doubles.
void AppendProbabilities(const torch::Tensor& logits, std::vector<ProbabilityRow>* out);

}  // namespace codeinterp::internal

#endif  // CODEINTERP_SRC_CLASSIFY_TORCH_UTIL_H_
