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

#include "classify/torch_util.h"

#include "codeinterp/errors.h"

namespace codeinterp::internal {

void ConfigureTorch(const ModelOptions& options) {
  at::globalContext().setDeterministicAlgorithms(true, /*warn_only=*/false);
  if (options.threads > 0) torch::set_num_threads(options.threads);
}

std::unique_ptr<TensorSnapshot> CaptureTensors(const std::vector<torch::Tensor>& live) {
  auto snap = std::make_unique<TensorSnapshot>();
  torch::NoGradGuard no_grad;
  snap->values.reserve(live.size());
  for (const auto& t : live) snap->values.push_back(t.detach().clone());
  return snap;
}

void RestoreTensors(const TensorSnapshot& snapshot,
                    const std::vector<torch::Tensor>& live) {
  if (snapshot.values.size() != live.size()) {
    throw Error(ErrorCode::kInvalidArgument, "snapshot does not match model");
  }
  torch::NoGradGuard no_grad;
  for (size_t i = 0; i < live.size(); ++i) {
    live[i].copy_(snapshot.values[i]);
  }
}

void AppendProbabilities(const torch::Tensor& logits, std::vector<ProbabilityRow>* out) {
  const torch::Tensor p =
      torch::softmax(logits.to(torch::kFloat64), 1).contiguous();
  const double* data = p.data_ptr<double>();
  for (int64_t i = 0; i < p.size(0); ++i) {
    ProbabilityRow row;
    std::copy(data + i * kNumCategories, data + (i + 1) * kNumCategories, row.begin());
    out->push_back(row);
  }
}

}  // namespace codeinterp::internal
