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

#ifndef CODEINTERP_CLASSIFIER_H_
#define CODEINTERP_CLASSIFIER_H_

#include <span>
#include <string>
#include <vector>

#include "codeinterp/taxonomy.h"

namespace codeinterp {

struct Prediction {
  Category category = Category::kOther;
  double confidence = 0.0;  // softmax probability of `category`
};

// A trained clause classifier. Implementations are immutable after
// construction and safe for concurrent Predict calls.
class Classifier {
 public:
  virtual ~Classifier() = default;

  // One prediction per text, in input order.
  virtual std::vector<Prediction> Predict(
      std::span<const std::string> texts) const = 0;
};

}  // namespace codeinterp

#endif  // CODEINTERP_CLASSIFIER_H_
