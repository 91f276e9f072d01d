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

// Character n-gram TF-IDF features with multinomial logistic regression,
// trained by full-batch gradient descent.

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "classify/engine.h"
#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"
#include "codeinterp/unicode.h"

namespace codeinterp::internal {
namespace {

constexpr size_t K = kNumCategories;
constexpr char kFileName[] = "ngram_linear.json";

using SparseRow = std::vector<std::pair<int32_t, double>>;

std::u32string PrepareText(std::string_view text, int padding_size,
                           bool* truncated) {
  std::u32string chars =
      unicode::Decode(unicode::LowercaseStripAccents(unicode::NormalizeText(text)));
  *truncated = chars.size() > static_cast<size_t>(padding_size);
  if (*truncated) chars.resize(padding_size);
  return chars;
}

std::map<std::string, int> CountNgrams(const std::u32string& chars, int lo,
                                       int hi) {
  std::map<std::string, int> counts;
  for (int n = lo; n <= hi; ++n) {
    for (size_t i = 0; i + n <= chars.size(); ++i) {
      ++counts[unicode::Encode(std::u32string_view(chars).substr(i, n))];
    }
  }
  return counts;
}

class Featurizer {
 public:
  Featurizer() = default;
  Featurizer(const BackendConfig& config, std::vector<std::string> features,
             std::vector<double> idf)
      : lo_(config.options.ngram_min),
        hi_(config.options.ngram_max),
        padding_(config.padding_size),
        features_(std::move(features)),
        idf_(std::move(idf)) {
    for (size_t i = 0; i < features_.size(); ++i) {
      index_.emplace(features_[i], static_cast<int32_t>(i));
    }
  }

  // Vocabulary and smoothed idf from the training texts.
  static Featurizer Fit(const BackendConfig& config,
                        const std::vector<std::string>& texts) {
    const ModelOptions& o = config.options;
    std::map<std::string, int64_t> df;
    for (const auto& t : texts) {
      bool cut;
      for (const auto& [gram, _] :
           CountNgrams(PrepareText(t, config.padding_size, &cut), o.ngram_min, o.ngram_max)) {
        ++df[gram];
      }
    }
    std::vector<std::pair<std::string, int64_t>> items(df.begin(), df.end());
    if (static_cast<int64_t>(items.size()) > o.max_features) {
      std::stable_sort(items.begin(), items.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      items.resize(o.max_features);
      std::sort(items.begin(), items.end());
    }
    std::vector<std::string> features;
    std::vector<double> idf;
    const double n = static_cast<double>(texts.size());
    for (auto& [gram, count] : items) {
      features.push_back(gram);
      idf.push_back(std::log((1 + n) / (1 + static_cast<double>(count))) + 1);
    }
    return Featurizer(config, std::move(features), std::move(idf));
  }

  SparseRow Transform(std::string_view text, bool* truncated) const {
    SparseRow row;
    for (const auto& [gram, count] :
         CountNgrams(PrepareText(text, padding_, truncated), lo_, hi_)) {
      auto it = index_.find(gram);
      if (it == index_.end()) continue;
      row.emplace_back(it->second, count * idf_[it->second]);
    }
    std::sort(row.begin(), row.end());
    double norm = 0;
    for (const auto& [_, v] : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0) {
      for (auto& [_, v] : row) v /= norm;
    }
    return row;
  }

  size_t size() const { return features_.size(); }
  const std::vector<std::string>& features() const { return features_; }
  const std::vector<double>& idf() const { return idf_; }

 private:
  int lo_ = 1, hi_ = 3, padding_ = 64;
  std::vector<std::string> features_;
  std::vector<double> idf_;
  std::unordered_map<std::string, int32_t> index_;
};

struct LinearState : Snapshot {
  std::vector<double> w;  // K x F, row-major
  std::array<double, K> b{};
};

class NgramLinear : public Trainer {
 public:
  NgramLinear(BackendConfig config, Featurizer featurizer)
      : config_(std::move(config)), featurizer_(std::move(featurizer)) {
    state_.w.assign(K * featurizer_.size(), 0.0);
  }

  NgramLinear(BackendConfig config, Featurizer featurizer, LinearState state)
      : NgramLinear(std::move(config), std::move(featurizer)) {
    state_ = std::move(state);
  }

  void SetTrainingData(const Dataset& train) {
    for (const auto& ex : train.examples()) {
      bool cut;
      rows_.push_back(featurizer_.Transform(ex.clause.text, &cut));
      labels_.push_back(Ordinal(ex.label));
    }
    lipschitz_ = 0.5 * GramSpectralBound() + config_.options.l2;
  }

  void Reset(double learning_rate, uint64_t) override {
    std::fill(state_.w.begin(), state_.w.end(), 0.0);
    state_.b.fill(0.0);
    step_ = learning_rate / lipschitz_;
  }

  double TrainEpoch(uint64_t) override {
    const size_t f = featurizer_.size();
    const double n = static_cast<double>(rows_.size());
    const double l2 = config_.options.l2;
    std::vector<double> grad_w(state_.w.size());
    for (int s = 0; s < config_.options.steps_per_epoch; ++s) {
      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      std::array<double, K> grad_b{};
      for (size_t i = 0; i < rows_.size(); ++i) {
        ProbabilityRow p = Logits(rows_[i]);
        SoftmaxInPlace(&p);
        p[labels_[i]] -= 1.0;
        for (size_t k = 0; k < K; ++k) {
          const double d = p[k] / n;
          grad_b[k] += d;
          double* g = grad_w.data() + k * f;
          for (const auto& [j, v] : rows_[i]) g[j] += d * v;
        }
      }
      for (size_t i = 0; i < state_.w.size(); ++i) {
        state_.w[i] -= step_ * (grad_w[i] + l2 * state_.w[i]);
      }
      for (size_t k = 0; k < K; ++k) state_.b[k] -= step_ * grad_b[k];
    }
    return Loss();
  }

  std::unique_ptr<Snapshot> Capture() const override {
    return std::make_unique<LinearState>(state_);
  }

  void Restore(const Snapshot& snapshot) override {
    state_ = dynamic_cast<const LinearState&>(snapshot);
  }

  void ReleaseTrainingData() override {
    rows_.clear();
    rows_.shrink_to_fit();
    labels_.clear();
  }

  std::vector<ProbabilityRow> Probabilities(std::span<const std::string> texts,
                                            size_t* truncated) const override {
    std::vector<ProbabilityRow> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
      bool cut = false;
      ProbabilityRow p = Logits(featurizer_.Transform(t, &cut));
      SoftmaxInPlace(&p);
      out.push_back(p);
      if (cut && truncated) ++*truncated;
    }
    return out;
  }

  void Save(const std::filesystem::path& dir) const override {
    const size_t f = featurizer_.size();
    nlohmann::ordered_json weights = nlohmann::ordered_json::array();
    for (size_t k = 0; k < K; ++k) {
      weights.push_back(std::vector<double>(state_.w.begin() + k * f,
                                            state_.w.begin() + (k + 1) * f));
    }
    nlohmann::ordered_json j;
    j["features"] = featurizer_.features();
    j["idf"] = featurizer_.idf();
    j["weights"] = weights;
    j["bias"] = state_.b;
    WriteFile(dir / kFileName, j.dump() + "\n");
  }

  double lipschitz() const { return lipschitz_; }

 private:
  ProbabilityRow Logits(const SparseRow& row) const {
    const size_t f = featurizer_.size();
    ProbabilityRow z = state_.b;
    for (size_t k = 0; k < K; ++k) {
      const double* w = state_.w.data() + k * f;
      for (const auto& [j, v] : row) z[k] += w[j] * v;
    }
    return z;
  }

  // Mean cross-entropy plus the ridge term.
  double Loss() const {
    double total = 0;
    for (size_t i = 0; i < rows_.size(); ++i) {
      const ProbabilityRow z = Logits(rows_[i]);
      double m = z[0];
      for (double v : z) m = std::max(m, v);
      double s = 0;
      for (double v : z) s += std::exp(v - m);
      total += m + std::log(s) - z[labels_[i]];
    }
    double ridge = 0;
    for (double w : state_.w) ridge += w * w;
    return total / rows_.size() + 0.5 * config_.options.l2 * ridge;
  }

  // Upper bound on the largest eigenvalue of Z'Z/N, where each row of Z is
  // a feature vector with a constant 1 appended for the bias. Z is
  // non-negative, so power iteration from the all-ones vector followed by
  // the Collatz-Wielandt ratio gives a guaranteed bound.
  double GramSpectralBound() const {
    const size_t f = featurizer_.size();
    const double n = static_cast<double>(rows_.size());
    std::vector<double> v(f + 1, 1.0), av(f + 1);
    auto apply = [&] {
      std::fill(av.begin(), av.end(), 0.0);
      for (const auto& row : rows_) {
        double dot = v[f];
        for (const auto& [j, x] : row) dot += x * v[j];
        for (const auto& [j, x] : row) av[j] += x * dot / n;
        av[f] += dot / n;
      }
    };
    for (int it = 0; it < 30; ++it) {
      apply();
      double norm = 0;
      for (double x : av) norm = std::max(norm, x);
      for (size_t i = 0; i <= f; ++i) v[i] = av[i] / norm;
    }
    apply();
    double bound = 0;
    for (size_t i = 0; i <= f; ++i) bound = std::max(bound, av[i] / v[i]);
    return bound * (1 + 1e-9);
  }

  BackendConfig config_;
  Featurizer featurizer_;
  LinearState state_;
  std::vector<SparseRow> rows_;
  std::vector<size_t> labels_;
  double lipschitz_ = 1;
  double step_ = 1;
};

}  // namespace

std::unique_ptr<Trainer> MakeNgramTrainer(const BackendConfig& config,
                                          const Dataset& train) {
  auto trainer = std::make_unique<NgramLinear>(
      config, Featurizer::Fit(config, train.Texts()));
  trainer->SetTrainingData(train);
  return trainer;
}

std::unique_ptr<Engine> LoadNgramEngine(const BackendConfig& config,
                                        const std::filesystem::path& dir) {
  const nlohmann::json j = ReadJsonFile(dir / kFileName);
  std::vector<std::string> features = j.at("features");
  std::vector<double> idf = j.at("idf");
  const auto& weights = j.at("weights");
  if (idf.size() != features.size() || weights.size() != K) {
    throw Error(ErrorCode::kParse, "inconsistent ngram_linear model file");
  }
  LinearState state;
  for (const auto& row : weights) {
    std::vector<double> r = row;
    if (r.size() != features.size()) {
      throw Error(ErrorCode::kParse, "inconsistent ngram_linear weight row");
    }
    state.w.insert(state.w.end(), r.begin(), r.end());
  }
  state.b = j.at("bias");
  return std::make_unique<NgramLinear>(
      config, Featurizer(config, std::move(features), std::move(idf)),
      std::move(state));
}

}  // namespace codeinterp::internal
