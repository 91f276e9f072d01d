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

// Fine-tuning of an exported TorchScript encoder with a linear head on the
// pooled [CLS] vector.

#include <torch/script.h>
#include <torch/torch.h>

#include <cmath>
#include <numeric>

#include "classify/engine.h"
#include "classify/torch_util.h"
#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"
#include "codeinterp/random.h"
#include "codeinterp/tokenizer.h"

namespace codeinterp::internal {
namespace {

constexpr int64_t K = kNumCategories;
constexpr int64_t kEvalBatch = 32;

struct Encoded {
  torch::Tensor ids, token_type, mask;
};

Encoded EncodeTexts(const BertTokenizer& tok, std::span<const std::string> texts,
                    int padding, size_t* truncated) {
  const int64_t n = static_cast<int64_t>(texts.size());
  Encoded e{torch::empty({n, padding}, torch::kInt64),
            torch::empty({n, padding}, torch::kInt64),
            torch::empty({n, padding}, torch::kInt64)};
  for (int64_t i = 0; i < n; ++i) {
    const Encoding enc = tok.Encode(texts[i], padding);
    if (enc.truncated > 0 && truncated) ++*truncated;
    std::copy(enc.ids.begin(), enc.ids.end(), e.ids[i].data_ptr<int64_t>());
    std::copy(enc.token_type.begin(), enc.token_type.end(),
              e.token_type[i].data_ptr<int64_t>());
    std::copy(enc.mask.begin(), enc.mask.end(), e.mask[i].data_ptr<int64_t>());
  }
  return e;
}

class EncoderClassifier : public Trainer {
 public:
  EncoderClassifier(BackendConfig config, BertTokenizer tokenizer,
                    torch::jit::Module encoder, int64_t hidden, nlohmann::json meta)
      : config_(std::move(config)),
        tokenizer_(std::move(tokenizer)),
        encoder_(std::move(encoder)),
        hidden_(hidden),
        meta_(std::move(meta)) {
    ConfigureTorch(config_.options);
    MakeHead();
  }

  void SetTrainingData(const Dataset& train) {
    train_ = EncodeTexts(tokenizer_, train.Texts(), config_.padding_size, nullptr);
    std::vector<int64_t> labels;
    for (Category c : train.Labels()) labels.push_back(Ordinal(c));
    labels_ = torch::tensor(labels, torch::kInt64);
    initial_ = CaptureTensors(EncoderParameters());
  }

  void Reset(double learning_rate, uint64_t seed) override {
    torch::manual_seed(seed);
    RestoreTensors(*initial_, EncoderParameters());
    MakeHead();
    std::vector<torch::Tensor> params = EncoderParameters();
    for (auto& p : params) p.set_requires_grad(true);
    for (const auto& p : head_->parameters()) params.push_back(p);
    optimizer_ = std::make_unique<torch::optim::AdamW>(
        params, torch::optim::AdamWOptions(learning_rate)
                    .weight_decay(config_.options.weight_decay));
  }

  double TrainEpoch(uint64_t epoch_seed) override {
    encoder_.train(true);
    head_->train();
    std::vector<int64_t> order(labels_.size(0));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(epoch_seed);
    rng.Shuffle(&order);
    double total = 0;
    for (size_t start = 0; start < order.size(); start += config_.batch_size) {
      const size_t end = std::min(order.size(), start + config_.batch_size);
      const torch::Tensor idx = torch::tensor(
          std::vector<int64_t>(order.begin() + start, order.begin() + end), torch::kInt64);
      optimizer_->zero_grad();
      const torch::Tensor logits =
          Forward(train_.ids.index_select(0, idx), train_.token_type.index_select(0, idx),
                  train_.mask.index_select(0, idx));
      const torch::Tensor loss =
          torch::nn::functional::cross_entropy(logits, labels_.index_select(0, idx));
      const double value = loss.item<double>();
      if (!std::isfinite(value)) return value;
      loss.backward();
      optimizer_->step();
      total += value * static_cast<double>(end - start);
    }
    return total / static_cast<double>(order.size());
  }

  std::unique_ptr<Snapshot> Capture() const override { return CaptureTensors(State()); }
  void Restore(const Snapshot& s) override {
    RestoreTensors(dynamic_cast<const TensorSnapshot&>(s), State());
  }

  void ReleaseTrainingData() override {
    train_ = {};
    labels_ = torch::Tensor();
    initial_.reset();
    optimizer_.reset();
  }

  std::vector<ProbabilityRow> Probabilities(std::span<const std::string> texts,
                                            size_t* truncated) const override {
    std::vector<ProbabilityRow> out;
    out.reserve(texts.size());
    torch::NoGradGuard no_grad;
    encoder_.train(false);
    head_->eval();
    for (size_t start = 0; start < texts.size(); start += kEvalBatch) {
      const size_t n = std::min<size_t>(kEvalBatch, texts.size() - start);
      const Encoded e =
          EncodeTexts(tokenizer_, texts.subspan(start, n), config_.padding_size, truncated);
      AppendProbabilities(Forward(e.ids, e.token_type, e.mask), &out);
    }
    return out;
  }

  void Save(const std::filesystem::path& dir) const override {
    encoder_.save((dir / "encoder.pt").string());
    torch::serialize::OutputArchive archive;
    head_->save(archive);
    archive.save_to((dir / "head.pt").string());
    std::string vocab;
    for (const auto& t : tokenizer_.vocab()) vocab += t + "\n";
    WriteFile(dir / "vocab.txt", vocab);
    WriteFile(dir / "encoder.json", meta_.dump(2) + "\n");
  }

  void LoadHead(const std::filesystem::path& path) {
    torch::serialize::InputArchive archive;
    archive.load_from(path.string());
    head_->load(archive);
  }

  std::string embedding_mode() const override { return "pretrained_encoder"; }

 private:
  void MakeHead() {
    head_ = torch::nn::Sequential(torch::nn::Dropout(config_.options.head_dropout),
                                  torch::nn::Linear(hidden_, K));
    torch::NoGradGuard no_grad;
    for (auto& p : head_->named_parameters()) {
      if (p.key().find("weight") != std::string::npos) {
        p.value().normal_(0.0, 0.02);
      } else {
        p.value().zero_();
      }
    }
  }

  torch::Tensor Forward(const torch::Tensor& ids, const torch::Tensor& token_type,
                        const torch::Tensor& mask) const {
    const torch::Tensor pooled =
        encoder_.get_method("encode")({ids, token_type, mask}).toTensor();
    return head_->forward(pooled);
  }

  std::vector<torch::Tensor> EncoderParameters() const {
    std::vector<torch::Tensor> out;
    for (const auto& p : encoder_.parameters()) out.push_back(p);
    return out;
  }

  std::vector<torch::Tensor> State() const {
    std::vector<torch::Tensor> out = EncoderParameters();
    for (const auto& p : head_->parameters()) out.push_back(p);
    return out;
  }

  BackendConfig config_;
  BertTokenizer tokenizer_;
  mutable torch::jit::Module encoder_;
  int64_t hidden_;
  nlohmann::json meta_;
  mutable torch::nn::Sequential head_{nullptr};
  std::unique_ptr<torch::optim::AdamW> optimizer_;
  std::unique_ptr<TensorSnapshot> initial_;
  Encoded train_;
  torch::Tensor labels_;
};

}  // namespace

std::unique_ptr<Trainer> MakeEncoderTrainer(const BackendConfig& config,
                                            const Dataset& train,
                                            const CheckpointInfo& checkpoint) {
  torch::jit::Module encoder = torch::jit::load(checkpoint.encoder_path().string());
  nlohmann::json meta = {{"source_checkpoint", checkpoint.checkpoint_id},
                         {"lower_case", checkpoint.lower_case()},
                         {"hidden_size", checkpoint.hidden_size()}};
  auto trainer = std::make_unique<EncoderClassifier>(
      config, BertTokenizer::FromFile(checkpoint.vocab_path(), checkpoint.lower_case()),
      std::move(encoder), checkpoint.hidden_size(), std::move(meta));
  trainer->SetTrainingData(train);
  return trainer;
}

std::unique_ptr<Engine> LoadEncoderEngine(const BackendConfig& config,
                                          const std::filesystem::path& dir) {
  const nlohmann::json meta = ReadJsonFile(dir / "encoder.json");
  const bool lower = meta.value("lower_case", true);
  auto engine = std::make_unique<EncoderClassifier>(
      config, BertTokenizer::FromFile(dir / "vocab.txt", lower),
      torch::jit::load((dir / "encoder.pt").string()), meta.at("hidden_size").get<int64_t>(),
      meta);
  engine->LoadHead(dir / "head.pt");
  return engine;
}

}  // namespace codeinterp::internal
