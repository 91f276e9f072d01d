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

// Randomly initialised sequence classifiers over BERT-style basic tokens.

#include <torch/torch.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "classify/engine.h"
#include "classify/torch_util.h"
#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"
#include "codeinterp/random.h"
#include "codeinterp/tokenizer.h"
#include "codeinterp/unicode.h"

namespace codeinterp::internal {
namespace {

constexpr int64_t K = kNumCategories;
constexpr int64_t kPad = 0;
constexpr int64_t kUnk = 1;
constexpr int64_t kEvalBatch = 256;

class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    for (size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
  }

  // Most frequent training tokens first; ties in byte order.
  static Vocabulary Build(const std::vector<std::string>& texts, int64_t max_size) {
    std::map<std::string, int64_t> counts;
    for (const auto& t : texts) {
      for (auto& tok : BasicTokenize(unicode::NormalizeText(t), true)) ++counts[tok];
    }
    std::vector<std::pair<std::string, int64_t>> items(counts.begin(), counts.end());
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> tokens = {"<pad>", "<unk>"};
    for (const auto& [tok, _] : items) {
      if (static_cast<int64_t>(tokens.size()) >= max_size) break;
      tokens.push_back(tok);
    }
    return Vocabulary(std::move(tokens));
  }

  int64_t Id(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnk : static_cast<int64_t>(it->second);
  }

  size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, size_t> index_;
};

struct Batch {
  torch::Tensor ids;      // [B, T] int64
  torch::Tensor lengths;  // [B] int64, >= 1
};

Batch EncodeTexts(const Vocabulary& vocab, std::span<const std::string> texts,
                  int padding, size_t* truncated) {
  const int64_t n = static_cast<int64_t>(texts.size());
  torch::Tensor ids = torch::full({n, padding}, kPad, torch::kInt64);
  torch::Tensor lengths = torch::ones({n}, torch::kInt64);
  auto id_acc = ids.accessor<int64_t, 2>();
  auto len_acc = lengths.accessor<int64_t, 1>();
  for (int64_t i = 0; i < n; ++i) {
    std::vector<std::string> toks = BasicTokenize(unicode::NormalizeText(texts[i]), true);
    if (toks.size() > static_cast<size_t>(padding)) {
      toks.resize(padding);
      if (truncated) ++*truncated;
    }
    if (toks.empty()) {
      id_acc[i][0] = kUnk;
      continue;
    }
    for (size_t t = 0; t < toks.size(); ++t) id_acc[i][t] = vocab.Id(toks[t]);
    len_acc[i] = static_cast<int64_t>(toks.size());
  }
  return {ids, lengths};
}

class SeqModel : public torch::nn::Module {
 public:
  virtual torch::Tensor Forward(const torch::Tensor& ids, const torch::Tensor& lengths) = 0;
  torch::nn::Embedding embedding{nullptr};
};

class TextCnn : public SeqModel {
 public:
  TextCnn(int64_t vocab, const ModelOptions& o) {
    embedding = register_module(
        "embedding",
        torch::nn::Embedding(torch::nn::EmbeddingOptions(vocab, o.embed_dim).padding_idx(kPad)));
    for (size_t i = 0; i < o.filter_sizes.size(); ++i) {
      convs_.push_back(register_module(
          "conv" + std::to_string(i),
          torch::nn::Conv2d(torch::nn::Conv2dOptions(
              1, o.num_filters, {o.filter_sizes[i], o.embed_dim}))));
    }
    dropout_ = register_module("dropout", torch::nn::Dropout(o.dropout));
    fc_ = register_module(
        "fc", torch::nn::Linear(o.num_filters * static_cast<int64_t>(convs_.size()), K));
  }

  torch::Tensor Forward(const torch::Tensor& ids, const torch::Tensor&) override {
    const torch::Tensor x = embedding(ids).unsqueeze(1);
    std::vector<torch::Tensor> pooled;
    for (auto& conv : convs_) {
      pooled.push_back(std::get<0>(torch::relu(conv(x)).squeeze(3).max(2)));
    }
    return fc_(dropout_(torch::cat(pooled, 1)));
  }

 private:
  std::vector<torch::nn::Conv2d> convs_;
  torch::nn::Dropout dropout_{nullptr};
  torch::nn::Linear fc_{nullptr};
};

torch::nn::LSTM MakeLstm(const ModelOptions& o) {
  return torch::nn::LSTM(torch::nn::LSTMOptions(o.embed_dim, o.hidden_size)
                             .num_layers(o.num_layers)
                             .bidirectional(true)
                             .batch_first(true)
                             .dropout(o.num_layers > 1 ? o.dropout : 0.0));
}

class TextRnn : public SeqModel {
 public:
  TextRnn(int64_t vocab, const ModelOptions& o) {
    embedding = register_module(
        "embedding",
        torch::nn::Embedding(torch::nn::EmbeddingOptions(vocab, o.embed_dim).padding_idx(kPad)));
    lstm_ = register_module("lstm", MakeLstm(o));
    dropout_ = register_module("dropout", torch::nn::Dropout(o.dropout));
    fc_ = register_module("fc", torch::nn::Linear(2 * o.hidden_size, K));
  }

  torch::Tensor Forward(const torch::Tensor& ids, const torch::Tensor& lengths) override {
    auto packed = torch::nn::utils::rnn::pack_padded_sequence(
        embedding(ids), lengths, /*batch_first=*/true, /*enforce_sorted=*/false);
    const torch::Tensor h = std::get<0>(std::get<1>(lstm_->forward_with_packed_input(packed)));
    // Final forward and backward states of the top layer.
    const int64_t n = h.size(0);
    return fc_(dropout_(torch::cat({h[n - 2], h[n - 1]}, 1)));
  }

 private:
  torch::nn::LSTM lstm_{nullptr};
  torch::nn::Dropout dropout_{nullptr};
  torch::nn::Linear fc_{nullptr};
};

class TextRnnAttention : public SeqModel {
 public:
  TextRnnAttention(int64_t vocab, const ModelOptions& o) {
    embedding = register_module(
        "embedding",
        torch::nn::Embedding(torch::nn::EmbeddingOptions(vocab, o.embed_dim).padding_idx(kPad)));
    lstm_ = register_module("lstm", MakeLstm(o));
    w_ = register_parameter("attention", torch::zeros({2 * o.hidden_size}));
    dropout_ = register_module("dropout", torch::nn::Dropout(o.dropout));
    fc1_ = register_module("fc1", torch::nn::Linear(2 * o.hidden_size, o.attention_size));
    fc_ = register_module("fc", torch::nn::Linear(o.attention_size, K));
  }

  torch::Tensor Forward(const torch::Tensor& ids, const torch::Tensor& lengths) override {
    auto packed = torch::nn::utils::rnn::pack_padded_sequence(
        embedding(ids), lengths, /*batch_first=*/true, /*enforce_sorted=*/false);
    auto out = std::get<0>(torch::nn::utils::rnn::pad_packed_sequence(
        std::get<0>(lstm_->forward_with_packed_input(packed)), /*batch_first=*/true));
    const torch::Tensor scores = torch::matmul(torch::tanh(out), w_);
    const torch::Tensor positions = torch::arange(out.size(1)).unsqueeze(0);
    const torch::Tensor pad = positions >= lengths.unsqueeze(1);
    const torch::Tensor alpha =
        torch::softmax(scores.masked_fill(pad, -std::numeric_limits<float>::infinity()), 1);
    const torch::Tensor context = (out * alpha.unsqueeze(-1)).sum(1);
    return fc_(fc1_(dropout_(torch::relu(context))));
  }

 private:
  torch::nn::LSTM lstm_{nullptr};
  torch::Tensor w_;
  torch::nn::Dropout dropout_{nullptr};
  torch::nn::Linear fc1_{nullptr}, fc_{nullptr};
};

class TransformerScratch : public SeqModel {
 public:
  TransformerScratch(int64_t vocab, int padding, const ModelOptions& o) {
    embedding = register_module(
        "embedding",
        torch::nn::Embedding(torch::nn::EmbeddingOptions(vocab, o.embed_dim).padding_idx(kPad)));
    // Fixed sinusoidal positions.
    torch::Tensor pe = torch::zeros({padding, o.embed_dim});
    for (int p = 0; p < padding; ++p) {
      for (int i = 0; i < o.embed_dim; ++i) {
        const double angle = p / std::pow(10000.0, (i / 2 * 2.0) / o.embed_dim);
        pe[p][i] = i % 2 == 0 ? std::sin(angle) : std::cos(angle);
      }
    }
    positions_ = register_buffer("positions", pe);
    dropout_ = register_module("dropout", torch::nn::Dropout(o.dropout));
    encoder_ = register_module(
        "encoder",
        torch::nn::TransformerEncoder(torch::nn::TransformerEncoderOptions(
            torch::nn::TransformerEncoderLayerOptions(o.embed_dim, o.num_heads)
                .dim_feedforward(o.ff_size)
                .dropout(o.dropout),
            o.num_layers)));
    fc_ = register_module("fc", torch::nn::Linear(o.embed_dim, K));
  }

  torch::Tensor Forward(const torch::Tensor& ids, const torch::Tensor& lengths) override {
    const torch::Tensor x = dropout_(embedding(ids) + positions_.slice(0, 0, ids.size(1)));
    const torch::Tensor pad =
        torch::arange(ids.size(1)).unsqueeze(0) >= lengths.unsqueeze(1);
    const torch::Tensor h =
        encoder_(x.transpose(0, 1), /*src_mask=*/torch::Tensor(), /*src_key_padding_mask=*/pad)
            .transpose(0, 1);
    const torch::Tensor keep = (~pad).unsqueeze(-1).to(h.dtype());
    return fc_((h * keep).sum(1) / keep.sum(1));
  }

 private:
  torch::Tensor positions_;
  torch::nn::Dropout dropout_{nullptr};
  torch::nn::TransformerEncoder encoder_{nullptr};
  torch::nn::Linear fc_{nullptr};
};

std::shared_ptr<SeqModel> MakeModel(const BackendConfig& config, int64_t vocab) {
  const ModelOptions& o = config.options;
  switch (config.family) {
    case BackendFamily::kCnn:
      return std::make_shared<TextCnn>(vocab, o);
    case BackendFamily::kRnn:
      return std::make_shared<TextRnn>(vocab, o);
    case BackendFamily::kRnnAttention:
      return std::make_shared<TextRnnAttention>(vocab, o);
    case BackendFamily::kTransformerScratch:
      return std::make_shared<TransformerScratch>(vocab, config.padding_size, o);
    default:
      throw Error(ErrorCode::kInvalidConfig, "not a neural baseline family");
  }
}

// word2vec text format, optionally with a "count dim" header line.
std::unordered_map<std::string, std::vector<float>> ReadWordVectors(
    const std::filesystem::path& path, const Vocabulary& vocab, int dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::unordered_map<std::string, size_t> wanted;
  for (size_t i = 2; i < vocab.size(); ++i) wanted.emplace(vocab.tokens()[i], i);
  std::unordered_map<std::string, std::vector<float>> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string token;
    if (!(ss >> token)) continue;
    std::vector<float> values;
    float v;
    while (ss >> v) values.push_back(v);
    if (first) {
      first = false;
      if (values.size() == 1) continue;
    }
    if (static_cast<int>(values.size()) != dim) {
      throw Error(ErrorCode::kInvalidConfig,
                  "word vector dimension " + std::to_string(values.size()) +
                      " does not match embed_dim " + std::to_string(dim));
    }
    if (wanted.count(token) && !out.count(token)) out.emplace(token, std::move(values));
  }
  return out;
}

class NeuralClassifier : public Trainer {
 public:
  NeuralClassifier(BackendConfig config, Vocabulary vocab, std::string embedding_mode)
      : config_(std::move(config)),
        vocab_(std::move(vocab)),
        embedding_mode_(std::move(embedding_mode)) {
    ConfigureTorch(config_.options);
    model_ = MakeModel(config_, static_cast<int64_t>(vocab_.size()));
  }

  void SetTrainingData(const Dataset& train) {
    const std::vector<std::string> texts = train.Texts();
    train_ = EncodeTexts(vocab_, texts, config_.padding_size, nullptr);
    std::vector<int64_t> labels;
    for (Category c : train.Labels()) labels.push_back(Ordinal(c));
    labels_ = torch::tensor(labels, torch::kInt64);
    const std::string& path = config_.options.embedding_path;
    if (!path.empty()) {
      vectors_ = ReadWordVectors(path, vocab_, config_.options.embed_dim);
      embedding_mode_ = "pretrained:" + std::to_string(vectors_.size()) + "/" +
                        std::to_string(vocab_.size() - 2);
    }
  }

  void Reset(double learning_rate, uint64_t seed) override {
    torch::manual_seed(seed);
    model_ = MakeModel(config_, static_cast<int64_t>(vocab_.size()));
    if (!vectors_.empty()) {
      torch::NoGradGuard no_grad;
      for (size_t i = 2; i < vocab_.size(); ++i) {
        auto it = vectors_.find(vocab_.tokens()[i]);
        if (it == vectors_.end()) continue;
        model_->embedding->weight[i].copy_(torch::tensor(it->second));
      }
    }
    optimizer_ = std::make_unique<torch::optim::Adam>(
        model_->parameters(), torch::optim::AdamOptions(learning_rate));
  }

  double TrainEpoch(uint64_t epoch_seed) override {
    model_->train();
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
          model_->Forward(train_.ids.index_select(0, idx), train_.lengths.index_select(0, idx));
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
    optimizer_.reset();
    vectors_.clear();
  }

  std::vector<ProbabilityRow> Probabilities(std::span<const std::string> texts,
                                            size_t* truncated) const override {
    std::vector<ProbabilityRow> out;
    out.reserve(texts.size());
    torch::NoGradGuard no_grad;
    model_->eval();
    for (size_t start = 0; start < texts.size(); start += kEvalBatch) {
      const size_t n = std::min<size_t>(kEvalBatch, texts.size() - start);
      const Batch b = EncodeTexts(vocab_, texts.subspan(start, n), config_.padding_size,
                                  truncated);
      AppendProbabilities(model_->Forward(b.ids, b.lengths), &out);
    }
    return out;
  }

  void Save(const std::filesystem::path& dir) const override {
    std::string vocab_text;
    for (const auto& t : vocab_.tokens()) vocab_text += t + "\n";
    WriteFile(dir / "vocab.txt", vocab_text);
    WriteFile(dir / "neural.json",
              nlohmann::ordered_json{{"embedding_mode", embedding_mode_}}.dump(2) + "\n");
    torch::serialize::OutputArchive archive;
    model_->save(archive);
    archive.save_to((dir / "weights.pt").string());
  }

  void Load(const std::filesystem::path& dir) {
    torch::serialize::InputArchive archive;
    archive.load_from((dir / "weights.pt").string());
    model_->load(archive);
  }

  std::string embedding_mode() const override { return embedding_mode_; }

 private:
  std::vector<torch::Tensor> State() const {
    std::vector<torch::Tensor> out = model_->parameters();
    for (const auto& b : model_->buffers()) out.push_back(b);
    return out;
  }

  BackendConfig config_;
  Vocabulary vocab_;
  std::string embedding_mode_;
  std::shared_ptr<SeqModel> model_;
  std::unique_ptr<torch::optim::Adam> optimizer_;
  Batch train_;
  torch::Tensor labels_;
  std::unordered_map<std::string, std::vector<float>> vectors_;
};

}  // namespace

std::unique_ptr<Trainer> MakeNeuralTrainer(const BackendConfig& config,
                                           const Dataset& train) {
  auto trainer = std::make_unique<NeuralClassifier>(
      config, Vocabulary::Build(train.Texts(), config.options.max_vocab), "random");
  trainer->SetTrainingData(train);
  return trainer;
}

std::unique_ptr<Engine> LoadNeuralEngine(const BackendConfig& config,
                                         const std::filesystem::path& dir) {
  std::vector<std::string> tokens = ReadLines(dir / "vocab.txt");
  while (!tokens.empty() && tokens.back().empty()) tokens.pop_back();
  const nlohmann::json meta = ReadJsonFile(dir / "neural.json");
  auto engine = std::make_unique<NeuralClassifier>(config, Vocabulary(std::move(tokens)),
                                                   meta.value("embedding_mode", "random"));
  engine->Load(dir);
  return engine;
}

}  // namespace codeinterp::internal
