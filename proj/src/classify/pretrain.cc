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

#include "codeinterp/pretrain.h"

#include <torch/script.h>
#include <torch/torch.h>

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"
#include "codeinterp/log.h"
#include "codeinterp/random.h"
#include "codeinterp/tokenizer.h"
#include "codeinterp/unicode.h"

namespace codeinterp {
namespace {

namespace fs = std::filesystem;

bool IsCheckpointDir(const fs::path& dir) {
  return fs::is_regular_file(dir / "encoder.pt") && fs::is_regular_file(dir / "vocab.txt");
}

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidConfig, message);
}

}  // namespace

bool CheckpointInfo::lower_case() const { return manifest.value("lower_case", true); }

int64_t CheckpointInfo::hidden_size() const {
  if (!manifest.contains("config") || !manifest.at("config").contains("hidden_size")) {
    throw Error(ErrorCode::kParse,
                "checkpoint manifest lacks config.hidden_size: " + dir.string());
  }
  return manifest.at("config").at("hidden_size").get<int64_t>();
}

CheckpointResolver::CheckpointResolver(std::vector<fs::path> roots)
    : roots_(std::move(roots)) {}

CheckpointResolver CheckpointResolver::FromEnvironment() {
  std::vector<fs::path> roots;
  if (const char* env = std::getenv("CODEINTERP_CHECKPOINTS")) {
    std::stringstream ss(env);
    std::string part;
    while (std::getline(ss, part, ':')) {
      if (!part.empty()) roots.emplace_back(part);
    }
  }
  roots.emplace_back("checkpoints");
  return CheckpointResolver(std::move(roots));
}

CheckpointInfo CheckpointResolver::Resolve(const std::string& checkpoint_id) const {
  std::optional<fs::path> found;
  if (!checkpoint_id.empty() && IsCheckpointDir(checkpoint_id)) {
    found = fs::path(checkpoint_id);
  } else {
    for (const auto& root : roots_) {
      if (IsCheckpointDir(root / checkpoint_id)) {
        found = root / checkpoint_id;
        break;
      }
    }
  }
  if (!found) {
    std::string searched;
    for (const auto& r : roots_) searched += " " + r.string();
    throw Error(ErrorCode::kCheckpointNotFound,
                "checkpoint '" + checkpoint_id + "' not found (searched:" + searched +
                    "); export one with tools/export_encoder.py");
  }
  CheckpointInfo info;
  info.checkpoint_id = checkpoint_id;
  info.dir = *found;
  info.manifest = fs::exists(*found / "manifest.json")
                      ? ReadJsonFile(*found / "manifest.json")
                      : nlohmann::json::object();
  return info;
}

PretrainConfig PretrainConfig::FromJson(const nlohmann::json& j) {
  PretrainConfig c;
  if (!j.is_object()) Invalid("pretraining config must be an object");
  try {
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    if (j.contains("max_steps") && !j.at("max_steps").is_null()) {
      c.max_steps = j.at("max_steps").get<int64_t>();
    }
    c.max_seq_len = j.value("max_seq_len", c.max_seq_len);
    c.mask_prob = j.value("mask_prob", c.mask_prob);
    c.random_next_prob = j.value("random_next_prob", c.random_next_prob);
    c.min_corpus_lines = j.value("min_corpus_lines", c.min_corpus_lines);
    c.weight_decay = j.value("weight_decay", c.weight_decay);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    Invalid(std::string("bad pretraining config: ") + e.what());
  }
  return c;
}

nlohmann::json PretrainConfig::ToJson() const {
  return {{"learning_rate", learning_rate},
          {"batch_size", batch_size},
          {"epochs", epochs},
          {"max_steps", max_steps ? nlohmann::json(*max_steps) : nlohmann::json(nullptr)},
          {"max_seq_len", max_seq_len},
          {"mask_prob", mask_prob},
          {"random_next_prob", random_next_prob},
          {"min_corpus_lines", min_corpus_lines},
          {"weight_decay", weight_decay},
          {"seed", seed}};
}

void PretrainConfig::Validate() const {
  if (!(learning_rate > 0) || !std::isfinite(learning_rate)) {
    Invalid("learning_rate must be positive");
  }
  if (batch_size < 1 || epochs < 1) Invalid("batch_size and epochs must be >= 1");
  if (max_steps && *max_steps < 1) Invalid("max_steps must be >= 1");
  if (max_seq_len < 8) Invalid("max_seq_len must be >= 8");
  if (!(mask_prob > 0) || mask_prob > 1) {
    Invalid("mask_prob must be in (0, 1]; zero masking leaves nothing to predict");
  }
  if (random_next_prob < 0 || random_next_prob > 1) {
    Invalid("random_next_prob must be in [0, 1]");
  }
  if (min_corpus_lines < 2) Invalid("min_corpus_lines must be >= 2");
  if (weight_decay < 0) Invalid("weight_decay must be >= 0");
}

std::vector<std::string> ReadDomainCorpus(const fs::path& path) {
  std::vector<std::string> out;
  for (const auto& line : ReadLines(path)) {
    std::string text = unicode::NormalizeText(line);
    if (!text.empty()) out.push_back(std::move(text));
  }
  return out;
}

PretrainResult FurtherPretrain(const std::string& checkpoint_id,
                               const std::vector<std::string>& corpus,
                               const PretrainConfig& config, const fs::path& out_dir,
                               const CheckpointResolver& resolver) {
  config.Validate();
  const CheckpointInfo info = resolver.Resolve(checkpoint_id);
  std::error_code ec;
  if (fs::exists(out_dir / "encoder.pt") ||
      fs::equivalent(out_dir, info.dir, ec)) {
    throw Error(ErrorCode::kInvalidArgument,
                "refusing to overwrite existing checkpoint at " + out_dir.string());
  }
  const BertTokenizer tok = BertTokenizer::FromFile(info.vocab_path(), info.lower_case());
  std::vector<std::vector<int64_t>> lines;
  for (const auto& text : corpus) {
    auto ids = tok.ToIds(tok.Tokenize(text));
    if (!ids.empty()) lines.push_back(std::move(ids));
  }
  if (lines.size() < config.min_corpus_lines) {
    throw Error(ErrorCode::kCorpusTooSmall,
                "corpus has " + std::to_string(lines.size()) + " usable lines; need at least " +
                    std::to_string(config.min_corpus_lines));
  }

  at::globalContext().setDeterministicAlgorithms(true, false);
  torch::manual_seed(config.seed);
  torch::jit::Module encoder = torch::jit::load(info.encoder_path().string());
  encoder.train(true);
  std::vector<torch::Tensor> params;
  for (const auto& p : encoder.parameters()) {
    p.set_requires_grad(true);
    params.push_back(p);
  }
  torch::optim::AdamW optimizer(
      params, torch::optim::AdamWOptions(config.learning_rate).weight_decay(config.weight_decay));

  const int64_t vocab = static_cast<int64_t>(tok.vocab_size());
  const int64_t n = static_cast<int64_t>(lines.size());
  const int64_t len = config.max_seq_len;
  Rng rng(config.seed);
  PretrainResult result;
  bool done = false;
  for (int epoch = 0; epoch < config.epochs && !done; ++epoch) {
    std::vector<int64_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(&order);
    double epoch_total = 0;
    int64_t epoch_steps = 0;
    for (int64_t start = 0; start < n && !done; start += config.batch_size) {
      const int64_t b = std::min<int64_t>(config.batch_size, n - start);
      torch::Tensor ids = torch::empty({b, len}, torch::kInt64);
      torch::Tensor types = torch::empty({b, len}, torch::kInt64);
      torch::Tensor mask = torch::empty({b, len}, torch::kInt64);
      torch::Tensor mlm_labels = torch::full({b, len}, -100, torch::kInt64);
      torch::Tensor nsp_labels = torch::empty({b}, torch::kInt64);
      for (int64_t r = 0; r < b; ++r) {
        const int64_t i = order[start + r];
        // Label 0: the next line follows; 1: a random other line.
        int64_t j = i + 1;
        int64_t label = 0;
        const bool has_random = n > 2 || (n == 2 && i == 1);
        if (j >= n || (has_random && rng.UniformUnit() < config.random_next_prob)) {
          do {
            j = rng.UniformInt(0, n - 1);
          } while (j == i || j == i + 1);
          label = 1;
        }
        Encoding enc = tok.EncodePair(lines[i], lines[j], len);
        std::vector<int64_t> labels(len, -100);
        std::vector<size_t> candidates;
        for (int64_t p = 0; p < len; ++p) {
          const int64_t id = enc.ids[p];
          if (enc.mask[p] && id != tok.cls_id() && id != tok.sep_id() && id != tok.pad_id()) {
            candidates.push_back(p);
          }
        }
        std::vector<size_t> chosen;
        for (size_t p : candidates) {
          if (rng.UniformUnit() < config.mask_prob) chosen.push_back(p);
        }
        if (chosen.empty() && !candidates.empty()) {
          chosen.push_back(candidates[rng.UniformInt(0, candidates.size() - 1)]);
        }
        for (size_t p : chosen) {
          labels[p] = enc.ids[p];
          const double u = rng.UniformUnit();
          if (u < 0.8) {
            enc.ids[p] = tok.mask_id();
          } else if (u < 0.9) {
            enc.ids[p] = rng.UniformInt(0, vocab - 1);
          }
        }
        std::copy(enc.ids.begin(), enc.ids.end(), ids[r].data_ptr<int64_t>());
        std::copy(enc.token_type.begin(), enc.token_type.end(), types[r].data_ptr<int64_t>());
        std::copy(enc.mask.begin(), enc.mask.end(), mask[r].data_ptr<int64_t>());
        std::copy(labels.begin(), labels.end(), mlm_labels[r].data_ptr<int64_t>());
        nsp_labels[r] = label;
      }

      optimizer.zero_grad();
      const auto out = encoder.forward({ids, types, mask}).toTuple();
      const torch::Tensor mlm = out->elements()[0].toTensor();
      const torch::Tensor nsp = out->elements()[1].toTensor();
      torch::Tensor loss = torch::nn::functional::cross_entropy(nsp, nsp_labels);
      if ((mlm_labels != -100).any().item<bool>()) {
        loss = loss + torch::nn::functional::cross_entropy(
                          mlm.reshape({-1, vocab}), mlm_labels.reshape({-1}),
                          torch::nn::functional::CrossEntropyFuncOptions().ignore_index(-100));
      }
      const double value = loss.item<double>();
      if (!std::isfinite(value)) {
        throw Error(ErrorCode::kDivergedTraining,
                    "non-finite pretraining loss at step " + std::to_string(result.steps + 1));
      }
      loss.backward();
      optimizer.step();
      epoch_total += value;
      ++epoch_steps;
      ++result.steps;
      if (result.steps % 100 == 0) {
        log::Info("pretraining step " + std::to_string(result.steps) + " loss " +
                  std::to_string(value));
      }
      if (config.max_steps && result.steps >= *config.max_steps) done = true;
    }
    result.epoch_loss.push_back(epoch_total / std::max<int64_t>(1, epoch_steps));
  }

  fs::create_directories(out_dir);
  encoder.train(false);
  encoder.save((out_dir / "encoder.pt").string());
  fs::copy_file(info.vocab_path(), out_dir / "vocab.txt",
                fs::copy_options::overwrite_existing);
  result.dir = out_dir;
  result.checkpoint_id = out_dir.lexically_normal().string();
  nlohmann::json manifest = info.manifest;
  manifest["checkpoint_id"] = result.checkpoint_id;
  manifest["parent"] = info.checkpoint_id;
  manifest["further_pretraining"] = {{"config", config.ToJson()},
                                     {"corpus_lines", lines.size()},
                                     {"steps", result.steps},
                                     {"epoch_loss", result.epoch_loss}};
  WriteFile(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace codeinterp
