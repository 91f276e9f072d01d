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

#include "codeinterp/classify.h"


#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "classify/engine.h"
#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"
#include "codeinterp/log.h"
#include "codeinterp/metrics.h"
#include "codeinterp/pretrain.h"
#include "codeinterp/random.h"
#include "torch/version.h"

namespace codeinterp {
namespace {

constexpr std::string_view kFamilyNames[] = {
    "ngram_linear", "cnn", "rnn", "rnn_attention", "transformer_scratch",
    "pretrained_encoder",
};

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidConfig, message);
}

template <typename T>
void Read(const nlohmann::json& j, const char* key, T* out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    *out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    Invalid(std::string("bad value for '") + key + "'");
  }
}

// printf-style formatting; fmt is avoided here because libtorch ships a
// different release of it on the include path.
template <typename... Args>
std::string Format(const char* pattern, Args... args) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, pattern, args...);
  return buffer;
}

std::vector<Category> ArgmaxAll(const std::vector<ProbabilityRow>& rows) {
  std::vector<Category> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(ArgmaxCategory(r));
  return out;
}

}  // namespace

std::string_view FamilyName(BackendFamily family) {
  return kFamilyNames[static_cast<int>(family)];
}

BackendFamily ParseFamily(std::string_view name) {
  for (BackendFamily f : kAllFamilies) {
    if (FamilyName(f) == name) return f;
  }
  Invalid("unknown backend family '" + std::string(name) + "'");
}

ModelOptions ModelOptions::FromJson(const nlohmann::json& j) {
  ModelOptions o;
  if (!j.is_object()) Invalid("options must be an object");
  Read(j, "ngram_min", &o.ngram_min);
  Read(j, "ngram_max", &o.ngram_max);
  Read(j, "l2", &o.l2);
  Read(j, "max_features", &o.max_features);
  Read(j, "steps_per_epoch", &o.steps_per_epoch);
  Read(j, "embed_dim", &o.embed_dim);
  Read(j, "max_vocab", &o.max_vocab);
  Read(j, "embedding_path", &o.embedding_path);
  Read(j, "filter_sizes", &o.filter_sizes);
  Read(j, "num_filters", &o.num_filters);
  Read(j, "hidden_size", &o.hidden_size);
  Read(j, "num_layers", &o.num_layers);
  Read(j, "attention_size", &o.attention_size);
  Read(j, "num_heads", &o.num_heads);
  Read(j, "ff_size", &o.ff_size);
  Read(j, "dropout", &o.dropout);
  Read(j, "head_dropout", &o.head_dropout);
  Read(j, "weight_decay", &o.weight_decay);
  Read(j, "threads", &o.threads);
  return o;
}

nlohmann::json ModelOptions::ToJson() const {
  return {
      {"ngram_min", ngram_min},       {"ngram_max", ngram_max},
      {"l2", l2},                     {"max_features", max_features},
      {"steps_per_epoch", steps_per_epoch},
      {"embed_dim", embed_dim},       {"max_vocab", max_vocab},
      {"embedding_path", embedding_path},
      {"filter_sizes", filter_sizes}, {"num_filters", num_filters},
      {"hidden_size", hidden_size},   {"num_layers", num_layers},
      {"attention_size", attention_size},
      {"num_heads", num_heads},       {"ff_size", ff_size},
      {"dropout", dropout},           {"head_dropout", head_dropout},
      {"weight_decay", weight_decay}, {"threads", threads},
  };
}

BackendConfig BackendConfig::Defaults(BackendFamily family) {
  BackendConfig c;
  c.family = family;
  switch (family) {
    case BackendFamily::kNgramLinear:
      // Step sizes relative to 1/L, L being the gradient Lipschitz bound.
      c.learning_rate_grid = {1.9, 1.0, 0.5};
      break;
    case BackendFamily::kPretrainedEncoder:
      c.checkpoint_id = std::string(kDefaultEncoderCheckpoint);
      c.learning_rate_grid = {7e-5, 5e-5, 3e-5, 1e-5};
      break;
    default:
      c.learning_rate_grid = {1e-3, 5e-4, 2.5e-4, 1e-4};
      break;
  }
  return c;
}

BackendConfig BackendConfig::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) Invalid("backend config must be an object");
  const BackendFamily family = ParseFamily(j.value("family", "ngram_linear"));
  BackendConfig c = Defaults(family);
  if (j.contains("checkpoint_id")) {
    if (j.at("checkpoint_id").is_null()) {
      c.checkpoint_id.reset();
    } else {
      c.checkpoint_id = j.at("checkpoint_id").get<std::string>();
    }
  }
  Read(j, "epochs", &c.epochs);
  Read(j, "padding_size", &c.padding_size);
  Read(j, "learning_rate_grid", &c.learning_rate_grid);
  Read(j, "batch_size", &c.batch_size);
  Read(j, "seed", &c.seed);
  if (j.contains("options")) c.options = ModelOptions::FromJson(j.at("options"));
  return c;
}

nlohmann::json BackendConfig::ToJson() const {
  nlohmann::json j = {
      {"family", FamilyName(family)},
      {"checkpoint_id", nullptr},
      {"epochs", epochs},
      {"padding_size", padding_size},
      {"learning_rate_grid", learning_rate_grid},
      {"batch_size", batch_size},
      {"seed", seed},
      {"options", options.ToJson()},
  };
  if (checkpoint_id) j["checkpoint_id"] = *checkpoint_id;
  return j;
}

void BackendConfig::Validate() const {
  if (learning_rate_grid.empty()) Invalid("learning_rate_grid is empty");
  for (double lr : learning_rate_grid) {
    if (!(lr > 0) || !std::isfinite(lr)) {
      Invalid("learning rates must be positive and finite");
    }
  }
  if (epochs < 1) Invalid("epochs must be >= 1");
  if (padding_size < 8) Invalid("padding_size must be >= 8");
  if (batch_size < 1) Invalid("batch_size must be >= 1");
  const ModelOptions& o = options;
  if (o.threads < 0) Invalid("threads must be >= 0");
  switch (family) {
    case BackendFamily::kNgramLinear:
      if (o.ngram_min < 1 || o.ngram_max < o.ngram_min) {
        Invalid("need 1 <= ngram_min <= ngram_max");
      }
      if (o.l2 < 0) Invalid("l2 must be >= 0");
      if (o.max_features < 1) Invalid("max_features must be >= 1");
      if (o.steps_per_epoch < 1) Invalid("steps_per_epoch must be >= 1");
      break;
    case BackendFamily::kPretrainedEncoder:
      if (!checkpoint_id || checkpoint_id->empty()) {
        Invalid("pretrained_encoder needs a checkpoint_id");
      }
      if (o.head_dropout < 0 || o.head_dropout >= 1) {
        Invalid("head_dropout must be in [0, 1)");
      }
      if (o.weight_decay < 0) Invalid("weight_decay must be >= 0");
      break;
    default:
      if (o.embed_dim < 1 || o.max_vocab < 2) {
        Invalid("embed_dim must be >= 1 and max_vocab >= 2");
      }
      if (o.dropout < 0 || o.dropout >= 1) Invalid("dropout must be in [0, 1)");
      if (o.hidden_size < 1 || o.num_layers < 1) {
        Invalid("hidden_size and num_layers must be >= 1");
      }
      if (family == BackendFamily::kCnn) {
        if (o.filter_sizes.empty() || o.num_filters < 1) {
          Invalid("cnn needs filter_sizes and num_filters");
        }
        for (int k : o.filter_sizes) {
          if (k < 1 || k > padding_size) Invalid("filter size out of range");
        }
      }
      if (family == BackendFamily::kRnnAttention && o.attention_size < 1) {
        Invalid("attention_size must be >= 1");
      }
      if (family == BackendFamily::kTransformerScratch &&
          (o.num_heads < 1 || o.embed_dim % o.num_heads != 0 || o.ff_size < 1)) {
        Invalid("embed_dim must be divisible by num_heads");
      }
      break;
  }
}

Category ArgmaxCategory(const ProbabilityRow& row) {
  size_t best = 0;
  for (size_t i = 1; i < row.size(); ++i) {
    if (row[i] > row[best]) best = i;
  }
  return kAllCategories[best];
}

std::string TorchVersion() { return TORCH_VERSION; }

namespace internal {

void SoftmaxInPlace(ProbabilityRow* row) {
  double m = (*row)[0];
  for (double v : *row) m = std::max(m, v);
  double sum = 0;
  for (double& v : *row) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : *row) v /= sum;
}

}  // namespace internal

ClassifierModel::ClassifierModel(BackendConfig config,
                                 std::unique_ptr<internal::Engine> engine)
    : config_(std::move(config)), engine_(std::move(engine)) {}
ClassifierModel::~ClassifierModel() = default;
ClassifierModel::ClassifierModel(ClassifierModel&&) noexcept = default;
ClassifierModel& ClassifierModel::operator=(ClassifierModel&&) noexcept = default;

std::vector<ProbabilityRow> ClassifierModel::Probabilities(
    std::span<const std::string> texts) const {
  size_t truncated = 0;
  auto rows = engine_->Probabilities(texts, &truncated);
  if (truncated > 0) {
    log::Warn(Format("%zu of %zu texts exceed %d tokens and were truncated", truncated,
                     texts.size(), config_.padding_size));
  }
  return rows;
}

std::vector<Prediction> ClassifierModel::Predict(
    std::span<const std::string> texts) const {
  std::vector<Prediction> out;
  if (texts.empty()) return out;
  for (const auto& row : Probabilities(texts)) {
    const Category c = ArgmaxCategory(row);
    out.push_back({c, std::clamp(row[Ordinal(c)], 0.0, 1.0)});
  }
  return out;
}

std::string ClassifierModel::embedding_mode() const {
  return engine_->embedding_mode();
}

nlohmann::ordered_json ClassifierModel::Manifest() const {
  nlohmann::ordered_json m;
  m["format"] = "codeinterp-model-v1";
  m["family"] = FamilyName(config_.family);
  m["checkpoint_id"] = config_.checkpoint_id ? nlohmann::ordered_json(*config_.checkpoint_id)
                                             : nlohmann::ordered_json(nullptr);
  m["winning_lr"] = winning_lr_;
  m["best_epoch"] = best_epoch_;
  m["label_set"] = nlohmann::ordered_json::array();
  for (Category c : kAllCategories) m["label_set"].push_back(CategoryName(c));
  m["seed"] = config_.seed;
  m["embedding_mode"] = embedding_mode();
  nlohmann::ordered_json metrics = metrics_;
  metrics["val_weighted_f1"] = best_val_weighted_f1_;
  m["metrics"] = metrics;
  m["config"] = config_.ToJson();
  nlohmann::ordered_json log = nlohmann::ordered_json::array();
  for (const auto& r : log_) {
    log.push_back({{"learning_rate", r.learning_rate},
                   {"epoch", r.epoch},
                   {"train_loss", r.train_loss},
                   {"val_weighted_f1", r.val_weighted_f1}});
  }
  m["training_log"] = log;
  m["warnings"] = warnings_;
  return m;
}

void ClassifierModel::Save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  engine_->Save(dir);
  WriteFile(dir / "manifest.json", Manifest().dump(2) + "\n");
}

ClassifierModel ClassifierModel::Load(const std::filesystem::path& dir) {
  const nlohmann::json m = ReadJsonFile(dir / "manifest.json");
  if (m.value("format", "") != "codeinterp-model-v1") {
    throw Error(ErrorCode::kParse, dir.string() + " is not a model directory");
  }
  std::vector<std::string> labels = m.at("label_set");
  for (size_t i = 0; i < kNumCategories; ++i) {
    if (labels.size() != kNumCategories ||
        labels[i] != CategoryName(kAllCategories[i])) {
      throw Error(ErrorCode::kParse, "model label set does not match taxonomy");
    }
  }
  BackendConfig config = BackendConfig::FromJson(m.at("config"));
  std::unique_ptr<internal::Engine> engine;
  switch (config.family) {
    case BackendFamily::kNgramLinear:
      engine = internal::LoadNgramEngine(config, dir);
      break;
    case BackendFamily::kPretrainedEncoder:
      engine = internal::LoadEncoderEngine(config, dir);
      break;
    default:
      engine = internal::LoadNeuralEngine(config, dir);
      break;
  }
  ClassifierModel model(std::move(config), std::move(engine));
  model.winning_lr_ = m.at("winning_lr");
  model.best_epoch_ = m.at("best_epoch");
  model.metrics_ = m.at("metrics");
  model.best_val_weighted_f1_ = model.metrics_.value("val_weighted_f1", 0.0);
  model.metrics_.erase("val_weighted_f1");
  for (const auto& r : m.at("training_log")) {
    model.log_.push_back({r.at("learning_rate"), r.at("epoch"),
                          r.at("train_loss"), r.at("val_weighted_f1")});
  }
  model.warnings_ = m.value("warnings", std::vector<std::string>{});
  return model;
}

ClassifierModel Train(const BackendConfig& config, const Dataset& train,
                      const Dataset& val, const CheckpointResolver* resolver) {
  config.Validate();
  if (train.empty() || val.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "training and validation data must be non-empty");
  }
  std::unordered_set<std::string> train_ids;
  for (const auto& ex : train.examples()) train_ids.insert(ex.clause.clause_id);
  for (const auto& ex : val.examples()) {
    if (train_ids.count(ex.clause.clause_id)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "clause '" + ex.clause.clause_id +
                      "' is in both training and validation data");
    }
  }

  std::vector<std::string> warnings;
  for (Category c : kAllCategories) {
    if (train.counts()[Ordinal(c)] == 0) {
      std::string w = "category '" + std::string(CategoryName(c)) +
                      "' is absent from the training data";
      log::Warn(w);
      warnings.push_back(std::move(w));
    }
  }

  std::unique_ptr<internal::Trainer> trainer;
  switch (config.family) {
    case BackendFamily::kNgramLinear:
      trainer = internal::MakeNgramTrainer(config, train);
      break;
    case BackendFamily::kPretrainedEncoder: {
      const CheckpointResolver fallback = CheckpointResolver::FromEnvironment();
      const CheckpointInfo info =
          (resolver ? *resolver : fallback).Resolve(*config.checkpoint_id);
      trainer = internal::MakeEncoderTrainer(config, train, info);
      break;
    }
    default:
      trainer = internal::MakeNeuralTrainer(config, train);
      break;
  }

  const std::vector<std::string> val_texts = val.Texts();
  const std::vector<Category> val_labels = val.Labels();
  std::vector<EpochRecord> log;
  std::unique_ptr<internal::Snapshot> best;
  double best_f1 = -1, best_lr = 0;
  int best_epoch = 0;
  for (size_t g = 0; g < config.learning_rate_grid.size(); ++g) {
    const double lr = config.learning_rate_grid[g];
    trainer->Reset(lr, DeriveSeed(config.seed, "grid/" + std::to_string(g)));
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
      const double loss = trainer->TrainEpoch(DeriveSeed(
          config.seed, "grid/" + std::to_string(g) + "/epoch/" + std::to_string(epoch)));
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kDivergedTraining,
                    Format("non-finite training loss at lr %g, epoch %d", lr, epoch));
      }
      size_t truncated = 0;
      const double f1 =
          Evaluate(ArgmaxAll(trainer->Probabilities(val_texts, &truncated)), val_labels)
              .weighted_f1;
      log.push_back({lr, epoch, loss, f1});
      log::Debug(Format("lr=%g epoch=%d loss=%.6f val_wf1=%.4f", lr, epoch, loss, f1));
      if (f1 > best_f1) {
        best_f1 = f1;
        best_lr = lr;
        best_epoch = epoch;
        best = trainer->Capture();
      }
    }
    log::Info(Format("lr=%g done; best val weighted F1 %.4f at lr=%g epoch %d", lr,
                     best_f1, best_lr, best_epoch));
  }
  trainer->Restore(*best);
  trainer->ReleaseTrainingData();

  ClassifierModel model(config, std::move(trainer));
  model.winning_lr_ = best_lr;
  model.best_epoch_ = best_epoch;
  model.best_val_weighted_f1_ = best_f1;
  model.log_ = std::move(log);
  model.warnings_ = std::move(warnings);
  return model;
}

}  // namespace codeinterp
