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

// Acceptance runner: one PASS / FAIL / SKIP line per criterion.
//
// Criteria 5 and 6 need external artifacts and are skipped unless supplied:
//   CODEINTERP_PUBLISHED_DATASET  labeled dataset (JSONL file or TSV release dir)
//   CODEINTERP_CHECKPOINTS        checkpoint roots holding bert-base-chinese
//   CODEINTERP_DOMAIN_CORPUS      unlabeled domain text, one line per sentence
// and the long training runs additionally need --train-encoder / --pretrain.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "codeinterp/aripipe.h"
#include "codeinterp/classify.h"
#include "codeinterp/dataset.h"
#include "codeinterp/errors.h"
#include "codeinterp/log.h"
#include "codeinterp/metrics.h"
#include "codeinterp/pretrain.h"
#include "codeinterp/score.h"
#include "codeinterp/taxonomy.h"

namespace codeinterp {
namespace {

namespace fs = std::filesystem;

enum class Verdict { kPass, kFail, kSkip };

struct Line {
  Verdict verdict;
  std::string detail;
};

class Timer {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

std::optional<std::string> Env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

// Counts of GB 50016-2014 by category, in ordinal order.
constexpr CategoryCounts kReferenceCounts = {280, 193, 157, 119, 70, 73, 112};

// ---------------------------------------------------------------------------
// 1. Metrics against a brute-force recomputation from raw pairs.

struct OracleScores {
  double p[kNumCategories];
  double r[kNumCategories];
  double f[kNumCategories];
  double weighted;
};

OracleScores BruteForce(const std::vector<Category>& pred, const std::vector<Category>& gold) {
  OracleScores o{};
  double weighted = 0;
  for (int c = 0; c < static_cast<int>(kNumCategories); ++c) {
    int tp = 0, predicted = 0, actual = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
      const bool pc = Ordinal(pred[i]) == c;
      const bool gc = Ordinal(gold[i]) == c;
      tp += pc && gc;
      predicted += pc;
      actual += gc;
    }
    o.p[c] = predicted ? static_cast<double>(tp) / predicted : 0.0;
    o.r[c] = actual ? static_cast<double>(tp) / actual : 0.0;
    o.f[c] = (o.p[c] + o.r[c]) > 0 ? 2 * o.p[c] * o.r[c] / (o.p[c] + o.r[c]) : 0.0;
    weighted += actual * o.f[c];
  }
  o.weighted = weighted / static_cast<double>(gold.size());
  return o;
}

Line MetricsOracle() {
  const Timer timer;
  std::mt19937_64 gen(20240601);
  double max_diff = 0;
  for (int instance = 0; instance < 200; ++instance) {
    const size_t n = 1 + gen() % 50;
    // Every fourth instance favours few classes so some stay empty.
    const size_t classes = instance % 4 == 0 ? 1 + gen() % 3 : kNumCategories;
    std::vector<Category> pred(n), gold(n);
    for (size_t i = 0; i < n; ++i) {
      gold[i] = kAllCategories[gen() % classes];
      pred[i] = gen() % 3 == 0 ? gold[i] : kAllCategories[gen() % kNumCategories];
    }
    const EvalReport report = Evaluate(pred, gold);
    const OracleScores o = BruteForce(pred, gold);
    for (size_t c = 0; c < kNumCategories; ++c) {
      max_diff = std::max({max_diff, std::abs(report.classes[c].precision - o.p[c]),
                           std::abs(report.classes[c].recall - o.r[c]),
                           std::abs(report.classes[c].f1 - o.f[c])});
    }
    max_diff = std::max(max_diff, std::abs(report.weighted_f1 - o.weighted));
  }
  const double secs = timer.Seconds();
  const bool ok = max_diff <= 1e-12 && secs < 5.0;
  return {ok ? Verdict::kPass : Verdict::kFail,
          Fmt("200 instances, max |diff| %.3g (tol 1e-12), %.3f s (limit 5 s)", max_diff, secs)};
}

// ---------------------------------------------------------------------------
// 2. Document interpretability from the reference counts.

Line ReferenceInterpretability() {
  const Timer timer;
  const DocumentScore s = ScoreFromCounts("GB 50016-2014", kReferenceCounts);
  // Oracle: exact half-point arithmetic, easy = 2, medium = 1, hard = 0.
  int64_t halves = 0, n = 0;
  for (Category c : kAllCategories) {
    const int64_t k = kReferenceCounts[Ordinal(c)];
    n += k;
    halves += k * (GroupOf(c) == InterpretabilityGroup::kEasy     ? 2
                   : GroupOf(c) == InterpretabilityGroup::kMedium ? 1
                                                                  : 0);
  }
  const double rounded = std::round(s.interpretability_pct * 100.0) / 100.0;
  const bool ok = s.total_score.halves() == 1222 && halves == 1222 && n == 1004 &&
                  s.clause_count == 1004 && std::abs(rounded - 60.86) <= 0.005 &&
                  std::abs(s.interpretability_pct - 100.0 * halves / (2.0 * n)) <= 1e-12;
  return {ok ? Verdict::kPass : Verdict::kFail,
          Fmt("total_score %.1f (expected 611), interpretability %.2f%% (expected 60.86 "
              "+/- 0.005), %.4f s",
              s.total_score.ToDouble(), s.interpretability_pct, timer.Seconds())};
}

// ---------------------------------------------------------------------------
// 3. Filtering the reference predictions and the interpretation rates.

Line FilterCrossCheck() {
  std::vector<Clause> clauses;
  std::vector<Category> predicted;
  for (Category c : kAllCategories) {
    for (int64_t i = 0; i < kReferenceCounts[Ordinal(c)]; ++i) {
      Clause clause;
      clause.clause_id = Fmt("gb50016-%04zu", clauses.size() + 1);
      clause.doc_id = "GB 50016-2014";
      clause.text = std::string(CategoryName(c));
      clauses.push_back(std::move(clause));
      predicted.push_back(c);
    }
  }
  const std::vector<Clause> kept = FilterInterpretable(clauses, predicted);

  // 679 successes in total, 539 of them among the kept clauses.
  std::unordered_map<std::string, Outcome> table;
  const std::set<std::string> kept_ids = [&] {
    std::set<std::string> ids;
    for (const Clause& c : kept) ids.insert(c.clause_id);
    return ids;
  }();
  int kept_success = 0, dropped_success = 0;
  for (const Clause& c : clauses) {
    const bool is_kept = kept_ids.count(c.clause_id) > 0;
    bool success = false;
    if (is_kept && kept_success < 539) {
      success = true;
      ++kept_success;
    } else if (!is_kept && dropped_success < 679 - 539) {
      success = true;
      ++dropped_success;
    }
    table[c.clause_id] = success ? Outcome::kSuccess : Outcome::kFailure;
  }
  MockInterpreter interpreter(std::move(table));
  const FilterReport r = RunFilterExperiment(clauses, predicted, interpreter);
  const bool ok = kept.size() == 749 && r.before.input == 1004 && r.before.success == 679 &&
                  r.after.input == 749 && r.after.success == 539 &&
                  r.before.RoundedPct() == 68 && r.after.RoundedPct() == 72;
  return {ok ? Verdict::kPass : Verdict::kFail,
          Fmt("kept %zu of %zu (expected 749); before %lld/%lld = %lld%% (expected 68%%), "
              "after %lld/%lld = %lld%% (expected 72%%)",
              kept.size(), clauses.size(), static_cast<long long>(r.before.success),
              static_cast<long long>(r.before.input),
              static_cast<long long>(r.before.RoundedPct()),
              static_cast<long long>(r.after.success), static_cast<long long>(r.after.input),
              static_cast<long long>(r.after.RoundedPct()))};
}

// ---------------------------------------------------------------------------
// 4. Split sizes and the augmentation property suite.

LabeledClause MakeExample(const std::string& id, const std::string& text, Category c) {
  LabeledClause ex;
  ex.clause.clause_id = id;
  ex.clause.doc_id = "acceptance";
  ex.clause.text = text;
  ex.label = c;
  return ex;
}

std::string CheckSplit(const Dataset& ds, uint64_t seed) {
  SplitSpec spec;
  spec.seed = seed;
  const DatasetSplit s = Split(ds, spec);
  // Oracle sizes: exact rationals 4/5, 1/10, 1/10 with the remainder dealt
  // train first.
  const size_t n = ds.size();
  size_t expect[3] = {n * 4 / 5, n / 10, n / 10};
  for (size_t i = 0, left = n - expect[0] - expect[1] - expect[2]; left > 0; ++i, --left) {
    ++expect[i % 3];
  }
  if (s.train.size() != expect[0] || s.val.size() != expect[1] || s.test.size() != expect[2]) {
    return Fmt("sizes %zu/%zu/%zu, expected %zu/%zu/%zu", s.train.size(), s.val.size(),
               s.test.size(), expect[0], expect[1], expect[2]);
  }
  std::multiset<std::string> all, parts;
  for (const auto& ex : ds.examples()) all.insert(ex.clause.clause_id);
  for (const Dataset* part : {&s.train, &s.val, &s.test}) {
    for (const auto& ex : part->examples()) parts.insert(ex.clause.clause_id);
  }
  if (all != parts) return "parts are not a partition of the input";
  if (std::set<std::string>(parts.begin(), parts.end()).size() != parts.size()) {
    return "parts overlap";
  }
  const DatasetSplit again = Split(ds, spec);
  if (again.train.examples() != s.train.examples() || again.val.examples() != s.val.examples() ||
      again.test.examples() != s.test.examples()) {
    return "same seed gave a different split";
  }
  return "";
}

std::string Skeleton(const std::string& text) {
  static const std::regex number(R"(\d+(?:\.\d+)?)");
  static const std::regex comparator(
      "not less than|not greater than|not more than|less than|more than|"
      "greater than|equal to|不大于|不小于|大于|小于|等于");
  return std::regex_replace(std::regex_replace(text, comparator, "@"), number, "#");
}

std::vector<int> FractionDigits(const std::string& text) {
  static const std::regex number(R"(\d+(?:\.(\d+))?)");
  std::vector<int> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), number);
       it != std::sregex_iterator(); ++it) {
    out.push_back(static_cast<int>((*it)[1].length()));
  }
  return out;
}

std::string RandomClause(std::mt19937_64& gen) {
  auto pick = [&](const std::vector<std::string>& v) { return v[gen() % v.size()]; };
  auto number = [&] {
    const int digits = static_cast<int>(gen() % 4);  // 0 means integer
    const double v = 1 + static_cast<double>(gen() % 100000) / 100.0;
    return digits == 0 ? std::to_string(static_cast<int>(v)) : Fmt("%.*f", digits, v);
  };
  if (gen() % 2) {
    std::string s = pick({"The height of the railing", "The width of the evacuation door",
                          "The fire resistance rating", "The span of the warehouse"}) +
                    " should " + pick({"not be ", "be ", ""}) +
                    pick({"less than", "more than", "not less than", "not greater than",
                          "equal to"}) +
                    " " + number() + pick({" m", " mm", " h", " L/s", "%", ""});
    if (gen() % 3 == 0) s += " and the spacing shall be less than " + number() + " m";
    return s + ".";
  }
  std::string s = pick({"栏杆高度", "疏散门净宽度", "楼板耐火极限", "防火分区面积"}) +
                  pick({"不应", "应", ""}) + pick({"大于", "小于", "不大于", "不小于", "等于"}) +
                  number() + pick({"m", "mm", "h", "m²", "L/s", ""});
  if (gen() % 3 == 0) s += "，且间距不应大于" + number() + "m";
  return s + "。";
}

std::string AugmentationSuite(int cases) {
  std::mt19937_64 gen(1450);
  const AugmentConfig config = AugmentConfig::Default();
  for (int i = 0; i < cases; ++i) {
    const Category label = kAllCategories[gen() % kNumCategories];
    const LabeledClause parent = MakeExample(Fmt("p%d", i), RandomClause(gen), label);
    const uint64_t seed = gen();
    const int n = 1 + static_cast<int>(gen() % 3);
    const std::vector<LabeledClause> children = Augment(parent, seed, n, config);
    if (children.empty() || static_cast<int>(children.size()) > n) {
      return Fmt("case %d: %zu children for n=%d", i, children.size(), n);
    }
    for (const LabeledClause& child : children) {
      const std::string& t = child.clause.text;
      if (child.label != label) return Fmt("case %d: label changed", i);
      if (child.provenance != Provenance::kAugmented || child.parent_id != parent.clause.clause_id) {
        return Fmt("case %d: bad provenance", i);
      }
      if (t == parent.clause.text) return Fmt("case %d: child equals parent", i);
      if (Skeleton(t) != Skeleton(parent.clause.text)) {
        return "case " + std::to_string(i) + ": shape changed: '" + parent.clause.text +
               "' -> '" + t + "'";
      }
      if (FractionDigits(t) != FractionDigits(parent.clause.text)) {
        return "case " + std::to_string(i) + ": number precision changed: '" +
               parent.clause.text + "' -> '" + t + "'";
      }
    }
    if (Augment(parent, seed, n, config) != children) {
      return Fmt("case %d: not deterministic", i);
    }
  }
  return "";
}

Line DatasetPipeline() {
  const Timer timer;
  std::vector<LabeledClause> examples;
  for (int i = 0; i < 1450; ++i) {
    examples.push_back(MakeExample(Fmt("syn-%04d", i), Fmt("clause %d", i),
                                   kAllCategories[(i * 5 + i / 7) % kNumCategories]));
  }
  const Dataset synthetic(std::move(examples));
  std::string problem = CheckSplit(synthetic, 7);
  if (problem.empty()) problem = CheckSplit(synthetic, 8);
  if (problem.empty()) problem = AugmentationSuite(1000);
  const double secs = timer.Seconds();
  if (problem.empty() && secs >= 30.0) problem = "too slow";
  return {problem.empty() ? Verdict::kPass : Verdict::kFail,
          Fmt("1450 examples -> 1160/145/145, disjoint, exhaustive, reproducible; "
              "1000 augmentation cases; %.2f s (limit 30 s)%s",
              secs, problem.empty() ? "" : ("; " + problem).c_str()) +
              " [synthetic 1450-example stand-in]"};
}

Dataset LoadPublished(const fs::path& p) {
  return fs::is_directory(p) ? ImportTsvDataset(p, DefaultLabelMap()) : LoadDataset(p);
}

Line PublishedSplit() {
  const auto path = Env("CODEINTERP_PUBLISHED_DATASET");
  if (!path) return {Verdict::kSkip, "CODEINTERP_PUBLISHED_DATASET not set"};
  const Dataset ds = LoadPublished(*path);
  if (ds.size() != 1450) {
    return {Verdict::kFail, Fmt("published dataset has %zu examples, expected 1450", ds.size())};
  }
  const std::string problem = CheckSplit(ds, 7);
  return {problem.empty() ? Verdict::kPass : Verdict::kFail,
          problem.empty() ? "published dataset splits 1160/145/145" : problem};
}

// ---------------------------------------------------------------------------
// 7. Scoring properties on random documents.

Line ScoringProperties() {
  const Timer timer;
  std::mt19937_64 gen(7001);
  int failures = 0;
  std::string first;
  auto fail = [&](const std::string& why) {
    if (failures++ == 0) first = why;
  };
  for (int doc = 0; doc < 1000; ++doc) {
    const size_t n = 1 + gen() % 400;
    std::vector<Category> cats(n);
    for (auto& c : cats) c = kAllCategories[gen() % kNumCategories];
    const DocumentScore s = ScoreDocument("d", cats);
    if (!(s.interpretability_pct >= 0.0 && s.interpretability_pct <= 100.0)) {
      fail(Fmt("doc %d out of bounds", doc));
    }
    std::vector<Category> shuffled = cats;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    const DocumentScore p = ScoreDocument("d", shuffled);
    if (p.total_score != s.total_score || p.interpretability_pct != s.interpretability_pct) {
      fail(Fmt("doc %d not permutation invariant", doc));
    }
    std::vector<size_t> hard;
    for (size_t i = 0; i < n; ++i) {
      if (GroupOf(cats[i]) == InterpretabilityGroup::kHard) hard.push_back(i);
    }
    if (hard.empty()) continue;
    std::vector<Category> raised = cats;
    raised[hard[gen() % hard.size()]] = gen() % 2 ? Category::kDirect : Category::kIndirect;
    const DocumentScore m = ScoreDocument("d", raised);
    // Exactly one full point more over the same clause count.
    const bool exact = m.total_score.halves() - s.total_score.halves() == 2 &&
                       m.clause_count == s.clause_count;
    const double delta = m.interpretability_pct - s.interpretability_pct;
    if (!exact || std::abs(delta - 100.0 / static_cast<double>(n)) > 1e-9) {
      fail(Fmt("doc %d: hard->easy moved %.12f, expected %.12f", doc, delta, 100.0 / n));
    }
  }
  return {failures == 0 ? Verdict::kPass : Verdict::kFail,
          Fmt("1000 documents: bounds, permutation invariance, +100/N monotonicity; %.2f s",
              timer.Seconds()) +
              (failures ? Fmt("; %d failures, first: ", failures) + first : "")};
}

// ---------------------------------------------------------------------------
// 5 and 6. Training on the published dataset.

struct TrainingContext {
  bool train_encoder = false;
  bool pretrain = false;
  uint64_t seed = 1;
  fs::path work_dir;
  std::optional<double> encoder_f1;
  std::optional<DatasetSplit> split;
};

double TestF1(const ClassifierModel& model, const Dataset& test) {
  std::vector<Category> pred;
  for (const Prediction& p : model.Predict(test.Texts())) pred.push_back(p.category);
  return Evaluate(pred, test.Labels()).weighted_f1;
}

const DatasetSplit* PublishedSplitFor(TrainingContext& ctx) {
  if (!ctx.split) {
    const auto path = Env("CODEINTERP_PUBLISHED_DATASET");
    if (!path) return nullptr;
    SplitSpec spec;
    spec.seed = ctx.seed;
    ctx.split = Split(LoadPublished(*path), spec);
  }
  return &*ctx.split;
}

Line NgramFloor(TrainingContext& ctx) {
  const DatasetSplit* split = PublishedSplitFor(ctx);
  if (!split) return {Verdict::kSkip, "CODEINTERP_PUBLISHED_DATASET not set"};
  const Timer timer;
  BackendConfig config = BackendConfig::Defaults(BackendFamily::kNgramLinear);
  config.seed = ctx.seed;
  const ClassifierModel model = Train(config, split->train, split->val);
  const double f1 = TestF1(model, split->test);
  return {f1 >= 0.60 ? Verdict::kPass : Verdict::kFail,
          Fmt("ngram_linear test weighted F1 %.4f (floor 0.60), %.1f s", f1, timer.Seconds())};
}

std::optional<std::string> EncoderUnavailable(const TrainingContext& ctx, bool need_flag) {
  if (!Env("CODEINTERP_PUBLISHED_DATASET")) return "CODEINTERP_PUBLISHED_DATASET not set";
  try {
    CheckpointResolver::FromEnvironment().Resolve(std::string(kDefaultEncoderCheckpoint));
  } catch (const Error&) {
    return std::string(kDefaultEncoderCheckpoint) +
           " checkpoint not found under CODEINTERP_CHECKPOINTS or ./checkpoints";
  }
  if (need_flag && !ctx.train_encoder) return "pass --train-encoder to run (hours on CPU)";
  return std::nullopt;
}

BackendConfig EncoderConfig(const TrainingContext& ctx, const std::string& checkpoint) {
  BackendConfig config = BackendConfig::Defaults(BackendFamily::kPretrainedEncoder);
  config.checkpoint_id = checkpoint;
  config.seed = ctx.seed;
  return config;
}

Line EncoderFineTune(TrainingContext& ctx) {
  if (auto why = EncoderUnavailable(ctx, true)) return {Verdict::kSkip, *why};
  const Timer timer;
  const CheckpointResolver resolver = CheckpointResolver::FromEnvironment();
  const DatasetSplit* split = PublishedSplitFor(ctx);
  const ClassifierModel model =
      Train(EncoderConfig(ctx, std::string(kDefaultEncoderCheckpoint)), split->train,
            split->val, &resolver);
  const double f1 = TestF1(model, split->test);
  ctx.encoder_f1 = f1;
  model.Save(ctx.work_dir / "encoder-model");
  return {f1 >= 0.85 ? Verdict::kPass : Verdict::kFail,
          Fmt("pretrained_encoder test weighted F1 %.4f (floor 0.85; lr %g, epoch %d), %.0f s",
              f1, model.winning_lr(), model.best_epoch(), timer.Seconds())};
}

Line ExampleClauses(TrainingContext& ctx) {
  if (auto why = EncoderUnavailable(ctx, true)) return {Verdict::kSkip, *why};
  if (!fs::exists(ctx.work_dir / "encoder-model" / "manifest.json")) {
    return {Verdict::kSkip, "no fine-tuned encoder from criterion 5"};
  }
  const ClassifierModel model = ClassifierModel::Load(ctx.work_dir / "encoder-model");
  const std::vector<std::string> texts = {
      "The height of the enclosure walls should not be less than 2 m",
      "Water consumption: the amount of water consumed by users."};
  const auto preds = model.Predict(texts);
  const bool ok = preds[0].category == Category::kDirect && preds[1].category == Category::kTerm;
  return {ok ? Verdict::kPass : Verdict::kFail,
          Fmt("enclosure-wall clause -> %s (expected direct), water-consumption clause -> %s "
              "(expected term)",
              std::string(CategoryName(preds[0].category)).c_str(),
              std::string(CategoryName(preds[1].category)).c_str())};
}

Line FurtherPretraining(TrainingContext& ctx) {
  if (auto why = EncoderUnavailable(ctx, false)) return {Verdict::kSkip, *why};
  const auto corpus_path = Env("CODEINTERP_DOMAIN_CORPUS");
  if (!corpus_path) return {Verdict::kSkip, "CODEINTERP_DOMAIN_CORPUS not set"};
  if (!ctx.pretrain) return {Verdict::kSkip, "pass --pretrain to run (GPU-scale job)"};
  if (!ctx.encoder_f1) return {Verdict::kSkip, "needs the criterion 5 result in the same run"};
  const Timer timer;
  const CheckpointResolver resolver = CheckpointResolver::FromEnvironment();
  PretrainConfig pc;
  pc.seed = ctx.seed;
  const PretrainResult pretrained =
      FurtherPretrain(std::string(kDefaultEncoderCheckpoint), ReadDomainCorpus(*corpus_path), pc,
                      ctx.work_dir / "domain-checkpoint", resolver);
  const DatasetSplit* split = PublishedSplitFor(ctx);
  const ClassifierModel model =
      Train(EncoderConfig(ctx, pretrained.checkpoint_id), split->train, split->val, &resolver);
  const double f1 = TestF1(model, split->test);
  return {f1 >= *ctx.encoder_f1 - 0.02 ? Verdict::kPass : Verdict::kFail,
          Fmt("further-pretrained test weighted F1 %.4f vs %.4f (may drop at most 0.02), "
              "%lld pretraining steps, %.0f s",
              f1, *ctx.encoder_f1, static_cast<long long>(pretrained.steps), timer.Seconds())};
}

}  // namespace
}  // namespace codeinterp

int main(int argc, char** argv) {
  using namespace codeinterp;
  CLI::App app{"Acceptance criteria runner"};
  std::vector<int> only;
  TrainingContext ctx;
  std::string work_dir = (fs::temp_directory_path() / "codeinterp_acceptance").string();
  bool skip_code = false;
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',');
  app.add_flag("--train-encoder", ctx.train_encoder, "Run the full encoder fine-tuning");
  app.add_flag("--pretrain", ctx.pretrain, "Run further pretraining on the domain corpus");
  app.add_option("--seed", ctx.seed, "Seed for the training criteria");
  app.add_option("--work-dir", work_dir, "Scratch directory for trained artifacts");
  app.add_flag("--skip-exit-code", skip_code, "Exit 77 when every selected line is skipped");
  CLI11_PARSE(app, argc, argv);
  ctx.work_dir = work_dir;
  log::SetLevel("warn");

  struct Criterion {
    int number;
    const char* id;
    const char* name;
    std::function<Line()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "1", "metrics oracle equivalence", MetricsOracle},
      {2, "2", "interpretability of the reference code", ReferenceInterpretability},
      {3, "3", "filter cross-check", FilterCrossCheck},
      {4, "4", "dataset pipeline", DatasetPipeline},
      {4, "4b", "published dataset split", PublishedSplit},
      {5, "5a", "ngram_linear sanity floor", [&] { return NgramFloor(ctx); }},
      {5, "5b", "encoder fine-tuning", [&] { return EncoderFineTune(ctx); }},
      {5, "5c", "example clause predictions", [&] { return ExampleClauses(ctx); }},
      {6, "6", "further pretraining", [&] { return FurtherPretraining(ctx); }},
      {7, "7", "scoring properties", ScoringProperties},
  };

  int passed = 0, failed = 0, skipped = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.number) == only.end()) continue;
    Line line;
    try {
      line = c.run();
    } catch (const std::exception& e) {
      line = {Verdict::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = line.verdict == Verdict::kPass   ? "PASS"
                      : line.verdict == Verdict::kFail ? "FAIL"
                                                       : "SKIP";
    std::printf("%s  %-3s %-40s %s\n", tag, c.id, c.name, line.detail.c_str());
    std::fflush(stdout);
    (line.verdict == Verdict::kPass ? passed : line.verdict == Verdict::kFail ? failed : skipped)++;
  }
  std::printf("%d passed, %d failed, %d skipped\n", passed, failed, skipped);
  if (failed > 0) return 1;
  if (skip_code && passed == 0 && skipped > 0) return 77;
  return 0;
}
