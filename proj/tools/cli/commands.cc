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

#include "commands.h"

#include <fmt/format.h>

#include <algorithm>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "codeinterp/aripipe.h"
#include "codeinterp/classify.h"
#include "codeinterp/corpus.h"
#include "codeinterp/dataset.h"
#include "codeinterp/jsonl.h"
#include "codeinterp/metrics.h"
#include "codeinterp/pretrain.h"
#include "codeinterp/score.h"
#include "svg_chart.h"

namespace codeinterp::cli {
namespace {

using Kind = FlagSet::Kind;

fs::path WithSuffix(const fs::path& p, const std::string& suffix) {
  return fs::path(p.string() + suffix);
}

void WriteText(RunDir& run, const fs::path& path, const std::string& text) {
  WriteFile(path, text);
  run.AddOutput(path);
}

void WriteJson(RunDir& run, const fs::path& path, const nlohmann::ordered_json& j) {
  WriteText(run, path, j.dump(2) + "\n");
}

Category CategoryArg(const std::string& token) {
  try {
    return ParseCategory(token);
  } catch (const Error&) {
    throw UsageError("unknown category '" + token + "'");
  }
}

// Accepts a model directory or a train run directory holding model/.
fs::path ModelDir(const fs::path& p) {
  if (fs::exists(p / "manifest.json")) return p;
  if (fs::exists(p / "model" / "manifest.json")) return p / "model";
  throw UsageError(p.string() + " does not contain a trained model");
}

std::string BalanceTable(const BalanceReport& b) {
  std::string out = fmt::format("{:<10} {:>8} {:>9} {:>8}\n", "category", "manual",
                                "augmented", "total");
  for (Category c : kAllCategories) {
    const int i = Ordinal(c);
    out += fmt::format("{:<10} {:>8} {:>9} {:>8}\n", CategoryName(c), b.manual[i],
                       b.augmented[i], b.total[i]);
  }
  return out;
}

nlohmann::ordered_json CountsJson(const CategoryCounts& counts) {
  nlohmann::ordered_json j;
  for (Category c : kAllCategories) j[std::string(CategoryName(c))] = counts[Ordinal(c)];
  return j;
}

// ---------------------------------------------------------------------------

void Ingest(const Section& cfg) {
  const fs::path in = cfg.Input("in");
  if (!fs::is_directory(in)) throw UsageError("--in must be a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(in)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no documents (*.txt) in " + in.string());

  std::optional<std::map<std::string, CodeMeta>> metas;
  if (cfg.Has("meta")) metas = ReadMetaFile(cfg.Input("meta"));

  const nlohmann::json cleaning_json = cfg.Object("cleaning");
  CleaningConfig cleaning = cleaning_json.contains("rules")
                                ? CleaningConfig::FromJson(cleaning_json)
                                : CleaningConfig::Default();
  cleaning.drop_preamble = cleaning_json.value("drop_preamble", cleaning.drop_preamble);
  SegmentConfig segment;
  segment.list_items_start_clause = cfg.Bool("list_items_start_clause", false);

  const fs::path out = cfg.String("out");
  RunDir run(out.parent_path());
  run.AddInput("in", in);
  if (metas) run.AddInput("meta", cfg.Input("meta"));

  std::vector<Clause> clauses;
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (const fs::path& file : files) {
    const std::string doc_id = file.stem().string();
    CodeMeta meta;
    if (metas) {
      auto it = metas->find(doc_id);
      if (it == metas->end()) {
        throw Error(ErrorCode::kMissingMeta, "no metadata for document " + doc_id);
      }
      meta = it->second;
    }
    try {
      const RawDocument raw = ReadDocument(file, doc_id, meta);
      const RawDocument cleaned = CleanDocument(raw, cleaning);
      std::vector<Clause> doc_clauses = SegmentClauses(cleaned, segment);
      std::cout << fmt::format("{}: {} clauses\n", doc_id, doc_clauses.size());
      docs.push_back({{"doc_id", doc_id},
                      {"source_lines", raw.lines.size()},
                      {"kept_lines", cleaned.lines.size()},
                      {"clauses", doc_clauses.size()}});
      clauses.insert(clauses.end(), doc_clauses.begin(), doc_clauses.end());
    } catch (const Error& e) {
      throw Error(e.code(), file.string() + ": " + e.what());
    }
  }
  WriteClauses(out, clauses);
  run.AddOutput(out);
  nlohmann::ordered_json summary;
  summary["documents"] = files.size();
  summary["clauses"] = clauses.size();
  summary["per_document"] = docs;
  run.WriteManifest(WithSuffix(out, ".run.json"), "ingest", cfg, summary);
  std::cout << fmt::format("{} clauses from {} documents -> {}\n", clauses.size(),
                           files.size(), out.string());
}

void ImportTsv(const Section& cfg) {
  const fs::path in = cfg.Input("in");
  std::map<std::string, std::string> label_map = DefaultLabelMap();
  for (const auto& [k, v] : cfg.Object("label_map").items()) {
    if (!v.is_string()) throw UsageError("import_tsv.label_map values must be strings");
    label_map[k] = v.get<std::string>();
  }
  for (const std::string& pair : cfg.Strings("labels")) {
    const size_t eq = pair.find('=');
    if (eq == std::string::npos) throw UsageError("--label expects NAME=CATEGORY");
    label_map[pair.substr(0, eq)] = pair.substr(eq + 1);
  }
  const Dataset ds = ImportTsvDataset(in, label_map);
  const fs::path out = cfg.String("out");
  RunDir run(out.parent_path());
  run.AddInput("in", in);
  SaveDataset(out, ds);
  run.AddOutput(out);
  const BalanceReport b = ComputeBalance(ds);
  std::cout << BalanceTable(b);
  run.WriteManifest(WithSuffix(out, ".run.json"), "import-tsv", cfg,
                    {{"examples", ds.size()}, {"counts", CountsJson(b.total)}});
}

void AugmentCmd(const Section& cfg) {
  const fs::path in = cfg.Input("in");
  AugmentPlan plan;
  for (const std::string& c : cfg.Strings("categories")) plan.categories.push_back(CategoryArg(c));
  if (plan.categories.empty()) throw UsageError("--categories is required");
  plan.per_example = static_cast<int>(cfg.Int("per_example", 1));
  if (plan.per_example < 1) throw UsageError("--per-example must be positive");
  plan.target_per_class = cfg.OptInt("target_per_class");
  const AugmentConfig rules = AugmentConfig::FromJson(cfg.Object("rules"));

  const Dataset ds = LoadDataset(in);
  const fs::path out = cfg.String("out");
  RunDir run(out.parent_path());
  run.AddInput("in", in);
  AugmentStats stats;
  const Dataset augmented = AugmentDataset(ds, plan, cfg.seed(), rules, &stats);
  SaveDataset(out, augmented);
  run.AddOutput(out);
  const BalanceReport b = ComputeBalance(augmented);
  std::cout << BalanceTable(b);
  std::cout << fmt::format("added {} (no replaceable token: {}, duplicates dropped: {})\n",
                           stats.added, stats.skipped_no_token, stats.duplicates_dropped);
  run.WriteManifest(WithSuffix(out, ".run.json"), "augment", cfg,
                    {{"added", stats.added},
                     {"skipped_no_token", stats.skipped_no_token},
                     {"duplicates_dropped", stats.duplicates_dropped},
                     {"counts", CountsJson(b.total)}});
}

void SplitCmd(const Section& cfg) {
  const fs::path in = cfg.Input("in");
  std::vector<std::string> ratios = cfg.Strings("ratios");
  if (ratios.empty()) ratios = {"0.8", "0.1", "0.1"};
  if (ratios.size() != 3) throw UsageError("--ratios expects three values");
  SplitSpec spec;
  for (size_t i = 0; i < 3; ++i) spec.ratios[i] = Ratio::Parse(ratios[i]);
  spec.seed = cfg.seed();
  spec.stratified = cfg.Bool("stratified", false);
  spec.Validate();

  const Dataset ds = LoadDataset(in);
  const fs::path out = cfg.String("out");
  RunDir run(out);
  run.AddInput("in", in);
  const DatasetSplit split = Split(ds, spec);
  nlohmann::ordered_json summary;
  const std::pair<const char*, const Dataset*> parts[] = {
      {"train", &split.train}, {"val", &split.val}, {"test", &split.test}};
  for (const auto& [name, part] : parts) {
    const fs::path path = out / (std::string(name) + ".jsonl");
    SaveDataset(path, *part);
    run.AddOutput(path);
    summary[name] = {{"examples", part->size()},
                     {"counts", CountsJson(ComputeBalance(*part).total)}};
    std::cout << fmt::format("{:<5} {}\n", name, part->size());
  }
  run.WriteManifest(out / "run.json", "split", cfg, summary);
}

void TrainCmd(const Section& cfg) {
  nlohmann::json backend = cfg.Object("backend");
  if (!backend.contains("family")) throw UsageError("--family is required");
  backend["seed"] = cfg.seed();
  BackendConfig config = BackendConfig::FromJson(backend);
  if (config.family == BackendFamily::kPretrainedEncoder && !config.checkpoint_id) {
    config.checkpoint_id = std::string(kDefaultEncoderCheckpoint);
  }
  config.Validate();

  const fs::path train_path = cfg.Input("train");
  const fs::path val_path = cfg.Input("val");
  const std::optional<fs::path> test_path =
      cfg.Has("test") ? std::optional<fs::path>(cfg.Input("test")) : std::nullopt;
  const Dataset train = LoadDataset(train_path);
  const Dataset val = LoadDataset(val_path);
  const fs::path out = cfg.String("out");
  RunDir run(out);
  run.AddInput("train", train_path);
  run.AddInput("val", val_path);
  if (test_path) run.AddInput("test", *test_path);

  const CheckpointResolver resolver = CheckpointResolver::FromEnvironment();
  ClassifierModel model = Train(config, train, val, &resolver);
  std::cout << fmt::format("{}: best lr {:g}, epoch {}, val weighted F1 {:.2f}%\n",
                           FamilyName(config.family), model.winning_lr(), model.best_epoch(),
                           100.0 * model.best_val_weighted_f1());

  nlohmann::ordered_json summary;
  summary["family"] = FamilyName(config.family);
  summary["winning_lr"] = model.winning_lr();
  summary["best_epoch"] = model.best_epoch();
  summary["val_weighted_f1"] = model.best_val_weighted_f1();
  if (test_path) {
    const Dataset test = LoadDataset(*test_path);
    std::vector<Category> predicted;
    for (const Prediction& p : model.Predict(test.Texts())) predicted.push_back(p.category);
    const EvalReport report = Evaluate(predicted, test.Labels());
    model.metrics()["test_weighted_f1"] = report.weighted_f1;
    summary["test_weighted_f1"] = report.weighted_f1;
    WriteJson(run, out / "eval_test.json", EvalReportToJson(report));
    WriteText(run, out / "eval_test.csv", EvalReportToCsv(report));
    std::cout << FormatEvalReport(report);
  }
  summary["warnings"] = model.warnings();

  model.Save(out / "model");
  run.AddOutput(out / "model");
  std::string log = "learning_rate,epoch,train_loss,val_weighted_f1\n";
  for (const EpochRecord& r : model.training_log()) {
    log += fmt::format("{:g},{},{:.6f},{:.6f}\n", r.learning_rate, r.epoch, r.train_loss,
                       r.val_weighted_f1);
  }
  WriteText(run, out / "training_log.csv", log);
  run.WriteManifest(out / "run.json", "train", cfg, summary);
}

void EvalCmd(const Section& cfg) {
  const fs::path model_dir = ModelDir(cfg.Input("model"));
  const fs::path data_path = cfg.Input("data");
  const ClassifierModel model = ClassifierModel::Load(model_dir);
  const Dataset ds = LoadDataset(data_path);
  const std::vector<Prediction> preds = model.Predict(ds.Texts());
  std::vector<Category> predicted;
  for (const Prediction& p : preds) predicted.push_back(p.category);
  const EvalReport report = Evaluate(predicted, ds.Labels());
  std::cout << FormatEvalReport(report);
  if (!cfg.Has("out")) return;

  const fs::path out = cfg.String("out");
  RunDir run(out);
  run.AddInput("model", model_dir);
  run.AddInput("data", data_path);
  WriteJson(run, out / "eval.json", EvalReportToJson(report));
  WriteText(run, out / "eval.csv", EvalReportToCsv(report));
  std::vector<nlohmann::ordered_json> rows;
  for (size_t i = 0; i < preds.size(); ++i) {
    const LabeledClause& ex = ds.examples()[i];
    nlohmann::ordered_json row;
    row["clause_id"] = ex.clause.clause_id;
    row["doc_id"] = ex.clause.doc_id;
    row["gold"] = CategoryName(ex.label);
    row["category"] = CategoryName(preds[i].category);
    row["confidence"] = preds[i].confidence;
    rows.push_back(std::move(row));
  }
  WriteJsonl(out / "predictions.jsonl", rows);
  run.AddOutput(out / "predictions.jsonl");
  run.WriteManifest(out / "run.json", "eval", cfg,
                    {{"weighted_f1", report.weighted_f1}, {"examples", report.total}});
}

// Clauses JSONL, or plain text with one clause per non-empty line.
std::vector<Clause> ReadPredictInput(const fs::path& path) {
  if (path.extension() == ".jsonl") return ReadClauses(path);
  std::vector<Clause> clauses;
  const std::string doc_id = path.stem().string();
  for (const std::string& line : ReadLines(path)) {
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Clause c;
    c.doc_id = doc_id;
    c.clause_id = MakeClauseId(doc_id, clauses.size() + 1);
    c.text = line;
    clauses.push_back(std::move(c));
  }
  return clauses;
}

void PredictCmd(const Section& cfg) {
  const fs::path model_dir = ModelDir(cfg.Input("model"));
  const fs::path in = cfg.Input("in");
  const ClassifierModel model = ClassifierModel::Load(model_dir);
  const std::vector<Clause> clauses = ReadPredictInput(in);
  std::vector<std::string> texts;
  for (const Clause& c : clauses) texts.push_back(c.text);
  const std::vector<Prediction> preds = model.Predict(texts);
  for (const Prediction& p : preds) std::cout << CategoryName(p.category) << '\n';
  if (!cfg.Has("out")) return;

  const fs::path out = cfg.String("out");
  RunDir run(out.parent_path());
  run.AddInput("model", model_dir);
  run.AddInput("in", in);
  std::vector<nlohmann::ordered_json> rows;
  CategoryCounts counts{};
  for (size_t i = 0; i < preds.size(); ++i) {
    nlohmann::ordered_json row;
    row["clause_id"] = clauses[i].clause_id;
    row["doc_id"] = clauses[i].doc_id;
    row["category"] = CategoryName(preds[i].category);
    row["confidence"] = preds[i].confidence;
    rows.push_back(std::move(row));
    ++counts[Ordinal(preds[i].category)];
  }
  WriteJsonl(out, rows);
  run.AddOutput(out);
  run.WriteManifest(WithSuffix(out, ".run.json"), "predict", cfg,
                    {{"clauses", preds.size()}, {"counts", CountsJson(counts)}});
}

std::vector<DocumentScore> ScorePredictions(const fs::path& in) {
  std::vector<fs::path> files;
  if (fs::is_directory(in)) {
    for (const auto& e : fs::directory_iterator(in)) {
      if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw UsageError("no prediction files (*.jsonl) in " + in.string());
  } else {
    files.push_back(in);
  }
  std::map<std::string, std::vector<Category>> by_doc;
  for (const fs::path& file : files) {
    size_t row = 0;
    for (const nlohmann::json& j : ReadJsonl(file)) {
      ++row;
      try {
        by_doc[j.at("doc_id").get<std::string>()].push_back(
            ParseCategory(j.at("category").get<std::string>()));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParse,
                    fmt::format("{}: row {}: {}", file.string(), row, e.what()));
      }
    }
  }
  std::vector<DocumentScore> scores;
  for (const auto& [doc_id, cats] : by_doc) scores.push_back(ScoreDocument(doc_id, cats));
  return scores;
}

std::string CorpusTable(const CorpusReport& r) {
  std::string out = fmt::format("{:<20} {:<5} {:>6} {:>8} {:>10} {:>10} {:>8} {:>8}\n",
                                "domain", "level", "codes", "clauses", "weighted%",
                                "mean%", "max%", "high");
  for (const CorpusRow& row : r.rows) {
    out += fmt::format("{:<20} {:<5} {:>6} {:>8} {:>10.2f} {:>10.2f} {:>8.2f} {:>8.4f}\n",
                       row.domain, row.level, row.codes, row.clauses,
                       row.clause_weighted_pct, row.code_mean_pct, row.max_pct,
                       row.highly_interpretable_frac);
  }
  return out;
}

nlohmann::ordered_json CorpusJson(const CorpusReport& r) {
  nlohmann::ordered_json j = CorpusReportToJson(r);
  j["notes"] =
      "interp_clause_weighted_pct pools all clauses of a group; "
      "interp_code_mean_pct averages the documents of a group with equal weight";
  return j;
}

void ScoreCmd(const Section& cfg) {
  const fs::path in = cfg.Input("in");
  const double threshold = cfg.Double("threshold_pct", 50.0);
  const std::vector<DocumentScore> scores = ScorePredictions(in);
  std::optional<CorpusReport> report;
  if (cfg.Has("meta")) report = Aggregate(scores, ReadMetaFile(cfg.Input("meta")), threshold);

  const fs::path out = cfg.String("out");
  RunDir run(out);
  run.AddInput("in", in);
  if (report) run.AddInput("meta", cfg.Input("meta"));
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (const DocumentScore& s : scores) {
    docs.push_back(DocumentScoreToJson(s));
    std::cout << fmt::format("{}: {:.2f}% ({} clauses)\n", s.doc_id, s.interpretability_pct,
                             s.clause_count);
  }
  WriteJson(run, out / "document_scores.json", docs);
  WriteText(run, out / "document_scores.csv", DocumentScoresToCsv(scores));
  nlohmann::ordered_json summary;
  summary["documents"] = scores.size();
  summary["highly_interpretable_frac"] = HighlyInterpretableFraction(scores, threshold);
  if (report) {
    WriteText(run, out / "corpus_report.csv", CorpusReportToCsv(*report));
    WriteJson(run, out / "corpus_report.json", CorpusJson(*report));
    std::cout << CorpusTable(*report);
  }
  run.WriteManifest(out / "run.json", "score", cfg, summary);
}

std::vector<DocumentScore> LoadScores(const fs::path& p) {
  const fs::path file = fs::is_directory(p) ? p / "document_scores.json" : p;
  const nlohmann::json j = ReadJsonFile(file);
  if (!j.is_array()) throw Error(ErrorCode::kParse, file.string() + ": expected an array");
  std::vector<DocumentScore> scores;
  for (const auto& row : j) scores.push_back(DocumentScoreFromJson(row));
  if (scores.empty()) throw Error(ErrorCode::kInvalidArgument, file.string() + ": no documents");
  return scores;
}

EvalReport LoadEval(const fs::path& p) {
  fs::path file = p;
  if (fs::is_directory(p)) {
    file = fs::exists(p / "eval.json") ? p / "eval.json" : p / "eval_test.json";
  }
  return EvalReportFromJson(ReadJsonFile(file));
}

void ReportCmd(const Section& cfg) {
  const fs::path scores_path = cfg.Input("scores");
  const fs::path meta_path = cfg.Input("meta");
  const double threshold = cfg.Double("threshold_pct", 50.0);
  const std::vector<DocumentScore> scores = LoadScores(scores_path);
  const CorpusReport report = Aggregate(scores, ReadMetaFile(meta_path), threshold);

  std::vector<std::pair<std::string, fs::path>> datasets;
  for (const std::string& d : cfg.Strings("datasets")) {
    const fs::path p = d;
    if (!fs::exists(p)) throw UsageError("--dataset: no such file: " + d);
    datasets.emplace_back(p.stem().string(), p);
  }
  std::vector<std::pair<std::string, fs::path>> evals;
  for (const std::string& e : cfg.Strings("evals")) {
    const size_t eq = e.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--eval expects NAME=PATH");
    const fs::path p = e.substr(eq + 1);
    if (!fs::exists(p)) throw UsageError("--eval: no such file: " + p.string());
    evals.emplace_back(e.substr(0, eq), p);
  }

  const fs::path out = cfg.String("out");
  RunDir run(out);
  run.AddInput("scores", scores_path);
  run.AddInput("meta", meta_path);
  WriteText(run, out / "corpus_report.csv", CorpusReportToCsv(report));
  WriteJson(run, out / "corpus_report.json", CorpusJson(report));
  std::cout << CorpusTable(report);

  // Clause-weighted interpretability per domain, one bar per level.
  BarChart interp;
  interp.title = "Interpretability by domain and level";
  interp.y_label = "interpretability (%)";
  interp.value_format = "%.1f";
  interp.y_max = 100;
  std::vector<std::string> levels;
  for (const CorpusRow& row : report.rows) {
    if (row.domain == "Total" || row.domain == "All") continue;
    if (std::find(interp.groups.begin(), interp.groups.end(), row.domain) == interp.groups.end()) {
      interp.groups.push_back(row.domain);
    }
    if (std::find(levels.begin(), levels.end(), row.level) == levels.end()) {
      levels.push_back(row.level);
    }
  }
  std::sort(levels.begin(), levels.end(), [](const std::string& a, const std::string& b) {
    return ParseCodeLevel(a) < ParseCodeLevel(b);
  });
  for (const std::string& level : levels) {
    BarSeries s{level, std::vector<double>(interp.groups.size(), 0.0)};
    for (const CorpusRow& row : report.rows) {
      auto it = std::find(interp.groups.begin(), interp.groups.end(), row.domain);
      if (row.level == level && it != interp.groups.end()) {
        s.values[it - interp.groups.begin()] = row.clause_weighted_pct;
      }
    }
    interp.series.push_back(std::move(s));
  }
  WriteText(run, out / "interpretability.svg", RenderSvg(interp));

  // Category distribution of the labeled datasets, or of the scored
  // clauses when no dataset is given.
  BarChart dist;
  dist.title = "Clauses per category";
  dist.y_label = "clauses";
  for (Category c : kAllCategories) dist.groups.emplace_back(CategoryName(c));
  if (datasets.empty()) {
    BarSeries s{"scored clauses", std::vector<double>(kNumCategories, 0.0)};
    for (const DocumentScore& d : scores) {
      for (size_t i = 0; i < kNumCategories; ++i) s.values[i] += d.category_counts[i];
    }
    dist.series.push_back(std::move(s));
  } else {
    for (const auto& [name, path] : datasets) {
      run.AddInput("dataset:" + name, path);
      const CategoryCounts counts = LoadDataset(path).counts();
      dist.series.push_back({name, std::vector<double>(counts.begin(), counts.end())});
    }
  }
  std::string dist_csv = "category";
  for (const BarSeries& s : dist.series) dist_csv += "," + CsvField(s.name);
  dist_csv += "\n";
  for (size_t i = 0; i < kNumCategories; ++i) {
    dist_csv += dist.groups[i];
    for (const BarSeries& s : dist.series) dist_csv += fmt::format(",{:.0f}", s.values[i]);
    dist_csv += "\n";
  }
  WriteText(run, out / "category_distribution.csv", dist_csv);
  WriteText(run, out / "category_distribution.svg", RenderSvg(dist));

  if (!evals.empty()) {
    BarChart cmp;
    cmp.title = "Test weighted F1 by model";
    cmp.y_label = "weighted F1 (%)";
    cmp.value_format = "%.2f";
    cmp.y_max = 100;
    BarSeries s{"weighted F1", {}};
    std::string csv = "model,weighted_f1_pct\n";
    for (const auto& [name, path] : evals) {
      run.AddInput("eval:" + name, path);
      const double f1 = 100.0 * LoadEval(path).weighted_f1;
      cmp.groups.push_back(name);
      s.values.push_back(f1);
      csv += fmt::format("{},{:.2f}\n", CsvField(name), f1);
    }
    cmp.series.push_back(std::move(s));
    WriteText(run, out / "model_comparison.csv", csv);
    WriteText(run, out / "model_comparison.svg", RenderSvg(cmp));
  }
  run.WriteManifest(out / "run.json", "report", cfg,
                    {{"documents", scores.size()}, {"rows", report.rows.size()}});
}

void FilterExpCmd(const Section& cfg) {
  const fs::path clauses_path = cfg.Input("clauses");
  const fs::path interpreter_path = cfg.Input("interpreter");
  if (cfg.Has("model") == cfg.Has("predictions")) {
    throw UsageError("give exactly one of --model and --predictions");
  }
  const std::vector<Clause> clauses = ReadClauses(clauses_path);
  if (clauses.empty()) throw Error(ErrorCode::kInvalidArgument, "no clauses to interpret");
  MockInterpreter interpreter = MockInterpreter::FromFile(interpreter_path);

  std::vector<Category> predicted;
  fs::path source;
  if (cfg.Has("model")) {
    source = ModelDir(cfg.Input("model"));
    const ClassifierModel model = ClassifierModel::Load(source);
    std::vector<std::string> texts;
    for (const Clause& c : clauses) texts.push_back(c.text);
    for (const Prediction& p : model.Predict(texts)) predicted.push_back(p.category);
  } else {
    source = cfg.Input("predictions");
    std::map<std::string, Category> by_id;
    for (const nlohmann::json& j : ReadJsonl(source)) {
      try {
        by_id[j.at("clause_id").get<std::string>()] =
            ParseCategory(j.at("category").get<std::string>());
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParse, source.string() + ": " + e.what());
      }
    }
    for (const Clause& c : clauses) {
      auto it = by_id.find(c.clause_id);
      if (it == by_id.end()) {
        throw Error(ErrorCode::kLengthMismatch, "no prediction for clause " + c.clause_id);
      }
      predicted.push_back(it->second);
    }
  }

  const fs::path out = cfg.String("out");
  RunDir run(out);
  run.AddInput("clauses", clauses_path);
  run.AddInput("interpreter", interpreter_path);
  run.AddInput(cfg.Has("model") ? "model" : "predictions", source);
  const FilterReport report = RunFilterExperiment(clauses, predicted, interpreter);
  WriteJson(run, out / "filter_report.json", FilterReportToJson(report));
  WriteText(run, out / "filter_report.csv", FilterReportToCsv(report));
  WriteClauses(out / "kept.jsonl", FilterInterpretable(clauses, predicted));
  run.AddOutput(out / "kept.jsonl");
  std::cout << fmt::format("{:<7} {:>7} {:>8} {:>5}\n", "stage", "input", "success", "pct");
  const std::pair<const char*, const StageResult*> stages[] = {{"before", &report.before},
                                                               {"after", &report.after}};
  for (const auto& [name, s] : stages) {
    std::cout << fmt::format("{:<7} {:>7} {:>8} {:>4}%\n", name, s->input, s->success,
                             s->RoundedPct());
  }
  run.WriteManifest(out / "run.json", "filter-exp", cfg, FilterReportToJson(report));
}

void PretrainCmd(const Section& cfg) {
  PretrainConfig config = PretrainConfig::FromJson(cfg.Object("config"));
  config.seed = cfg.seed();
  config.Validate();
  const std::string checkpoint =
      cfg.OptString("checkpoint").value_or(std::string(kDefaultEncoderCheckpoint));
  const fs::path corpus_path = cfg.Input("corpus");
  const std::vector<std::string> corpus = ReadDomainCorpus(corpus_path);
  const CheckpointResolver resolver = CheckpointResolver::FromEnvironment();
  const fs::path out = cfg.String("out");
  RunDir run(out);
  run.AddInput("corpus", corpus_path);
  const PretrainResult result = FurtherPretrain(checkpoint, corpus, config, out, resolver);
  run.AddOutput(out / "encoder.pt");
  run.AddOutput(out / "vocab.txt");
  run.AddOutput(out / "manifest.json");
  for (size_t e = 0; e < result.epoch_loss.size(); ++e) {
    std::cout << fmt::format("epoch {}: loss {:.4f}\n", e + 1, result.epoch_loss[e]);
  }
  std::cout << fmt::format("{} steps; new checkpoint {}\n", result.steps, result.checkpoint_id);
  run.WriteManifest(out / "run.json", "pretrain", cfg,
                    {{"parent", checkpoint},
                     {"checkpoint_id", result.checkpoint_id},
                     {"steps", result.steps},
                     {"epoch_loss", result.epoch_loss}});
}

}  // namespace

std::deque<std::unique_ptr<FlagSet>> RegisterCommands(CLI::App& app) {
  std::deque<std::unique_ptr<FlagSet>> sets;
  auto add = [&](const std::string& name, const std::string& section,
                 const std::string& description, void (*run)(const Section&)) -> FlagSet& {
    CLI::App* sub = app.add_subcommand(name, description);
    FlagSet* flags = sets.emplace_back(std::make_unique<FlagSet>(sub, section)).get();
    sub->callback([flags, section, run] { run(Section(flags->Resolve(), section)); });
    return *flags;
  };

  FlagSet& ingest = add("ingest", "ingest", "Clean and segment documents into clauses", Ingest);
  ingest.Add("--in", "in", Kind::kString, "Directory of *.txt documents");
  ingest.Add("--meta", "meta", Kind::kString, "Document metadata JSON");
  ingest.Add("--out", "out", Kind::kString, "Output clauses JSONL");
  ingest.Add("--list-items-start-clause", "list_items_start_clause", Kind::kBool,
             "Treat numbered list items as separate clauses");

  FlagSet& tsv = add("import-tsv", "import_tsv", "Import a text<TAB>label dataset", ImportTsv);
  tsv.Add("--in", "in", Kind::kString, "Directory with *.txt files and optional class.txt");
  tsv.Add("--out", "out", Kind::kString, "Output dataset JSONL");
  tsv.Add("--label", "labels", Kind::kStringList, "Extra NAME=CATEGORY label mappings");

  FlagSet& aug = add("augment", "augment", "Add rule-based variants of minority classes",
                     AugmentCmd);
  aug.Add("--in", "in", Kind::kString, "Input dataset JSONL");
  aug.Add("--out", "out", Kind::kString, "Output dataset JSONL");
  aug.Add("--categories", "categories", Kind::kStringList, "Categories to augment");
  aug.Add("--per-example", "per_example", Kind::kInt, "Variants per manual example");
  aug.Add("--target-per-class", "target_per_class", Kind::kInt, "Stop at this class size");

  FlagSet& split = add("split", "split", "Split a dataset into train/val/test", SplitCmd);
  split.Add("--in", "in", Kind::kString, "Input dataset JSONL");
  split.Add("--out", "out", Kind::kString, "Output directory");
  split.Add("--ratios", "ratios", Kind::kStringList, "Three ratios, e.g. 0.8,0.1,0.1");
  split.Add("--stratified", "stratified", Kind::kBool, "Split each category separately");

  FlagSet& train = add("train", "train", "Train a classifier with learning-rate grid search",
                       TrainCmd);
  train.Add("--train", "train", Kind::kString, "Training dataset JSONL");
  train.Add("--val", "val", Kind::kString, "Validation dataset JSONL");
  train.Add("--test", "test", Kind::kString, "Optional test dataset JSONL");
  train.Add("--out", "out", Kind::kString, "Run directory");
  train.Add("--family", "backend/family", Kind::kString,
            "ngram_linear, cnn, rnn, rnn_attention, transformer_scratch or "
            "pretrained_encoder");
  train.Add("--checkpoint", "backend/checkpoint_id", Kind::kString, "Encoder checkpoint id");
  train.Add("--epochs", "backend/epochs", Kind::kInt, "Epochs per grid point");
  train.Add("--padding-size", "backend/padding_size", Kind::kInt, "Maximum tokens per text");
  train.Add("--lr-grid", "backend/learning_rate_grid", Kind::kDoubleList, "Learning rates");
  train.Add("--batch-size", "backend/batch_size", Kind::kInt, "Mini-batch size");
  train.Add("--threads", "backend/options/threads", Kind::kInt, "Intra-op threads");
  train.Add("--embedding-path", "backend/options/embedding_path", Kind::kString,
            "Word vectors in word2vec text format");

  FlagSet& eval = add("eval", "eval", "Evaluate a model on a labeled dataset", EvalCmd);
  eval.Add("--model", "model", Kind::kString, "Model or train run directory");
  eval.Add("--data", "data", Kind::kString, "Labeled dataset JSONL");
  eval.Add("--out", "out", Kind::kString, "Optional output directory");

  FlagSet& predict = add("predict", "predict", "Print one category per clause", PredictCmd);
  predict.Add("--model", "model", Kind::kString, "Model or train run directory");
  predict.Add("--in", "in", Kind::kString, "Clauses JSONL or text with one clause per line");
  predict.Add("--out", "out", Kind::kString, "Optional predictions JSONL");

  FlagSet& score = add("score", "score", "Score documents from clause predictions", ScoreCmd);
  score.Add("--in", "in", Kind::kString, "Predictions JSONL file or directory");
  score.Add("--meta", "meta", Kind::kString, "Document metadata JSON for corpus rows");
  score.Add("--out", "out", Kind::kString, "Output directory");
  score.Add("--threshold-pct", "threshold_pct", Kind::kDouble,
            "Highly interpretable threshold");

  FlagSet& report = add("report", "report", "Write corpus tables and plots", ReportCmd);
  report.Add("--scores", "scores", Kind::kString, "document_scores.json or score directory");
  report.Add("--meta", "meta", Kind::kString, "Document metadata JSON");
  report.Add("--out", "out", Kind::kString, "Output directory");
  report.Add("--dataset", "datasets", Kind::kStringList, "Datasets for the category plot");
  report.Add("--eval", "evals", Kind::kStringList, "NAME=eval.json for the model plot");
  report.Add("--threshold-pct", "threshold_pct", Kind::kDouble,
             "Highly interpretable threshold");

  FlagSet& filter = add("filter-exp", "filter_exp",
                        "Compare interpretation success before and after filtering",
                        FilterExpCmd);
  filter.Add("--clauses", "clauses", Kind::kString, "Clauses JSONL");
  filter.Add("--interpreter", "interpreter", Kind::kString,
             "Scripted interpreter outcomes JSONL");
  filter.Add("--model", "model", Kind::kString, "Model used to predict categories");
  filter.Add("--predictions", "predictions", Kind::kString, "Precomputed predictions JSONL");
  filter.Add("--out", "out", Kind::kString, "Output directory");

  FlagSet& pretrain = add("pretrain", "pretrain",
                          "Continue encoder pretraining on domain text", PretrainCmd);
  pretrain.Add("--checkpoint", "checkpoint", Kind::kString, "Source checkpoint id");
  pretrain.Add("--corpus", "corpus", Kind::kString, "Text corpus, one sentence per line");
  pretrain.Add("--out", "out", Kind::kString, "New checkpoint directory");
  pretrain.Add("--epochs", "config/epochs", Kind::kInt, "Passes over the corpus");
  pretrain.Add("--max-steps", "config/max_steps", Kind::kInt, "Stop after this many steps");
  pretrain.Add("--lr", "config/learning_rate", Kind::kDouble, "Learning rate");
  pretrain.Add("--batch-size", "config/batch_size", Kind::kInt, "Sentence pairs per step");
  pretrain.Add("--max-seq-len", "config/max_seq_len", Kind::kInt, "Tokens per pair");
  pretrain.Add("--mask-prob", "config/mask_prob", Kind::kDouble, "Masked token fraction");
  return sets;
}

}  // namespace codeinterp::cli
