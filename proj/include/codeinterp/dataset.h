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

#ifndef CODEINTERP_DATASET_H_
#define CODEINTERP_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "codeinterp/corpus.h"
#include "codeinterp/taxonomy.h"
#include "json.hpp"

namespace codeinterp {

enum class Provenance { kManual, kAugmented };

std::string_view ProvenanceName(Provenance p);
Provenance ParseProvenance(std::string_view token);

struct LabeledClause {
  Clause clause;
  Category label = Category::kOther;
  Provenance provenance = Provenance::kManual;
  // Set iff provenance is kAugmented.
  std::optional<std::string> parent_id;

  friend bool operator==(const LabeledClause&, const LabeledClause&) = default;
};

// Immutable collection of labeled clauses with unique clause ids.
class Dataset {
 public:
  Dataset() = default;
  // Throws kInvalidArgument on duplicate ids or inconsistent provenance.
  explicit Dataset(std::vector<LabeledClause> examples);

  const std::vector<LabeledClause>& examples() const { return examples_; }
  size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const CategoryCounts& counts() const { return counts_; }
  const LabeledClause* Find(const std::string& clause_id) const;

  // Every augmented example must point at a manual example of this dataset
  // carrying the same label. Split parts may legitimately violate this, so
  // it is checked on demand rather than in the constructor.
  void CheckParents() const;

  std::vector<std::string> Texts() const;
  std::vector<Category> Labels() const;

 private:
  std::vector<LabeledClause> examples_;
  CategoryCounts counts_{};
  std::unordered_map<std::string, size_t> index_;
};

nlohmann::ordered_json LabeledClauseToJson(const LabeledClause& ex);
LabeledClause LabeledClauseFromJson(const nlohmann::json& j);
Dataset LoadDataset(const std::filesystem::path& path);
void SaveDataset(const std::filesystem::path& path, const Dataset& ds);

// Imports a tab-separated release ("text<TAB>label" per line, labels given
// either as names or as indices into class.txt). Every *.txt file in `dir`
// except class.txt is read in lexicographic order. `label_map` maps release
// label names onto category tokens; names already equal to a token pass
// through unchanged.
Dataset ImportTsvDataset(const std::filesystem::path& dir,
                         const std::map<std::string, std::string>& label_map);
std::map<std::string, std::string> DefaultLabelMap();

// ---------------------------------------------------------------------------
// Balance

struct BalanceReport {
  CategoryCounts manual{};
  CategoryCounts augmented{};
  CategoryCounts total{};

  int64_t Total() const;
};

BalanceReport ComputeBalance(const Dataset& ds);

// ---------------------------------------------------------------------------
// Augmentation

struct AugmentConfig {
  // Comparator swaps stay inside one group, so English phrases are never
  // replaced by Chinese ones.
  std::vector<std::vector<std::string>> comparator_groups;
  // Replacement values are drawn uniformly from [low * v, high * v].
  double magnitude_low = 0.1;
  double magnitude_high = 10.0;
  bool replace_numbers = true;
  bool replace_comparators = true;
  // Attempts per requested child before giving up.
  int attempts_per_child = 20;

  static AugmentConfig Default();
  static AugmentConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

enum class SpanKind { kNumber, kComparator };

struct ReplaceableSpan {
  SpanKind kind;
  size_t begin = 0;  // byte offsets into the text
  size_t end = 0;
  // Comparator group index; fraction digits for numbers.
  int detail = 0;
};

std::vector<ReplaceableSpan> FindReplaceableSpans(std::string_view text,
                                                  const AugmentConfig& config);

// Up to `n` label-preserving variants of a manual example. Throws
// kNoReplaceableToken when the text has neither a number nor a comparator.
std::vector<LabeledClause> Augment(const LabeledClause& example,
                                   uint64_t seed, int n,
                                   const AugmentConfig& config);

struct AugmentPlan {
  std::vector<Category> categories;
  int per_example = 1;
  // Stop adding to a category once it holds this many examples.
  std::optional<int64_t> target_per_class;
};

struct AugmentStats {
  int64_t added = 0;
  int64_t skipped_no_token = 0;
  int64_t duplicates_dropped = 0;
};

// Appends augmented children of the planned categories, deduplicating
// texts against the whole dataset. Seeds derive from (seed, clause_id).
Dataset AugmentDataset(const Dataset& ds, const AugmentPlan& plan,
                       uint64_t seed, const AugmentConfig& config,
                       AugmentStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Splitting

// Exact non-negative rational in lowest terms.
struct Ratio {
  int64_t num = 0;
  int64_t den = 1;

  static Ratio Make(int64_t num, int64_t den);
  // Accepts "0.8", "4/5" or "1".
  static Ratio Parse(std::string_view text);
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct SplitSpec {
  std::array<Ratio, 3> ratios = {Ratio{4, 5}, Ratio{1, 10}, Ratio{1, 10}};
  uint64_t seed = 0;
  bool stratified = false;

  // Throws kRatio unless every ratio is positive and they sum to exactly 1.
  void Validate() const;
};

// Part sizes for n items: floor(ratio * n), leftover items handed out one
// at a time in train, val, test order.
std::array<size_t, 3> SplitSizes(size_t n, const std::array<Ratio, 3>& ratios);

struct DatasetSplit {
  Dataset train;
  Dataset val;
  Dataset test;
};

DatasetSplit Split(const Dataset& ds, const SplitSpec& spec);

}  // namespace codeinterp

#endif  // CODEINTERP_DATASET_H_
