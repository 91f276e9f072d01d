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

#ifndef CODEINTERP_CORPUS_H_
#define CODEINTERP_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace codeinterp {

// Standard level of a building code: national, industrial or local.
enum class CodeLevel { kGB = 0, kHB, kDB };

std::string_view CodeLevelName(CodeLevel level);
CodeLevel ParseCodeLevel(std::string_view token);

struct CodeMeta {
  std::string title;
  CodeLevel level = CodeLevel::kGB;
  std::string domain_tag;
  std::optional<int> year;
};

// A line of a source document together with its 1-based line number in the
// original file, so every cleaned line stays traceable.
struct SourceLine {
  size_t number = 0;
  std::string text;

  friend bool operator==(const SourceLine&, const SourceLine&) = default;
};

struct RawDocument {
  std::string doc_id;
  std::vector<SourceLine> lines;
  CodeMeta meta;
};

struct Clause {
  std::string clause_id;
  std::string doc_id;
  std::string text;
  size_t first_line = 0;
  size_t last_line = 0;

  friend bool operator==(const Clause&, const Clause&) = default;
};

// ---------------------------------------------------------------------------
// Cleaning

enum class RuleAction { kKeep, kDrop };

enum class RuleKind {
  // ICU regular expression searched anywhere in the line.
  kRegex,
  // Matches when CJK ideographs make up less than `threshold` of the
  // non-space characters.
  kMinCjkRatio,
  // Matches when letters, digits and ideographs make up less than
  // `threshold` of the non-space characters (garbled symbol runs).
  kMinLetterRatio,
  // Matches rows of table cells: explicit cell separators, or at least
  // three short space-separated cells with no sentence punctuation where
  // the numeric share of cells reaches `threshold`.
  kTableFragment,
};

struct CleaningRule {
  std::string name;
  RuleAction action = RuleAction::kDrop;
  RuleKind kind = RuleKind::kRegex;
  std::string pattern;
  double threshold = 0.0;
};

// Rules are tried in order and the first match decides the line's fate.
// Lines matched by no rule are kept; blank lines are always dropped.
struct CleaningConfig {
  std::vector<CleaningRule> rules;
  // Drop surviving lines ahead of the first numbered provision (titles,
  // approval notices, editor lists). No-op for documents without numbers.
  bool drop_preamble = true;

  static CleaningConfig Default();
  static CleaningConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

class LineFilter {
 public:
  explicit LineFilter(const CleaningConfig& config);
  ~LineFilter();
  LineFilter(LineFilter&&) noexcept;
  LineFilter& operator=(LineFilter&&) noexcept;

  // Returns the name of the dropping rule, or nullopt when the line stays.
  std::optional<std::string> DropReason(std::string_view normalized) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Normalizes each line and removes front matter, table fragments and
// garbled lines. Throws kInvalidArgument on an empty document and
// kEmptyAfterCleaning when nothing survives.
RawDocument CleanDocument(const RawDocument& raw, const CleaningConfig& rules);

// ---------------------------------------------------------------------------
// Segmentation

struct SegmentConfig {
  // When set, list-item lines ("1 ...", "(2) ...", "③ ...") open a new
  // clause instead of continuing the current provision.
  bool list_items_start_clause = false;
};

bool StartsWithProvisionNumber(std::string_view line);
bool StartsWithListMarker(std::string_view line);

// One clause per numbered provision; unnumbered lines are joined to the
// preceding clause with a single space.
std::vector<Clause> SegmentClauses(const RawDocument& doc,
                                   const SegmentConfig& config = {});

std::string MakeClauseId(std::string_view doc_id, size_t ordinal);

// ---------------------------------------------------------------------------
// File formats

RawDocument ReadDocument(const std::filesystem::path& path,
                         std::string doc_id, CodeMeta meta);

// Accepts either an object keyed by doc_id or an array of objects carrying
// a "doc_id" field.
std::map<std::string, CodeMeta> ReadMetaFile(const std::filesystem::path& path);
CodeMeta CodeMetaFromJson(const nlohmann::json& j);
nlohmann::json CodeMetaToJson(const CodeMeta& meta);

nlohmann::ordered_json ClauseToJson(const Clause& clause);
Clause ClauseFromJson(const nlohmann::json& j);
std::vector<Clause> ReadClauses(const std::filesystem::path& path);
void WriteClauses(const std::filesystem::path& path,
                  const std::vector<Clause>& clauses);

}  // namespace codeinterp

#endif  // CODEINTERP_CORPUS_H_
