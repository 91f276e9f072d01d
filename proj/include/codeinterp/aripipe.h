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

#ifndef CODEINTERP_ARIPIPE_H_
#define CODEINTERP_ARIPIPE_H_

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "codeinterp/classifier.h"
#include "codeinterp/corpus.h"
#include "codeinterp/taxonomy.h"
#include "json.hpp"

namespace codeinterp {

enum class Outcome { kSuccess, kFailure };

// Downstream rule interpreter. Successful and correct interpretation are a
// single binary outcome here.
class InterpreterPort {
 public:
  virtual ~InterpreterPort() = default;
  virtual Outcome Interpret(const Clause& clause) = 0;
  // True when Interpret may be called from several threads at once.
  virtual bool thread_safe() const { return false; }
};

// Scripted interpreter: outcomes looked up by clause_id, everything else
// gets `fallback`.
class MockInterpreter : public InterpreterPort {
 public:
  explicit MockInterpreter(std::unordered_map<std::string, Outcome> table,
                           Outcome fallback = Outcome::kFailure)
      : table_(std::move(table)), fallback_(fallback) {}

  // JSONL rows {"clause_id": ..., "outcome": "success" | "failure"}.
  static MockInterpreter FromFile(const std::filesystem::path& path,
                                  Outcome fallback = Outcome::kFailure);

  Outcome Interpret(const Clause& clause) override;
  bool thread_safe() const override { return true; }

 private:
  std::unordered_map<std::string, Outcome> table_;
  Outcome fallback_;
};

// Keeps clauses predicted direct, indirect, method or reference, in order.
std::vector<Clause> FilterInterpretable(std::span<const Clause> clauses,
                                        std::span<const Category> predictions);

struct StageResult {
  int64_t input = 0;
  int64_t success = 0;

  double ExactPct() const;
  // Headline percentage rounded half away from zero to an integer.
  int64_t RoundedPct() const;
};

struct FilterReport {
  StageResult before;
  StageResult after;
  CategoryCounts kept{};
  CategoryCounts dropped{};
};

// Interprets every clause, filters by the predictions, interprets the kept
// clauses again. Exceptions thrown by the interpreter count as failures.
FilterReport RunFilterExperiment(std::span<const Clause> clauses,
                                 std::span<const Category> predictions,
                                 InterpreterPort& interpreter);

FilterReport RunFilterExperiment(std::span<const Clause> clauses,
                                 const Classifier& classifier,
                                 InterpreterPort& interpreter);

nlohmann::ordered_json FilterReportToJson(const FilterReport& report);
std::string FilterReportToCsv(const FilterReport& report);

}  // namespace codeinterp

#endif  // CODEINTERP_ARIPIPE_H_
