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

#include "codeinterp/dataset.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"
#include "codeinterp/random.h"
#include "codeinterp/unicode.h"

namespace codeinterp {

std::string_view ProvenanceName(Provenance p) {
  return p == Provenance::kManual ? "manual" : "augmented";
}

Provenance ParseProvenance(std::string_view token) {
  if (token == "manual") return Provenance::kManual;
  if (token == "augmented") return Provenance::kAugmented;
  throw Error(ErrorCode::kParse,
              "unknown provenance '" + std::string(token) + "'");
}

Dataset::Dataset(std::vector<LabeledClause> examples)
    : examples_(std::move(examples)) {
  index_.reserve(examples_.size());
  for (size_t i = 0; i < examples_.size(); ++i) {
    const LabeledClause& ex = examples_[i];
    if (!index_.emplace(ex.clause.clause_id, i).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate clause_id '" + ex.clause.clause_id + "'");
    }
    if ((ex.provenance == Provenance::kAugmented) != ex.parent_id.has_value()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "clause '" + ex.clause.clause_id +
                      "': parent_id must be set exactly for augmented examples");
    }
    ++counts_[Ordinal(ex.label)];
  }
}

const LabeledClause* Dataset::Find(const std::string& clause_id) const {
  auto it = index_.find(clause_id);
  return it == index_.end() ? nullptr : &examples_[it->second];
}

void Dataset::CheckParents() const {
  for (const LabeledClause& ex : examples_) {
    if (ex.provenance != Provenance::kAugmented) continue;
    const LabeledClause* parent = Find(*ex.parent_id);
    if (parent == nullptr || parent->provenance != Provenance::kManual) {
      throw Error(ErrorCode::kInvalidArgument,
                  "augmented clause '" + ex.clause.clause_id +
                      "' has no manual parent '" + *ex.parent_id + "'");
    }
    if (parent->label != ex.label) {
      throw Error(ErrorCode::kInvalidArgument,
                  "augmented clause '" + ex.clause.clause_id +
                      "' changes its parent's label");
    }
  }
}

std::vector<std::string> Dataset::Texts() const {
  std::vector<std::string> out;
  out.reserve(examples_.size());
  for (const auto& ex : examples_) out.push_back(ex.clause.text);
  return out;
}

std::vector<Category> Dataset::Labels() const {
  std::vector<Category> out;
  out.reserve(examples_.size());
  for (const auto& ex : examples_) out.push_back(ex.label);
  return out;
}

nlohmann::ordered_json LabeledClauseToJson(const LabeledClause& ex) {
  nlohmann::ordered_json j;
  j["clause_id"] = ex.clause.clause_id;
  j["doc_id"] = ex.clause.doc_id;
  j["text"] = ex.clause.text;
  j["label"] = CategoryName(ex.label);
  j["provenance"] = ProvenanceName(ex.provenance);
  j["parent_id"] = ex.parent_id ? nlohmann::ordered_json(*ex.parent_id)
                                : nlohmann::ordered_json(nullptr);
  return j;
}

LabeledClause LabeledClauseFromJson(const nlohmann::json& j) {
  LabeledClause ex;
  try {
    ex.clause.clause_id = j.at("clause_id").get<std::string>();
    ex.clause.doc_id = j.value("doc_id", "");
    ex.clause.text = j.at("text").get<std::string>();
    ex.label = ParseCategory(j.at("label").get<std::string>());
    ex.provenance = ParseProvenance(j.value("provenance", "manual"));
    if (j.contains("parent_id") && !j.at("parent_id").is_null()) {
      ex.parent_id = j.at("parent_id").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("bad dataset record: ") + e.what());
  }
  return ex;
}

Dataset LoadDataset(const std::filesystem::path& path) {
  std::vector<LabeledClause> examples;
  for (const auto& j : ReadJsonl(path)) {
    examples.push_back(LabeledClauseFromJson(j));
  }
  return Dataset(std::move(examples));
}

void SaveDataset(const std::filesystem::path& path, const Dataset& ds) {
  std::vector<nlohmann::ordered_json> rows;
  rows.reserve(ds.size());
  for (const auto& ex : ds.examples()) rows.push_back(LabeledClauseToJson(ex));
  WriteJsonl(path, rows);
}

std::map<std::string, std::string> DefaultLabelMap() {
  return {
      {"others", "other"},   {"terms", "term"},      {"直接", "direct"},
      {"间接", "indirect"},  {"方法", "method"},     {"引用", "reference"},
      {"通用", "general"},   {"一般", "general"},    {"术语", "term"},
      {"其他", "other"},     {"其它", "other"},
  };
}

Dataset ImportTsvDataset(const std::filesystem::path& dir,
                         const std::map<std::string, std::string>& label_map) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, dir.string() + " is not a directory");
  }
  std::vector<std::string> classes;
  if (fs::exists(dir / "class.txt")) {
    for (auto& line : ReadLines(dir / "class.txt")) {
      std::string name = unicode::NormalizeText(line);
      if (!name.empty()) classes.push_back(std::move(name));
    }
  }
  auto resolve = [&](std::string name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](char c) {
      return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    });
    for (const std::string& key : {name, lower}) {
      auto it = label_map.find(key);
      if (it != label_map.end()) return ParseCategory(it->second);
    }
    return ParseCategory(lower);
  };

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt" &&
        entry.path().filename() != "class.txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<LabeledClause> examples;
  for (const fs::path& file : files) {
    size_t number = 0;
    for (const std::string& line : ReadLines(file)) {
      ++number;
      if (line.empty()) continue;
      const size_t tab = line.rfind('\t');
      if (tab == std::string::npos) {
        throw Error(ErrorCode::kParse, file.string() + ":" +
                                           std::to_string(number) +
                                           ": expected text<TAB>label");
      }
      std::string label = unicode::NormalizeText(line.substr(tab + 1));
      if (!label.empty() &&
          std::all_of(label.begin(), label.end(),
                      [](char c) { return c >= '0' && c <= '9'; })) {
        const size_t idx = std::stoul(label);
        if (idx >= classes.size()) {
          throw Error(ErrorCode::kParse,
                      file.string() + ":" + std::to_string(number) +
                          ": label index without a matching class.txt entry");
        }
        label = classes[idx];
      }
      LabeledClause ex;
      ex.clause.clause_id =
          file.stem().string() + "-" + std::to_string(number);
      ex.clause.doc_id = "published";
      ex.clause.text = unicode::NormalizeText(line.substr(0, tab));
      ex.label = resolve(label);
      examples.push_back(std::move(ex));
    }
  }
  return Dataset(std::move(examples));
}

// ---------------------------------------------------------------------------

int64_t BalanceReport::Total() const {
  return std::accumulate(total.begin(), total.end(), int64_t{0});
}

BalanceReport ComputeBalance(const Dataset& ds) {
  BalanceReport r;
  for (const auto& ex : ds.examples()) {
    auto& bucket =
        ex.provenance == Provenance::kManual ? r.manual : r.augmented;
    ++bucket[Ordinal(ex.label)];
    ++r.total[Ordinal(ex.label)];
  }
  return r;
}

// ---------------------------------------------------------------------------

AugmentConfig AugmentConfig::Default() {
  AugmentConfig c;
  c.comparator_groups = {
      {"not less than", "not greater than", "not more than", "less than",
       "more than", "greater than", "equal to"},
      {"不大于", "不小于", "大于", "小于", "等于"},
  };
  return c;
}

AugmentConfig AugmentConfig::FromJson(const nlohmann::json& j) {
  AugmentConfig c = Default();
  if (j.contains("comparator_groups")) {
    c.comparator_groups =
        j.at("comparator_groups").get<std::vector<std::vector<std::string>>>();
  }
  c.magnitude_low = j.value("magnitude_low", c.magnitude_low);
  c.magnitude_high = j.value("magnitude_high", c.magnitude_high);
  c.replace_numbers = j.value("replace_numbers", c.replace_numbers);
  c.replace_comparators = j.value("replace_comparators", c.replace_comparators);
  c.attempts_per_child = j.value("attempts_per_child", c.attempts_per_child);
  if (!(c.magnitude_low > 0.0) || !(c.magnitude_high >= c.magnitude_low)) {
    throw Error(ErrorCode::kInvalidConfig,
                "augment magnitude band must satisfy 0 < low <= high");
  }
  if (c.attempts_per_child < 1) {
    throw Error(ErrorCode::kInvalidConfig, "attempts_per_child must be >= 1");
  }
  for (const auto& group : c.comparator_groups) {
    for (const auto& phrase : group) {
      if (phrase.empty()) {
        throw Error(ErrorCode::kInvalidConfig, "empty comparator phrase");
      }
    }
  }
  return c;
}

nlohmann::json AugmentConfig::ToJson() const {
  return {
      {"comparator_groups", comparator_groups},
      {"magnitude_low", magnitude_low},
      {"magnitude_high", magnitude_high},
      {"replace_numbers", replace_numbers},
      {"replace_comparators", replace_comparators},
      {"attempts_per_child", attempts_per_child},
  };
}

namespace {

bool IsAsciiDigit(char c) { return c >= '0' && c <= '9'; }
bool IsAsciiAlpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

size_t Utf8Len(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 1;
}

struct Phrase {
  std::string_view text;
  int group;
};

constexpr int kMaxNumberDigits = 15;

int64_t Pow10(int k) {
  int64_t p = 1;
  while (k-- > 0) p *= 10;
  return p;
}

// Scaled integer value of a numeric literal ("1.25" -> 125).
int64_t ScaledValue(std::string_view literal) {
  int64_t v = 0;
  for (char c : literal) {
    if (c != '.') v = v * 10 + (c - '0');
  }
  return v;
}

std::string FormatScaled(int64_t value, int fraction_digits) {
  if (fraction_digits == 0) return std::to_string(value);
  const int64_t p = Pow10(fraction_digits);
  std::string frac = std::to_string(value % p);
  frac.insert(0, fraction_digits - frac.size(), '0');
  return std::to_string(value / p) + "." + frac;
}

std::string Mask(std::string_view text, const std::vector<ReplaceableSpan>& spans) {
  std::string out;
  size_t pos = 0;
  for (const auto& s : spans) {
    out.append(text.substr(pos, s.begin - pos));
    out += s.kind == SpanKind::kNumber ? "\x01N" : "\x01C";
    if (s.kind == SpanKind::kNumber) out += std::to_string(s.detail);
    pos = s.end;
  }
  out.append(text.substr(pos));
  return out;
}

}  // namespace

std::vector<ReplaceableSpan> FindReplaceableSpans(std::string_view text,
                                                  const AugmentConfig& config) {
  std::vector<Phrase> phrases;
  if (config.replace_comparators) {
    for (size_t g = 0; g < config.comparator_groups.size(); ++g) {
      for (const auto& p : config.comparator_groups[g]) {
        phrases.push_back({p, static_cast<int>(g)});
      }
    }
    std::stable_sort(phrases.begin(), phrases.end(),
                     [](const Phrase& a, const Phrase& b) {
                       return a.text.size() > b.text.size();
                     });
  }

  std::vector<ReplaceableSpan> spans;
  size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (config.replace_numbers && IsAsciiDigit(c)) {
      size_t end = pos;
      while (end < text.size() && (IsAsciiDigit(text[end]) || text[end] == '.')) {
        ++end;
      }
      size_t lit_end = end;
      while (lit_end > pos && text[lit_end - 1] == '.') --lit_end;
      const std::string_view lit = text.substr(pos, lit_end - pos);
      const size_t dots = std::count(lit.begin(), lit.end(), '.');
      const bool glued_left = pos > 0 && (IsAsciiAlpha(text[pos - 1]) ||
                                          text[pos - 1] == '.');
      const size_t digits = lit.size() - dots;
      if (dots <= 1 && !glued_left && digits <= kMaxNumberDigits) {
        const int frac =
            dots == 0 ? 0 : static_cast<int>(lit.size() - lit.find('.') - 1);
        spans.push_back({SpanKind::kNumber, pos, lit_end, frac});
      }
      pos = end;
      continue;
    }
    bool matched = false;
    for (const Phrase& p : phrases) {
      if (text.compare(pos, p.text.size(), p.text) != 0) continue;
      const size_t end = pos + p.text.size();
      if (IsAsciiAlpha(p.text.front()) && pos > 0 && IsAsciiAlpha(text[pos - 1])) {
        continue;
      }
      if (IsAsciiAlpha(p.text.back()) && end < text.size() &&
          IsAsciiAlpha(text[end])) {
        continue;
      }
      spans.push_back({SpanKind::kComparator, pos, end, p.group});
      pos = end;
      matched = true;
      break;
    }
    if (!matched) pos += Utf8Len(static_cast<unsigned char>(c));
  }
  return spans;
}

std::vector<LabeledClause> Augment(const LabeledClause& example,
                                   uint64_t seed, int n,
                                   const AugmentConfig& config) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 0");
  if (example.provenance != Provenance::kManual) {
    throw Error(ErrorCode::kInvalidArgument,
                "only manual examples can be augmented");
  }
  if (n == 0) return {};
  const std::string& text = example.clause.text;
  const std::vector<ReplaceableSpan> spans = FindReplaceableSpans(text, config);
  std::vector<size_t> numbers, comparators;
  for (size_t i = 0; i < spans.size(); ++i) {
    (spans[i].kind == SpanKind::kNumber ? numbers : comparators).push_back(i);
  }
  if (spans.empty()) {
    throw Error(ErrorCode::kNoReplaceableToken,
                "clause '" + example.clause.clause_id +
                    "' has no numeric literal or comparator");
  }
  const std::string parent_mask = Mask(text, spans);

  Rng rng(seed);
  std::vector<LabeledClause> children;
  std::unordered_set<std::string> seen = {text};
  const int max_attempts = config.attempts_per_child * n;
  for (int attempt = 0; attempt < max_attempts && static_cast<int>(children.size()) < n;
       ++attempt) {
    // 0: numbers only, 1: comparator only, 2: both.
    int mode;
    if (numbers.empty()) {
      mode = 1;
    } else if (comparators.empty()) {
      mode = 0;
    } else {
      mode = static_cast<int>(rng.UniformInt(0, 2));
    }

    std::vector<std::string> replacement(spans.size());
    if (mode != 1) {
      const size_t forced = numbers[rng.UniformInt(0, numbers.size() - 1)];
      for (size_t idx : numbers) {
        const bool pick = idx == forced || rng.UniformInt(0, 1) == 1;
        if (!pick) continue;
        const ReplaceableSpan& s = spans[idx];
        const int64_t v = ScaledValue(std::string_view(text).substr(s.begin, s.end - s.begin));
        int64_t lo, hi;
        if (v == 0) {
          lo = 1;
          hi = std::max<int64_t>(1, std::llround(Pow10(s.detail) * config.magnitude_high));
        } else {
          lo = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(v * config.magnitude_low)));
          hi = std::max<int64_t>(lo, static_cast<int64_t>(std::floor(v * config.magnitude_high)));
        }
        int64_t w = rng.UniformInt(lo, hi);
        if (w == v && hi > lo) {
          // Shift to a distinct value inside the band.
          w = w < hi ? w + 1 : w - 1;
        }
        replacement[idx] = FormatScaled(w, s.detail);
      }
    }
    if (mode != 0) {
      const size_t idx = comparators[rng.UniformInt(0, comparators.size() - 1)];
      const ReplaceableSpan& s = spans[idx];
      const auto& group = config.comparator_groups[s.detail];
      const std::string_view current =
          std::string_view(text).substr(s.begin, s.end - s.begin);
      std::vector<std::string_view> options;
      for (const auto& p : group) {
        if (p != current) options.push_back(p);
      }
      if (!options.empty()) {
        replacement[idx] = options[rng.UniformInt(0, options.size() - 1)];
      }
    }

    std::string child;
    size_t pos = 0;
    for (size_t i = 0; i < spans.size(); ++i) {
      child.append(text, pos, spans[i].begin - pos);
      if (replacement[i].empty()) {
        child.append(text, spans[i].begin, spans[i].end - spans[i].begin);
      } else {
        child += replacement[i];
      }
      pos = spans[i].end;
    }
    child.append(text, pos);

    if (!seen.insert(child).second) continue;
    // A swap can fuse with its neighbours into a longer lexicon phrase;
    // such children would change the non-replaced tokens, so drop them.
    if (Mask(child, FindReplaceableSpans(child, config)) != parent_mask) continue;

    LabeledClause out = example;
    out.clause.text = std::move(child);
    out.clause.clause_id =
        example.clause.clause_id + "~a" + std::to_string(children.size() + 1);
    out.provenance = Provenance::kAugmented;
    out.parent_id = example.clause.clause_id;
    children.push_back(std::move(out));
  }
  return children;
}

Dataset AugmentDataset(const Dataset& ds, const AugmentPlan& plan,
                       uint64_t seed, const AugmentConfig& config,
                       AugmentStats* stats) {
  AugmentStats local;
  std::unordered_set<std::string> texts;
  std::unordered_set<std::string> ids;
  for (const auto& ex : ds.examples()) {
    texts.insert(ex.clause.text);
    ids.insert(ex.clause.clause_id);
  }
  CategoryCounts counts = ds.counts();
  std::vector<LabeledClause> out = ds.examples();
  auto wanted = [&](Category c) {
    return std::find(plan.categories.begin(), plan.categories.end(), c) !=
           plan.categories.end();
  };
  for (const LabeledClause& ex : ds.examples()) {
    if (ex.provenance != Provenance::kManual || !wanted(ex.label)) continue;
    if (plan.target_per_class && counts[Ordinal(ex.label)] >= *plan.target_per_class) {
      continue;
    }
    std::vector<LabeledClause> children;
    try {
      children = Augment(ex, DeriveSeed(seed, ex.clause.clause_id),
                         plan.per_example, config);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoReplaceableToken) throw;
      ++local.skipped_no_token;
      continue;
    }
    for (LabeledClause& child : children) {
      if (plan.target_per_class &&
          counts[Ordinal(child.label)] >= *plan.target_per_class) {
        break;
      }
      if (!texts.insert(child.clause.text).second ||
          !ids.insert(child.clause.clause_id).second) {
        ++local.duplicates_dropped;
        continue;
      }
      ++counts[Ordinal(child.label)];
      ++local.added;
      out.push_back(std::move(child));
    }
  }
  if (stats) *stats = local;
  return Dataset(std::move(out));
}

// ---------------------------------------------------------------------------

Ratio Ratio::Make(int64_t num, int64_t den) {
  if (den <= 0 || num < 0) {
    throw Error(ErrorCode::kRatio, "ratio must be non-negative with den > 0");
  }
  const int64_t g = std::gcd(num, den);
  return g == 0 ? Ratio{0, 1} : Ratio{num / g, den / g};
}

Ratio Ratio::Parse(std::string_view text) {
  auto bad = [&] {
    return Error(ErrorCode::kRatio, "malformed ratio '" + std::string(text) + "'");
  };
  auto parse_int = [&](std::string_view s) {
    if (s.empty() || s.size() > 12) throw bad();
    int64_t v = 0;
    for (char c : s) {
      if (!IsAsciiDigit(c)) throw bad();
      v = v * 10 + (c - '0');
    }
    return v;
  };
  if (const size_t slash = text.find('/'); slash != std::string_view::npos) {
    return Make(parse_int(text.substr(0, slash)),
                parse_int(text.substr(slash + 1)));
  }
  if (const size_t dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    if (frac.empty()) throw bad();
    const int64_t den = Pow10(static_cast<int>(frac.size()));
    return Make((whole.empty() ? 0 : parse_int(whole)) * den + parse_int(frac),
                den);
  }
  return Make(parse_int(text), 1);
}

void SplitSpec::Validate() const {
  __int128 num = 0, den = 1;
  for (const Ratio& r : ratios) {
    if (r.den <= 0 || r.num <= 0) {
      throw Error(ErrorCode::kRatio, "every split ratio must be positive");
    }
    num = num * r.den + static_cast<__int128>(r.num) * den;
    den *= r.den;
  }
  if (num != den) {
    throw Error(ErrorCode::kRatio, "split ratios must sum to exactly 1");
  }
}

std::array<size_t, 3> SplitSizes(size_t n, const std::array<Ratio, 3>& ratios) {
  std::array<size_t, 3> sizes{};
  size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    sizes[i] = static_cast<size_t>(static_cast<__int128>(ratios[i].num) * n /
                                   ratios[i].den);
    assigned += sizes[i];
  }
  for (int i = 0; assigned < n; i = (i + 1) % 3) {
    ++sizes[i];
    ++assigned;
  }
  return sizes;
}

DatasetSplit Split(const Dataset& ds, const SplitSpec& spec) {
  spec.Validate();
  if (ds.size() < 10) {
    throw Error(ErrorCode::kInvalidArgument,
                "splitting needs at least 10 examples");
  }
  Rng rng(spec.seed);
  std::array<std::vector<size_t>, 3> parts;
  auto deal = [&](std::vector<size_t> indices, const std::array<size_t, 3>& sizes) {
    rng.Shuffle(&indices);
    size_t pos = 0;
    for (int p = 0; p < 3; ++p) {
      parts[p].insert(parts[p].end(), indices.begin() + pos,
                      indices.begin() + pos + sizes[p]);
      pos += sizes[p];
    }
  };
  if (spec.stratified) {
    std::array<std::vector<size_t>, kNumCategories> strata;
    for (size_t i = 0; i < ds.size(); ++i) {
      strata[Ordinal(ds.examples()[i].label)].push_back(i);
    }
    // Floor shares per category, then the slots still missing from each
    // part go to the categories with the largest fractional share, so the
    // part sizes equal the unstratified ones.
    const auto target = SplitSizes(ds.size(), spec.ratios);
    std::array<std::array<size_t, 3>, kNumCategories> sizes{};
    std::array<size_t, kNumCategories> left{};
    std::array<size_t, 3> need = target;
    for (size_t c = 0; c < kNumCategories; ++c) {
      left[c] = strata[c].size();
      for (int p = 0; p < 3; ++p) {
        sizes[c][p] = static_cast<size_t>(static_cast<__int128>(spec.ratios[p].num) *
                                          strata[c].size() / spec.ratios[p].den);
        left[c] -= sizes[c][p];
        need[p] -= sizes[c][p];
      }
    }
    std::array<std::array<size_t, 3>, kNumCategories> extra{};
    for (int p = 0; p < 3; ++p) {
      for (; need[p] > 0; --need[p]) {
        size_t best = kNumCategories;
        int64_t best_rem = -1;
        for (size_t c = 0; c < kNumCategories; ++c) {
          if (left[c] == 0) continue;
          const int64_t rem = static_cast<int64_t>(
              static_cast<__int128>(spec.ratios[p].num) * strata[c].size() %
              spec.ratios[p].den);
          const bool better =
              best == kNumCategories || extra[c][p] < extra[best][p] ||
              (extra[c][p] == extra[best][p] && rem > best_rem);
          if (better) {
            best = c;
            best_rem = rem;
          }
        }
        ++sizes[best][p];
        ++extra[best][p];
        --left[best];
      }
    }
    for (size_t c = 0; c < kNumCategories; ++c) deal(std::move(strata[c]), sizes[c]);
  } else {
    std::vector<size_t> indices(ds.size());
    std::iota(indices.begin(), indices.end(), size_t{0});
    deal(std::move(indices), SplitSizes(ds.size(), spec.ratios));
  }
  std::array<Dataset, 3> out;
  for (int p = 0; p < 3; ++p) {
    std::sort(parts[p].begin(), parts[p].end());
    std::vector<LabeledClause> examples;
    examples.reserve(parts[p].size());
    for (size_t i : parts[p]) examples.push_back(ds.examples()[i]);
    out[p] = Dataset(std::move(examples));
  }
  return {std::move(out[0]), std::move(out[1]), std::move(out[2])};
}

}  // namespace codeinterp
