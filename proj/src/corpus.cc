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

#include "codeinterp/corpus.h"

#include <unicode/regex.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <memory>

#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"
#include "codeinterp/unicode.h"

namespace codeinterp {

namespace {

std::unique_ptr<icu::RegexPattern> Compile(const std::string& pattern) {
  UErrorCode status = U_ZERO_ERROR;
  UParseError perr;
  std::unique_ptr<icu::RegexPattern> p(icu::RegexPattern::compile(
      icu::UnicodeString::fromUTF8(pattern), 0, perr, status));
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInvalidConfig,
                "bad regex '" + pattern + "': " + u_errorName(status));
  }
  return p;
}

bool Find(const icu::RegexPattern& pattern, std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  std::unique_ptr<icu::RegexMatcher> m(pattern.matcher(s, status));
  if (U_FAILURE(status)) return false;
  const bool found = m->find(status);
  return U_SUCCESS(status) && found;
}

struct Ratios {
  double cjk = 0.0;
  double letter = 0.0;
};

Ratios CharacterRatios(std::string_view text) {
  size_t total = 0, cjk = 0, letter = 0;
  for (char32_t cp : unicode::Decode(text)) {
    if (unicode::IsWhitespace(cp)) continue;
    ++total;
    if (unicode::IsCjk(cp)) {
      ++cjk;
      ++letter;
    } else if (cp != 0xFFFD &&
               (unicode::IsLetter(cp) || unicode::IsDigit(cp))) {
      ++letter;
    }
  }
  if (total == 0) return {};
  return {static_cast<double>(cjk) / total, static_cast<double>(letter) / total};
}

bool IsNumericCell(std::string_view cell) {
  bool digit = false;
  for (char32_t cp : unicode::Decode(cell)) {
    if (unicode::IsDigit(cp)) {
      digit = true;
    } else if (cp != '.' && cp != '-' && cp != '~' && cp != '%' &&
               cp != 0xFF5E && cp != 0x2014 && cp != '+' && cp != 0xB1) {
      return false;
    }
  }
  return digit;
}

bool LooksLikeTableRow(std::string_view text, double numeric_share) {
  for (char32_t cp : unicode::Decode(text)) {
    if (cp == '|' || cp == '\t' || (cp >= 0x2500 && cp <= 0x257F)) {
      return true;
    }
  }
  static constexpr std::u32string_view kSentencePunct =
      U"。；;：:，,！？!?";
  std::vector<std::string_view> cells;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find(' ', start);
    if (end == std::string_view::npos) end = text.size();
    if (end > start) cells.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (cells.size() < 3) return false;
  for (char32_t cp : unicode::Decode(text)) {
    if (kSentencePunct.find(cp) != std::u32string_view::npos) return false;
  }
  size_t numeric = 0;
  size_t total_len = 0;
  for (std::string_view c : cells) {
    if (IsNumericCell(c)) ++numeric;
    total_len += unicode::Length(c);
  }
  const double share = static_cast<double>(numeric) / cells.size();
  const double mean_len = static_cast<double>(total_len) / cells.size();
  return share >= numeric_share || mean_len <= 2.0;
}

RuleKind ParseRuleKind(std::string_view s) {
  if (s == "regex") return RuleKind::kRegex;
  if (s == "min_cjk_ratio") return RuleKind::kMinCjkRatio;
  if (s == "min_letter_ratio") return RuleKind::kMinLetterRatio;
  if (s == "table_fragment") return RuleKind::kTableFragment;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown cleaning rule kind '" + std::string(s) + "'");
}

std::string_view RuleKindName(RuleKind k) {
  switch (k) {
    case RuleKind::kRegex: return "regex";
    case RuleKind::kMinCjkRatio: return "min_cjk_ratio";
    case RuleKind::kMinLetterRatio: return "min_letter_ratio";
    case RuleKind::kTableFragment: return "table_fragment";
  }
  return "regex";
}

const icu::RegexPattern& ProvisionPattern() {
  static const auto* p =
      Compile(R"re(^\d+(?:\.\d+)+(?=\s|\p{Han}|$))re").release();
  return *p;
}

const icu::RegexPattern& ListMarkerPattern() {
  static const auto* p =
      Compile(R"re(^(?:\d{1,2}(?:\s|、|[.．](?!\d)|[\)）])|[（\(]\d{1,2}[\)）]|[\x{2460}-\x{2473}]|[a-z][\)）]))re")
          .release();
  return *p;
}

}  // namespace

std::string_view CodeLevelName(CodeLevel level) {
  switch (level) {
    case CodeLevel::kGB: return "GB";
    case CodeLevel::kHB: return "HB";
    case CodeLevel::kDB: return "DB";
  }
  return "GB";
}

CodeLevel ParseCodeLevel(std::string_view token) {
  if (token == "GB") return CodeLevel::kGB;
  if (token == "HB") return CodeLevel::kHB;
  if (token == "DB") return CodeLevel::kDB;
  throw Error(ErrorCode::kParse,
              "unknown code level '" + std::string(token) + "'");
}

// ---------------------------------------------------------------------------

CleaningConfig CleaningConfig::Default() {
  CleaningConfig c;
  c.rules = {
      {"front_matter", RuleAction::kDrop, RuleKind::kRegex,
       R"re(^(?:主编单位|参编单位|主编部门|批准部门|主要起草单位|主要起草人员?|主要审查人员?|参加单位|编制组|施行日期|实施日期|发布日期|本规范主编|本标准主编))re",
       0.0},
      {"front_matter_en", RuleAction::kDrop, RuleKind::kRegex,
       R"re((?i)^(?:chief (?:editor|development)|editors?|drafting (?:unit|staff|committee)|drafted by|approved by|approval department|issued by|participating (?:units?|organi[sz]ations?)|main (?:drafters|reviewers)|reviewers?)\b[^.]*[:：])re",
       0.0},
      {"caption", RuleAction::kDrop, RuleKind::kRegex,
       R"re((?i)^(?:表|图|table|figure|fig\.)\s*[A-Z]?\d+(?:\.\d+)*\s*[^。；;，,.]*$)re",
       0.0},
      {"heading", RuleAction::kDrop, RuleKind::kRegex,
       R"re(^(?:\d+(?:\.\d+)?|附录\s*[A-Z]|第[一二三四五六七八九十百零]+[章节])\s*[^。；;：:，,.!?！？]{0,40}$)re",
       0.0},
      {"numeric_only", RuleAction::kDrop, RuleKind::kRegex,
       R"re(^[\d\s.\-—–~·]+$)re", 0.0},
      {"table_fragment", RuleAction::kDrop, RuleKind::kTableFragment, "", 0.5},
      {"garbled", RuleAction::kDrop, RuleKind::kMinLetterRatio, "", 0.5},
  };
  return c;
}

CleaningConfig CleaningConfig::FromJson(const nlohmann::json& j) {
  CleaningConfig c;
  c.drop_preamble = j.value("drop_preamble", true);
  if (!j.contains("rules") || !j.at("rules").is_array()) {
    throw Error(ErrorCode::kInvalidConfig, "cleaning config needs 'rules'");
  }
  for (const auto& r : j.at("rules")) {
    CleaningRule rule;
    rule.name = r.value("name", "");
    const std::string action = r.value("action", "drop");
    if (action == "drop") {
      rule.action = RuleAction::kDrop;
    } else if (action == "keep") {
      rule.action = RuleAction::kKeep;
    } else {
      throw Error(ErrorCode::kInvalidConfig,
                  "rule action must be keep or drop, got '" + action + "'");
    }
    rule.kind = ParseRuleKind(r.value("kind", "regex"));
    rule.pattern = r.value("pattern", "");
    rule.threshold = r.value("threshold", 0.0);
    if (rule.kind == RuleKind::kRegex && rule.pattern.empty()) {
      throw Error(ErrorCode::kInvalidConfig,
                  "regex rule '" + rule.name + "' has no pattern");
    }
    if (rule.kind == RuleKind::kRegex) Compile(rule.pattern);
    c.rules.push_back(std::move(rule));
  }
  return c;
}

nlohmann::json CleaningConfig::ToJson() const {
  nlohmann::json rules_json = nlohmann::json::array();
  for (const auto& r : rules) {
    rules_json.push_back({
        {"name", r.name},
        {"action", r.action == RuleAction::kDrop ? "drop" : "keep"},
        {"kind", RuleKindName(r.kind)},
        {"pattern", r.pattern},
        {"threshold", r.threshold},
    });
  }
  return {{"rules", rules_json}, {"drop_preamble", drop_preamble}};
}

struct LineFilter::Impl {
  struct Compiled {
    CleaningRule rule;
    std::unique_ptr<icu::RegexPattern> regex;
  };
  std::vector<Compiled> rules;
};

LineFilter::LineFilter(const CleaningConfig& config)
    : impl_(std::make_unique<Impl>()) {
  for (const auto& r : config.rules) {
    Impl::Compiled c{r, nullptr};
    if (r.kind == RuleKind::kRegex) c.regex = Compile(r.pattern);
    impl_->rules.push_back(std::move(c));
  }
}

LineFilter::~LineFilter() = default;
LineFilter::LineFilter(LineFilter&&) noexcept = default;
LineFilter& LineFilter::operator=(LineFilter&&) noexcept = default;

std::optional<std::string> LineFilter::DropReason(
    std::string_view normalized) const {
  if (normalized.empty()) return "blank";
  for (const auto& c : impl_->rules) {
    bool match = false;
    switch (c.rule.kind) {
      case RuleKind::kRegex:
        match = Find(*c.regex, normalized);
        break;
      case RuleKind::kMinCjkRatio:
        match = CharacterRatios(normalized).cjk < c.rule.threshold;
        break;
      case RuleKind::kMinLetterRatio:
        match = CharacterRatios(normalized).letter < c.rule.threshold;
        break;
      case RuleKind::kTableFragment:
        match = LooksLikeTableRow(normalized, c.rule.threshold);
        break;
    }
    if (match) {
      if (c.rule.action == RuleAction::kKeep) return std::nullopt;
      return c.rule.name.empty() ? std::string(RuleKindName(c.rule.kind))
                                 : c.rule.name;
    }
  }
  return std::nullopt;
}

RawDocument CleanDocument(const RawDocument& raw, const CleaningConfig& rules) {
  if (raw.lines.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "document '" + raw.doc_id + "' has no lines");
  }
  const LineFilter filter(rules);
  RawDocument out;
  out.doc_id = raw.doc_id;
  out.meta = raw.meta;
  for (const SourceLine& line : raw.lines) {
    std::string text = unicode::NormalizeText(line.text);
    if (filter.DropReason(text)) continue;
    out.lines.push_back({line.number, std::move(text)});
  }
  if (rules.drop_preamble) {
    auto first = std::find_if(
        out.lines.begin(), out.lines.end(),
        [](const SourceLine& l) { return StartsWithProvisionNumber(l.text); });
    if (first != out.lines.end()) out.lines.erase(out.lines.begin(), first);
  }
  if (out.lines.empty()) {
    throw Error(ErrorCode::kEmptyAfterCleaning,
                "no lines of '" + raw.doc_id + "' survived cleaning");
  }
  return out;
}

// ---------------------------------------------------------------------------

bool StartsWithProvisionNumber(std::string_view line) {
  return Find(ProvisionPattern(), line);
}

bool StartsWithListMarker(std::string_view line) {
  return Find(ListMarkerPattern(), line);
}

std::string MakeClauseId(std::string_view doc_id, size_t ordinal) {
  return std::string(doc_id) + "#" + std::to_string(ordinal);
}

std::vector<Clause> SegmentClauses(const RawDocument& doc,
                                   const SegmentConfig& config) {
  std::vector<Clause> clauses;
  std::string current;
  for (const SourceLine& line : doc.lines) {
    std::string text = unicode::NormalizeText(line.text);
    if (text.empty()) continue;
    const bool opens = clauses.empty() || StartsWithProvisionNumber(text) ||
                       (config.list_items_start_clause &&
                        StartsWithListMarker(text));
    if (opens) {
      Clause c;
      c.doc_id = doc.doc_id;
      c.clause_id = MakeClauseId(doc.doc_id, clauses.size() + 1);
      c.text = std::move(text);
      c.first_line = c.last_line = line.number;
      clauses.push_back(std::move(c));
    } else {
      Clause& c = clauses.back();
      c.text += ' ';
      c.text += text;
      c.last_line = line.number;
    }
  }
  return clauses;
}

// ---------------------------------------------------------------------------

RawDocument ReadDocument(const std::filesystem::path& path,
                         std::string doc_id, CodeMeta meta) {
  RawDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.meta = std::move(meta);
  size_t number = 0;
  for (std::string& line : ReadLines(path)) {
    doc.lines.push_back({++number, std::move(line)});
  }
  return doc;
}

CodeMeta CodeMetaFromJson(const nlohmann::json& j) {
  CodeMeta m;
  try {
    m.title = j.value("title", "");
    m.level = ParseCodeLevel(j.at("level").get<std::string>());
    m.domain_tag = j.value("domain_tag", "");
    if (j.contains("year") && !j.at("year").is_null()) {
      m.year = j.at("year").get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad code metadata: ") + e.what());
  }
  return m;
}

nlohmann::json CodeMetaToJson(const CodeMeta& meta) {
  nlohmann::json j = {
      {"title", meta.title},
      {"level", CodeLevelName(meta.level)},
      {"domain_tag", meta.domain_tag},
  };
  j["year"] = meta.year ? nlohmann::json(*meta.year) : nlohmann::json(nullptr);
  return j;
}

std::map<std::string, CodeMeta> ReadMetaFile(
    const std::filesystem::path& path) {
  const nlohmann::json j = ReadJsonFile(path);
  std::map<std::string, CodeMeta> out;
  if (j.is_object()) {
    for (const auto& [doc_id, value] : j.items()) {
      out.emplace(doc_id, CodeMetaFromJson(value));
    }
  } else if (j.is_array()) {
    for (const auto& value : j) {
      if (!value.contains("doc_id")) {
        throw Error(ErrorCode::kParse, path.string() + ": entry lacks doc_id");
      }
      out.emplace(value.at("doc_id").get<std::string>(),
                  CodeMetaFromJson(value));
    }
  } else {
    throw Error(ErrorCode::kParse,
                path.string() + ": expected an object or array");
  }
  return out;
}

nlohmann::ordered_json ClauseToJson(const Clause& clause) {
  nlohmann::ordered_json j;
  j["clause_id"] = clause.clause_id;
  j["doc_id"] = clause.doc_id;
  j["text"] = clause.text;
  j["first_line"] = clause.first_line;
  j["last_line"] = clause.last_line;
  return j;
}

Clause ClauseFromJson(const nlohmann::json& j) {
  Clause c;
  try {
    c.clause_id = j.at("clause_id").get<std::string>();
    c.doc_id = j.value("doc_id", "");
    c.text = j.at("text").get<std::string>();
    c.first_line = j.value("first_line", size_t{0});
    c.last_line = j.value("last_line", size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad clause record: ") + e.what());
  }
  return c;
}

std::vector<Clause> ReadClauses(const std::filesystem::path& path) {
  std::vector<Clause> out;
  for (const auto& j : ReadJsonl(path)) out.push_back(ClauseFromJson(j));
  return out;
}

void WriteClauses(const std::filesystem::path& path,
                  const std::vector<Clause>& clauses) {
  std::vector<nlohmann::ordered_json> rows;
  rows.reserve(clauses.size());
  for (const auto& c : clauses) rows.push_back(ClauseToJson(c));
  WriteJsonl(path, rows);
}

}  // namespace codeinterp
