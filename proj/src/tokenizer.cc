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

#include "codeinterp/tokenizer.h"

#include <unicode/uchar.h>

#include <algorithm>

#include "codeinterp/errors.h"
#include "codeinterp/jsonl.h"
#include "codeinterp/unicode.h"

namespace codeinterp {
namespace {

constexpr size_t kMaxCharsPerWord = 100;

bool IsBertWhitespace(char32_t cp) {
  if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r') return true;
  return u_charType(static_cast<UChar32>(cp)) == U_SPACE_SEPARATOR;
}

bool IsBertControl(char32_t cp) {
  if (cp == '\t' || cp == '\n' || cp == '\r') return false;
  switch (u_charType(static_cast<UChar32>(cp))) {
    case U_CONTROL_CHAR:
    case U_FORMAT_CHAR:
    case U_UNASSIGNED:
    case U_PRIVATE_USE_CHAR:
    case U_SURROGATE:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::vector<std::string> BasicTokenize(std::string_view text, bool lower_case) {
  // Clean, then isolate CJK characters with spaces.
  std::u32string spaced;
  for (char32_t cp : unicode::Decode(text)) {
    if (cp == 0 || cp == 0xFFFD || IsBertControl(cp)) continue;
    if (IsBertWhitespace(cp)) {
      spaced.push_back(U' ');
    } else if (unicode::IsCjk(cp)) {
      spaced.push_back(U' ');
      spaced.push_back(cp);
      spaced.push_back(U' ');
    } else {
      spaced.push_back(cp);
    }
  }
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos < spaced.size()) {
    while (pos < spaced.size() && spaced[pos] == U' ') ++pos;
    size_t end = pos;
    while (end < spaced.size() && spaced[end] != U' ') ++end;
    if (end == pos) break;
    std::string word = unicode::Encode(spaced.substr(pos, end - pos));
    pos = end;
    if (lower_case) word = unicode::LowercaseStripAccents(word);
    std::string current;
    for (char32_t cp : unicode::Decode(word)) {
      if (unicode::IsPunctuation(cp)) {
        if (!current.empty()) out.push_back(std::move(current));
        current.clear();
        unicode::AppendUtf8(cp, &current);
        out.push_back(std::move(current));
        current.clear();
      } else {
        unicode::AppendUtf8(cp, &current);
      }
    }
    if (!current.empty()) out.push_back(std::move(current));
  }
  return out;
}

BertTokenizer::BertTokenizer(std::vector<std::string> vocab, bool lower_case)
    : vocab_(std::move(vocab)), lower_case_(lower_case) {
  for (size_t i = 0; i < vocab_.size(); ++i) {
    // First occurrence wins, as in the reference loader.
    index_.emplace(vocab_[i], static_cast<int64_t>(i));
  }
  pad_id_ = Require("[PAD]");
  unk_id_ = Require("[UNK]");
  cls_id_ = Require("[CLS]");
  sep_id_ = Require("[SEP]");
  mask_id_ = Require("[MASK]");
}

BertTokenizer BertTokenizer::FromFile(const std::filesystem::path& path,
                                      bool lower_case) {
  std::vector<std::string> vocab = ReadLines(path);
  while (!vocab.empty() && vocab.back().empty()) vocab.pop_back();
  return BertTokenizer(std::move(vocab), lower_case);
}

int64_t BertTokenizer::Require(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) {
    throw Error(ErrorCode::kParse, "vocabulary lacks " + token);
  }
  return it->second;
}

bool BertTokenizer::IsSpecial(int64_t id) const {
  return id == pad_id_ || id == unk_id_ || id == cls_id_ || id == sep_id_ ||
         id == mask_id_;
}

void BertTokenizer::WordPiece(const std::string& word,
                              std::vector<std::string>* out) const {
  const std::u32string chars = unicode::Decode(word);
  if (chars.size() > kMaxCharsPerWord) {
    out->push_back("[UNK]");
    return;
  }
  std::vector<std::string> pieces;
  size_t start = 0;
  while (start < chars.size()) {
    size_t end = chars.size();
    std::string found;
    while (start < end) {
      std::string piece = unicode::Encode(chars.substr(start, end - start));
      if (start > 0) piece = "##" + piece;
      if (index_.count(piece)) {
        found = std::move(piece);
        break;
      }
      --end;
    }
    if (found.empty()) {
      out->push_back("[UNK]");
      return;
    }
    pieces.push_back(std::move(found));
    start = end;
  }
  out->insert(out->end(), pieces.begin(), pieces.end());
}

std::vector<std::string> BertTokenizer::Tokenize(std::string_view text) const {
  std::vector<std::string> out;
  for (const std::string& word : BasicTokenize(text, lower_case_)) {
    WordPiece(word, &out);
  }
  return out;
}

std::vector<int64_t> BertTokenizer::ToIds(
    const std::vector<std::string>& tokens) const {
  std::vector<int64_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto it = index_.find(t);
    ids.push_back(it == index_.end() ? unk_id_ : it->second);
  }
  return ids;
}

Encoding BertTokenizer::Encode(std::string_view text, size_t max_len) const {
  if (max_len < 2) throw Error(ErrorCode::kInvalidArgument, "max_len < 2");
  std::vector<int64_t> body = ToIds(Tokenize(text));
  Encoding enc;
  if (body.size() > max_len - 2) {
    enc.truncated = body.size() - (max_len - 2);
    body.resize(max_len - 2);
  }
  enc.ids.push_back(cls_id_);
  enc.ids.insert(enc.ids.end(), body.begin(), body.end());
  enc.ids.push_back(sep_id_);
  enc.mask.assign(enc.ids.size(), 1);
  enc.ids.resize(max_len, pad_id_);
  enc.mask.resize(max_len, 0);
  enc.token_type.assign(max_len, 0);
  return enc;
}

Encoding BertTokenizer::EncodePair(std::vector<int64_t> a,
                                   std::vector<int64_t> b,
                                   size_t max_len) const {
  if (max_len < 3) throw Error(ErrorCode::kInvalidArgument, "max_len < 3");
  Encoding enc;
  while (a.size() + b.size() > max_len - 3) {
    (a.size() > b.size() ? a : b).pop_back();
    ++enc.truncated;
  }
  enc.ids.push_back(cls_id_);
  enc.ids.insert(enc.ids.end(), a.begin(), a.end());
  enc.ids.push_back(sep_id_);
  enc.token_type.assign(enc.ids.size(), 0);
  enc.ids.insert(enc.ids.end(), b.begin(), b.end());
  enc.ids.push_back(sep_id_);
  enc.token_type.resize(enc.ids.size(), 1);
  enc.mask.assign(enc.ids.size(), 1);
  enc.ids.resize(max_len, pad_id_);
  enc.mask.resize(max_len, 0);
  enc.token_type.resize(max_len, 0);
  return enc;
}

}  // namespace codeinterp
