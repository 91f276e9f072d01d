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

#ifndef CODEINTERP_TOKENIZER_H_
#define CODEINTERP_TOKENIZER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace codeinterp {

// Splits on whitespace and punctuation and isolates every CJK character,
// the same pre-tokenization BERT uses before WordPiece.
std::vector<std::string> BasicTokenize(std::string_view text, bool lower_case);

struct Encoding {
  std::vector<int64_t> ids;
  std::vector<int64_t> token_type;
  std::vector<int64_t> mask;
  // Content tokens dropped to fit max_len.
  size_t truncated = 0;
};

class BertTokenizer {
 public:
  BertTokenizer(std::vector<std::string> vocab, bool lower_case);
  // One token per line, id = line index.
  static BertTokenizer FromFile(const std::filesystem::path& path,
                                bool lower_case);

  std::vector<std::string> Tokenize(std::string_view text) const;
  std::vector<int64_t> ToIds(const std::vector<std::string>& tokens) const;

  // [CLS] a [SEP], padded with [PAD] to exactly max_len.
  Encoding Encode(std::string_view text, size_t max_len) const;
  // [CLS] a [SEP] b [SEP]; the longer side is trimmed first.
  Encoding EncodePair(std::vector<int64_t> a, std::vector<int64_t> b,
                      size_t max_len) const;

  size_t vocab_size() const { return vocab_.size(); }
  const std::vector<std::string>& vocab() const { return vocab_; }
  bool lower_case() const { return lower_case_; }
  int64_t pad_id() const { return pad_id_; }
  int64_t unk_id() const { return unk_id_; }
  int64_t cls_id() const { return cls_id_; }
  int64_t sep_id() const { return sep_id_; }
  int64_t mask_id() const { return mask_id_; }
  bool IsSpecial(int64_t id) const;

 private:
  void WordPiece(const std::string& word, std::vector<std::string>* out) const;
  int64_t Require(const std::string& token) const;

  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int64_t> index_;
  bool lower_case_;
  int64_t pad_id_, unk_id_, cls_id_, sep_id_, mask_id_;
};

}  // namespace codeinterp

#endif  // CODEINTERP_TOKENIZER_H_
