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

#ifndef CODEINTERP_UNICODE_H_
#define CODEINTERP_UNICODE_H_

#include <string>
#include <string_view>
#include <vector>

namespace codeinterp::unicode {

// Decodes UTF-8; malformed sequences become U+FFFD.
std::u32string Decode(std::string_view utf8);
std::string Encode(std::u32string_view text);
void AppendUtf8(char32_t cp, std::string* out);

std::string Nfc(std::string_view utf8);

// NFC, every Unicode space (including U+3000) mapped to ASCII space, runs
// collapsed, ends trimmed. Idempotent.
std::string NormalizeText(std::string_view utf8);

// Lowercases and removes combining marks after NFD.
std::string LowercaseStripAccents(std::string_view utf8);

bool IsCjk(char32_t cp);
bool IsWhitespace(char32_t cp);
bool IsControl(char32_t cp);
bool IsPunctuation(char32_t cp);
bool IsLetter(char32_t cp);
bool IsDigit(char32_t cp);

// Number of code points, not bytes.
size_t Length(std::string_view utf8);

}  // namespace codeinterp::unicode

#endif  // CODEINTERP_UNICODE_H_
