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

#ifndef CODEINTERP_ERRORS_H_
#define CODEINTERP_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace codeinterp {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kIo,
  kEmptyAfterCleaning,
  kNoReplaceableToken,
  kRatio,
  kLengthMismatch,
  kEmptyDocument,
  kMissingMeta,
  kCheckpointNotFound,
  kCorpusTooSmall,
  kInvalidConfig,
  kDivergedTraining,
  kLocked,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this one exception type; the
// code distinguishes the contract violation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace codeinterp

#endif  // CODEINTERP_ERRORS_H_
