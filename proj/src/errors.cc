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

#include "codeinterp/errors.h"

namespace codeinterp {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kEmptyAfterCleaning: return "EmptyAfterCleaning";
    case ErrorCode::kNoReplaceableToken: return "NoReplaceableToken";
    case ErrorCode::kRatio: return "RatioError";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kMissingMeta: return "MissingMeta";
    case ErrorCode::kCheckpointNotFound: return "CheckpointNotFound";
    case ErrorCode::kCorpusTooSmall: return "CorpusTooSmall";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kDivergedTraining: return "DivergedTraining";
    case ErrorCode::kLocked: return "Locked";
  }
  return "Unknown";
}

}  // namespace codeinterp
