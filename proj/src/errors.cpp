/* Copyright 2026 The symev Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "symev/errors.hpp"

namespace symev {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidAlphabet: return "InvalidAlphabet";
    case ErrorCode::kDegenerateRange: return "DegenerateRange";
    case ErrorCode::kCollapsedCells: return "CollapsedCells";
    case ErrorCode::kTooFewDistinct: return "TooFewDistinct";
    case ErrorCode::kUnknownCategory: return "UnknownCategory";
    case ErrorCode::kAllMissing: return "AllMissing";
    case ErrorCode::kSingleClassDataset: return "SingleClassDataset";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kSequenceTooShort: return "SequenceTooShort";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kDigestMismatch: return "DigestMismatch";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kData: return "DataError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

int ExitStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kInvalidAlphabet:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kSequenceTooShort:
      return 2;
    case ErrorCode::kNonFiniteLoss:
      return 4;
    default:
      return 3;
  }
}

}  // namespace symev
