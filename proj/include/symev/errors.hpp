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

#ifndef SYMEV_ERRORS_HPP_
#define SYMEV_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace symev {

enum class ErrorCode {
  kInvalidAlphabet,
  kDegenerateRange,
  kCollapsedCells,
  kTooFewDistinct,
  kUnknownCategory,
  kAllMissing,
  kSingleClassDataset,
  kEmptyDataset,
  kEmptySequence,
  kIndexOutOfRange,
  kShapeMismatch,
  kSequenceTooShort,
  kNonFiniteLoss,
  kDigestMismatch,
  kConfig,
  kData,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Process exit status used by the command line driver for a given error.
// 2 = configuration error, 3 = data error, 4 = numeric failure.
int ExitStatus(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code),
        detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the error code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace symev

#endif  // SYMEV_ERRORS_HPP_
