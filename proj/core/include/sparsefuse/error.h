// Copyright 2026 The sparsefuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPARSEFUSE_ERROR_H_
#define SPARSEFUSE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparsefuse {

enum class ErrorCode {
  kInvalidArgument,
  kOutOfBounds,
  kRankMismatch,
  kParseError,
  kDuplicateIndexInRef,
  kExtentMismatch,
  kMissingExtent,
  kFreeOutputIndex,
  kIndexScope,
  kRefMismatch,
  kScalarIntermediate,
  kUnknownTensor,
  kNotATree,
  kTooLarge,
  kTimeout,
  kMissingVariable,
  kMalformedSchedule,
  kPrefixMismatch,
  kUnboundTensor,
  kModeOrderMismatch,
  kShapeMismatch,
  kUnknownKind,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; `code()` identifies the
// failure class and `what()` carries the human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The diagnostic without the leading error-class name.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace sparsefuse

#endif  // SPARSEFUSE_ERROR_H_
