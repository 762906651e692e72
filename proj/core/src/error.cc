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

#include "sparsefuse/error.h"

namespace sparsefuse {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kRankMismatch: return "RankMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateIndexInRef: return "DuplicateIndexInRef";
    case ErrorCode::kExtentMismatch: return "ExtentMismatch";
    case ErrorCode::kMissingExtent: return "MissingExtent";
    case ErrorCode::kFreeOutputIndex: return "FreeOutputIndex";
    case ErrorCode::kIndexScope: return "IndexScope";
    case ErrorCode::kRefMismatch: return "RefMismatch";
    case ErrorCode::kScalarIntermediate: return "ScalarIntermediate";
    case ErrorCode::kUnknownTensor: return "UnknownTensor";
    case ErrorCode::kNotATree: return "NotATree";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kMissingVariable: return "MissingVariable";
    case ErrorCode::kMalformedSchedule: return "MalformedSchedule";
    case ErrorCode::kPrefixMismatch: return "PrefixMismatch";
    case ErrorCode::kUnboundTensor: return "UnboundTensor";
    case ErrorCode::kModeOrderMismatch: return "ModeOrderMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kUnknownKind: return "UnknownKind";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      message_(message) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sparsefuse
