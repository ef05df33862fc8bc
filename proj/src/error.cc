// Copyright 2026 The RAPM Authors.
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

#include "rapm/error.h"

namespace rapm {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kAlreadyExists: return "already exists";
    case ErrorCode::kNotFound: return "not found";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kFailedPrecondition: return "failed precondition";
    case ErrorCode::kConfig: return "configuration error";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kChecksum: return "checksum failure";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kNetwork: return "network error";
  }
  return "unknown";
}

bool Error::is_validation() const {
  switch (code_) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kFormat:
    case ErrorCode::kAlreadyExists:
    case ErrorCode::kNotFound:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kFailedPrecondition:
    case ErrorCode::kConfig:
      return true;
    default:
      return false;
  }
}

}  // namespace rapm
