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

#ifndef RAPM_ERROR_H_
#define RAPM_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rapm {

enum class ErrorCode {
  kInvalidArgument,
  kFormat,
  kAlreadyExists,
  kNotFound,
  kDimensionMismatch,
  kFailedPrecondition,
  kConfig,
  kVersionMismatch,
  kChecksum,
  kIo,
  kNetwork,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

  // True for errors caused by bad user input or configuration, as opposed to
  // environment failures (I/O, network, corrupted files).
  bool is_validation() const;

 private:
  ErrorCode code_;
};

}  // namespace rapm

#endif  // RAPM_ERROR_H_
