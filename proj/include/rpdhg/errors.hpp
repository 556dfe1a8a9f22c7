// Copyright 2026 The rpdhg Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace rpdhg {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kParse,
  kGuardExceeded,
  kInfeasible,
  kUnbounded,
  kSingular,
  kIo,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kGuardExceeded: return "guard_exceeded";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kUnbounded: return "unbounded";
    case ErrorCode::kSingular: return "singular";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

// All library failures are reported through this type; `code()` lets callers
// (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace rpdhg
