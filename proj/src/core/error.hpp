// Copyright 2026 The ppack Authors
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

#ifndef PPACK_CORE_ERROR_HPP_
#define PPACK_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ppack {

// Mirrors ppack_status in the public C header; values must stay in sync.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kInfeasible = 3,
  kIo = 4,
  kParse = 5,
  kBudgetExceeded = 6,
  kOverflow = 7,
  kGuardFailed = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void Require(bool cond, const std::string& what) {
  if (!cond) Fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace ppack

#endif  // PPACK_CORE_ERROR_HPP_
