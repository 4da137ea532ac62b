// Copyright 2026 The mscorisk Authors.
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

#ifndef MSCORISK_ERROR_HPP_
#define MSCORISK_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace mscorisk {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kParse,
  kDuplicateDate,
  kNonMonotoneDates,
  kRaggedRow,
  kNonPositivePrice,
  kDegenerateSeries,
  kNotPositiveDefinite,
  kDimensionMismatch,
  kBracketFailure,
  kUndefinedMoment,
  kRegimeCollapse,
  kNumericUnderflow,
  kInstanceTooLarge,
  kFitFailed,
  kIncompleteMap,
};

// Single exception type for the library; `code()` distinguishes failure kinds.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mscorisk

#endif  // MSCORISK_ERROR_HPP_
