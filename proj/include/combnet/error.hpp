/*
 * Copyright 2026 The combnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace combnet {

enum class ErrorCode {
  kUsage,
  kPath,
  kFormat,
  kParse,
  kEmptySelection,
  kEmptyInput,
  kDimension,
  kShape,
  kSize,
  kScaleDegenerate,
  kDomain,
  kIndex,
  kUnflattenable,
  kRecovery,
  kPlan,
  kDivergence,
};

/// Short machine-readable tag, e.g. "shape" or "empty_selection".
std::string_view error_tag(ErrorCode code);

/// Process exit status for a failure of this kind: 2 usage, 3 data, 4 numeric.
int exit_code_for(ErrorCode code);

/// Single exception type for every library failure. The code carries the
/// category; the message carries the specifics (row index, line ids, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace combnet
