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
#include "combnet/error.hpp"

namespace combnet {

std::string_view error_tag(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return "usage";
    case ErrorCode::kPath: return "path";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kEmptySelection: return "empty_selection";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kSize: return "size";
    case ErrorCode::kScaleDegenerate: return "scale_degenerate";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kIndex: return "index";
    case ErrorCode::kUnflattenable: return "unflattenable";
    case ErrorCode::kRecovery: return "recovery";
    case ErrorCode::kPlan: return "plan";
    case ErrorCode::kDivergence: return "divergence";
  }
  return "unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
      return 2;
    case ErrorCode::kDivergence:
    case ErrorCode::kRecovery:
    case ErrorCode::kUnflattenable:
    case ErrorCode::kDomain:
      return 4;
    default:
      return 3;
  }
}

}  // namespace combnet
