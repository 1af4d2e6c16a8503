// Copyright 2026 The corrmat Authors.
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

#include "corrmat/common.hpp"

namespace corrmat {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParameter: return "parameter error";
    case ErrorCode::kDimension: return "dimension error";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kConvergence: return "convergence error";
    case ErrorCode::kSingular: return "singularity error";
    case ErrorCode::kNumeric: return "numeric error";
    case ErrorCode::kIo: return "io error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kUnsupported: return "unsupported kind";
    case ErrorCode::kResolution: return "resolution error";
    case ErrorCode::kPrecondition: return "precondition error";
    case ErrorCode::kBracketing: return "bracketing error";
    case ErrorCode::kSize: return "size error";
    case ErrorCode::kIllPosed: return "ill-posed profile";
    case ErrorCode::kInput: return "input error";
  }
  return "unknown error";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace corrmat
