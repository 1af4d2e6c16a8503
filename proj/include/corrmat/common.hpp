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

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace corrmat {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

// Mirrors cm_status in the C API; values must stay in sync.
enum class ErrorCode : int {
  kParameter = 1,
  kDimension = 2,
  kDomain = 3,
  kConvergence = 4,
  kSingular = 5,
  kNumeric = 6,
  kIo = 7,
  kParse = 8,
  kUnsupported = 9,
  kResolution = 10,
  kPrecondition = 11,
  kBracketing = 12,
  kSize = 13,
  kIllPosed = 14,
  kInput = 15,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

// Representative of i in [0, n).
inline int wrap_index(long long i, int n) {
  long long r = i % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// Canonical offset of k on Z/nZ in (-n/2, n/2]; ties at n/2 go to +n/2.
inline int canonical_offset(long long k, int n) {
  int r = wrap_index(k, n);
  return (2 * r > n) ? r - n : r;
}

// min{|i - j + kn| : k in Z}
inline int torus_distance(long long i, long long j, int n) {
  int r = wrap_index(i - j, n);
  return r <= n - r ? r : n - r;
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace corrmat
