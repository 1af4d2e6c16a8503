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

#include "corrmat/common.hpp"

namespace corrmat {

// g(s, u) sampled on a K_s x K_u grid, s_m = m / K_s, u_j = j / K_u.
struct TorusFunction {
  int K_s = 0;
  int K_u = 0;
  ComplexMatrix values;  // K_s x K_u
  Complex z{0.0, 0.0};   // spectral parameter the function solves at, if any

  TorusFunction() = default;
  TorusFunction(int ks, int ku, Complex zz = {})
      : K_s(ks), K_u(ku), values(ComplexMatrix::Zero(ks, ku)), z(zz) {}

  static TorusFunction constant(int ks, int ku, Complex c, Complex zz = {}) {
    TorusFunction f(ks, ku, zz);
    f.values.setConstant(c);
    return f;
  }

  double sup_norm() const { return values.cwiseAbs().maxCoeff(); }
  double min_imag() const { return values.imag().minCoeff(); }
};

}  // namespace corrmat
