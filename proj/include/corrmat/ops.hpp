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

#include <cmath>
#include <memory>

#include "corrmat/common.hpp"
#include "corrmat/model.hpp"
#include "corrmat/sampler.hpp"
#include "corrmat/torus.hpp"

namespace corrmat {

// sup_ij |A_ij| (1 + |i - j|)^beta over torus distances.
template <typename Derived>
double decay_norm(const Eigen::MatrixBase<Derived>& a, double beta) {
  require(a.rows() == a.cols(), ErrorCode::kDimension, "decay_norm needs a square matrix");
  require(beta >= 0.0, ErrorCode::kParameter, "beta must be >= 0");
  const int n = static_cast<int>(a.rows());
  double best = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      best = std::max(best, std::abs(a(i, j)) * std::pow(1.0 + torus_distance(i, j, n), beta));
  return best;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.cwiseAbs().maxCoeff();
}

// Largest singular value.
double operator_norm(const ComplexMatrix& a);
double operator_norm(const RealMatrix& a);

// (S(M))_pq = (1/N) sum_{a,b} clamp(xi_{p a b q}) M_ab with the clamp bound
// decay_constant * (1 + |p - q|)^-d. Stationary covariances use an FFT
// contraction for the transposed pairing plus an exact correction on the
// set where the clamp is active; dense covariances are summed directly.
ComplexMatrix apply_S(const ComplexMatrix& M, const RealizedCovariance& cov);

struct FMapResult {
  ComplexMatrix value;
  double condition = 1.0;  // 1 / rcond of -z - S(M)
};

// F(M) = (-z - S(M))^-1. Throws kSingular when the condition estimate
// exceeds 1e12.
FMapResult f_map(const ComplexMatrix& M, Complex z, const RealizedCovariance& cov);

// Eigendecomposition of H, shared by every Green function built from it.
class Resolvent;

struct GreenFunction {
  Complex z;
  ComplexMatrix entries;
  std::shared_ptr<const RealVector> spectrum;
  double gamma_cap = 1.0;  // max_ij |G_ij| v 1
  double gamma_im = 0.0;   // max_i Im G_ii v eta

  int N() const { return static_cast<int>(entries.rows()); }
  double eta() const { return z.imag(); }
  // (1/N) tr G
  Complex normalized_trace() const { return entries.trace() / static_cast<double>(N()); }
  // max_i |sum_j |G_ij|^2 - Im G_ii / eta| / (Im G_ii / eta)
  double ward_defect() const;
};

class Resolvent {
 public:
  explicit Resolvent(const RealMatrix& H);
  explicit Resolvent(const SampleMatrix& H) : Resolvent(H.entries) {}

  GreenFunction at(Complex z) const;
  const RealVector& eigenvalues() const { return *eigenvalues_; }
  const RealMatrix& eigenvectors() const { return *eigenvectors_; }

 private:
  std::shared_ptr<const RealVector> eigenvalues_;
  std::shared_ptr<const RealMatrix> eigenvectors_;
};

GreenFunction greens_function(const SampleMatrix& H, Complex z);

struct ResidualResult {
  ComplexMatrix R;
  double r_inf = 0.0;
};

// R = G (-S(G) - z) - I
ResidualResult residual(const GreenFunction& G, const RealizedCovariance& cov);
ResidualResult residual(const ComplexMatrix& G, Complex z, const RealizedCovariance& cov);

// D(h)_ij = h^(i/N, j - i), offsets in (-N/2, N/2], s interpolated linearly
// between grid rows. Needs K_u >= N.
ComplexMatrix discretize(const TorusFunction& h, int N);

// J(A)(i/N, u) = sum_k A_{i,i+k} e^{2 pi i k u}, k in (-N/2, N/2], sampled on
// K_s = N rows and K_u >= N columns (K_u = 0 selects N).
TorusFunction embed(const ComplexMatrix& A, int K_u = 0);

}  // namespace corrmat
