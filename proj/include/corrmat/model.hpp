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

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "corrmat/common.hpp"

namespace corrmat {

enum class ProfileKind { kGoe, kPowerLawTI, kPowerLawModulated };

std::string_view to_string(ProfileKind kind);
ProfileKind parse_profile_kind(std::string_view name);

// Correlation profile phi of the entry covariance xi_ijkl = N E[h_ij h_kl].
//
//   GOE:        xi = d_ik d_jl + d_il d_jk
//   power law:  xi = c1^2 sqrt(w_ij w_kl) [K(i-k, j-l) + K(i-l, j-k)]
//                    + c2^2 (d_ik d_jl + d_il d_jk)
//
// with K(a, b) = (1 + |a| + |b|)^-d over torus distances and the modulation
// w(s, t) = 1 + eps sin(2 pi s) sin(2 pi t), s = i/N, t = j/N. The geometric
// mean of the two endpoint weights keeps xi exactly symmetric under
// (ij) <-> (kl) and makes the modulated covariance a congruence of the
// stationary one.
class CorrelationProfile {
 public:
  static constexpr double kDefaultDecay = 3.0;

  // Throws kParameter on invalid values. alpha = NaN selects (2 + d) / 2.
  static CorrelationProfile create(ProfileKind kind, double d, double c1, double c2,
                                   double eps_mod = 0.0,
                                   double alpha = std::numeric_limits<double>::quiet_NaN());
  static CorrelationProfile goe(double d = kDefaultDecay);
  static CorrelationProfile power_law(double d, double c1, double c2);
  static CorrelationProfile modulated(double d, double c1, double c2, double eps_mod);

  ProfileKind kind() const { return kind_; }
  double d() const { return d_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double eps_mod() const { return eps_mod_; }
  double alpha() const { return alpha_; }

  bool translation_invariant() const { return kind_ != ProfileKind::kPowerLawModulated; }

  // w(s, t); identically 1 unless the profile is modulated.
  double modulation(double s, double t) const;
  // Power-law kernel (1 + a + b)^-d for nonnegative distances.
  double kernel(int dist_a, int dist_b) const;
  // Lipschitz constant of phi in (s, t) (Euclidean gradient bound).
  double lipschitz_constant() const;

  std::string describe() const;

 private:
  CorrelationProfile() = default;

  ProfileKind kind_ = ProfileKind::kGoe;
  double d_ = kDefaultDecay;
  double c1_ = 1.0;
  double c2_ = 0.0;
  double eps_mod_ = 0.0;
  double alpha_ = 2.5;
};

// Nominal xi_ijkl of the profile; indices are reduced mod N.
double eval_xi(const CorrelationProfile& profile, long long i, long long j, long long k,
               long long l, int N);

// max{(|i-k| + |j-l| + 1)^-d, (|i-l| + |j-k| + 1)^-d} over torus distances.
double decay_envelope(long long i, long long j, long long k, long long l, int N, double d);

// min{max{xi, -c1^2 (1+dist)^-d}, c1^2 (1+dist)^-d}
double clamp_xi(double xi_val, int dist_ij, double c1, double d);

struct DecayCheckReport {
  double max_ratio = 0.0;  // effective c1^2
  bool passed = false;     // max ratio finite
  long long quadruples_checked = 0;
  std::array<int, 4> argmax{};
};

// Samples n_samples random quadruples plus the coincident pairings
// (i,j,i,j), (i,j,j,i) on a few fixed rows, and returns the largest ratio
// |xi| / decay_envelope.
DecayCheckReport verify_decay(const CorrelationProfile& profile, int N, int n_samples,
                              std::uint64_t seed = 0);

// Exact N * Cov(h_ij, h_kl) of a concrete sampling construction. Two storage
// forms: stationary (autocorrelation table of an FFT filter plus a GOE part)
// and dense (packed covariance over upper-triangular entries).
class RealizedCovariance {
 public:
  // coeffs is an N x N filter on wrapped offsets; the construction is
  // H = (Y + Y^T)/sqrt(2) + c2 X with Y = coeffs * W (circular convolution).
  static RealizedCovariance from_filter(const RealMatrix& coeffs, double c2, int N,
                                        double decay_order = CorrelationProfile::kDefaultDecay);
  // entry_cov(e, e') = N Cov(h_e, h_e') over packed entries e = (i <= j).
  static RealizedCovariance from_dense(int N, RealMatrix entry_cov,
                                       double decay_order = CorrelationProfile::kDefaultDecay);

  int N() const { return n_; }
  double c2() const { return c2_; }
  double decay_order() const { return decay_order_; }
  bool stationary() const { return stationary_; }

  double xi(long long i, long long j, long long k, long long l) const;

  // Symmetrized N * autocorrelation, N x N on wrapped offsets (stationary only).
  const RealMatrix& pair_kernel() const { return pair_kernel_; }

  // Constant kappa with |xi| <= kappa * decay_envelope for all quadruples;
  // its square root plays the role of c1 in the clamp used by S.
  double decay_constant() const { return decay_constant_; }
  double clamp_bound(int dist) const;

  // Packed index of entry (i, j), i <= j.
  static int packed_index(int i, int j, int N);

 private:
  RealizedCovariance() = default;
  void compute_decay_constant();

  int n_ = 0;
  double c2_ = 0.0;
  double decay_order_ = CorrelationProfile::kDefaultDecay;
  bool stationary_ = true;
  RealMatrix pair_kernel_;
  RealMatrix dense_;
  double decay_constant_ = 0.0;
};

RealizedCovariance realized_covariance(const RealMatrix& filter, double c2, int N,
                                       double decay_order = CorrelationProfile::kDefaultDecay);

}  // namespace corrmat
