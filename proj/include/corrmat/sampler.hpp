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
#include <memory>
#include <string>
#include <vector>

#include "corrmat/common.hpp"
#include "corrmat/model.hpp"

namespace corrmat {

struct SampleMatrix {
  int N = 0;
  RealMatrix entries;  // symmetric, bit-exact
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::string ensemble_tag;
};

// FFT filter whose autocorrelation realizes the stationary part of xi.
struct Filter {
  int N = 0;
  RealMatrix coeffs;             // on wrapped offsets (a mod N, b mod N)
  std::vector<Complex> spectrum;  // 2D DFT of coeffs, row-major
  bool psd_clipped = false;
  double clip_mass = 0.0;  // fraction of spectral mass removed by clipping

  static Filter from_coeffs(RealMatrix coeffs);
  static Filter zero(int N);
};

// GOE: point mass sqrt(1/N). PowerLawTI: square root of the clipped
// spectrum of c1^2 (1 + |a| + |b|)^-d / N. Modulated kinds are rejected.
Filter build_filter(const CorrelationProfile& profile, int N);

// H = (Y + Y^T)/sqrt(2) + c2 X, Y = coeffs (*) W. W comes from substream 0,
// X from substream 1 of (seed, trial).
SampleMatrix sample_matrix(const Filter& filter, double c2, int N, std::uint64_t seed,
                           std::uint64_t trial, std::string tag = "filtered");

// A = Z + Z^T with Z iid N(0, 1/(2N)): off-diagonal variance 1/N, diagonal
// variance 2/N, spectrum edges at -2 and 2.
SampleMatrix sample_goe(int N, std::uint64_t seed, std::uint64_t trial);

// Dense path for profiles without translation invariance: the covariance of
// the N(N+1)/2 upper-triangular entries is assembled from eval_xi and
// factorized once.
class DenseSampler {
 public:
  static constexpr int kMaxN = 64;
  static constexpr double kMaxClipMass = 0.1;

  DenseSampler(const CorrelationProfile& profile, int N);

  SampleMatrix sample(std::uint64_t seed, std::uint64_t trial) const;
  const RealizedCovariance& covariance() const { return *covariance_; }
  double clip_mass() const { return clip_mass_; }
  int N() const { return n_; }

 private:
  int n_;
  RealMatrix factor_;
  double clip_mass_ = 0.0;
  std::shared_ptr<const RealizedCovariance> covariance_;
};

SampleMatrix sample_matrix_general(const CorrelationProfile& profile, int N,
                                   std::uint64_t seed, std::uint64_t trial);

// Sampling front-end for one profile at one N; picks the FFT or dense path.
class Ensemble {
 public:
  Ensemble(const CorrelationProfile& profile, int N);
  // Raw construction from a filter (e.g. filter = 0 with c2 = 1 for GOE).
  Ensemble(Filter filter, double c2, double decay_order, std::string tag);

  SampleMatrix sample(std::uint64_t seed, std::uint64_t trial) const;
  const RealizedCovariance& covariance() const { return *covariance_; }
  int N() const { return n_; }
  const std::string& tag() const { return tag_; }
  const Filter* filter() const { return filter_ ? filter_.get() : nullptr; }
  double c2() const { return c2_; }

 private:
  int n_ = 0;
  double c2_ = 0.0;
  std::string tag_;
  std::shared_ptr<const Filter> filter_;
  std::shared_ptr<const DenseSampler> dense_;
  std::shared_ptr<const RealizedCovariance> covariance_;
};

using Quadruple = std::array<int, 4>;

struct CovarianceEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Streaming N * mean(h_ij h_kl) with standard errors (Welford).
class CovarianceAccumulator {
 public:
  CovarianceAccumulator(int N, std::vector<Quadruple> quadruples);

  void add(const RealMatrix& H);
  std::vector<CovarianceEstimate> results() const;
  long long count() const { return count_; }
  const std::vector<Quadruple>& quadruples() const { return quads_; }

 private:
  int n_;
  std::vector<Quadruple> quads_;
  std::vector<double> mean_;
  std::vector<double> m2_;
  long long count_ = 0;
};

std::vector<CovarianceEstimate> empirical_covariance(const std::vector<SampleMatrix>& samples,
                                                     const std::vector<Quadruple>& quadruples);

// Fixed audit set of 20 quadruples used by the covariance checks.
std::vector<Quadruple> audit_quadruples(int N, std::uint64_t seed = 20);

}  // namespace corrmat
