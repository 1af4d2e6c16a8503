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

#include "corrmat/sampler.hpp"

#include <cmath>
#include <utility>

#include "corrmat/fft.hpp"
#include "corrmat/rng.hpp"

namespace corrmat {
namespace {

std::vector<Complex> to_row_major(const RealMatrix& m) {
  const int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
  std::vector<Complex> out(static_cast<size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out[static_cast<size_t>(r) * cols + c] = m(r, c);
  return out;
}

}  // namespace

Filter Filter::from_coeffs(RealMatrix coeffs) {
  require(coeffs.rows() == coeffs.cols() && coeffs.rows() >= 2, ErrorCode::kDimension,
          "filter coefficients must be square with N >= 2");
  Filter f;
  f.N = static_cast<int>(coeffs.rows());
  f.spectrum = to_row_major(coeffs);
  fft2d(f.spectrum, f.N, f.N);
  f.coeffs = std::move(coeffs);
  return f;
}

Filter Filter::zero(int N) { return from_coeffs(RealMatrix::Zero(N, N)); }

Filter build_filter(const CorrelationProfile& profile, int N) {
  require(N >= 2, ErrorCode::kParameter, "N must be >= 2");
  if (profile.kind() == ProfileKind::kPowerLawModulated) {
    fail(ErrorCode::kUnsupported,
         "modulated profiles are not translation invariant; use sample_matrix_general");
  }
  if (profile.kind() == ProfileKind::kGoe) {
    RealMatrix coeffs = RealMatrix::Zero(N, N);
    coeffs(0, 0) = std::sqrt(1.0 / N);
    return Filter::from_coeffs(std::move(coeffs));
  }

  const double c1sq = profile.c1() * profile.c1();
  const size_t n2 = static_cast<size_t>(N) * N;
  std::vector<Complex> spec(n2);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      spec[static_cast<size_t>(a) * N + b] =
          c1sq * profile.kernel(torus_distance(a, 0, N), torus_distance(b, 0, N)) / N;
  fft2d(spec, N, N);

  double total = 0.0, clipped = 0.0;
  for (auto& v : spec) {
    const double re = v.real();  // the kernel is even, so the spectrum is real
    total += std::abs(re);
    if (re < 0.0) {
      clipped += -re;
      v = 0.0;
    } else {
      v = std::sqrt(re);
    }
  }
  fft2d(spec, N, N, /*inverse=*/true);
  RealMatrix coeffs(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      coeffs(a, b) = spec[static_cast<size_t>(a) * N + b].real() / static_cast<double>(n2);

  Filter f = Filter::from_coeffs(std::move(coeffs));
  f.psd_clipped = clipped > 0.0;
  f.clip_mass = total > 0.0 ? clipped / total : 0.0;
  return f;
}

SampleMatrix sample_goe(int N, std::uint64_t seed, std::uint64_t trial) {
  require(N >= 2, ErrorCode::kParameter, "N must be >= 2");
  RandomStream rng(seed, trial, kGoeStream);
  const double sigma = std::sqrt(0.5 / N);
  RealMatrix z(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) z(i, j) = sigma * rng.gaussian();
  SampleMatrix out{N, RealMatrix(N, N), seed, trial, "goe"};
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      const double v = z(i, j) + z(j, i);
      out.entries(i, j) = v;
      out.entries(j, i) = v;
    }
  return out;
}

SampleMatrix sample_matrix(const Filter& filter, double c2, int N, std::uint64_t seed,
                           std::uint64_t trial, std::string tag) {
  require(filter.N == N, ErrorCode::kDimension, "filter was built for a different N");
  require(c2 >= 0.0, ErrorCode::kParameter, "c2 must be >= 0");
  const size_t n2 = static_cast<size_t>(N) * N;

  RandomStream rng(seed, trial, kFieldStream);
  std::vector<Complex> field(n2);
  for (auto& v : field) v = rng.gaussian();
  fft2d(field, N, N);
  for (size_t t = 0; t < n2; ++t) field[t] *= filter.spectrum[t];
  fft2d(field, N, N, /*inverse=*/true);

  const double inv = 1.0 / static_cast<double>(n2);
  auto y = [&](int i, int j) { return field[static_cast<size_t>(i) * N + j].real() * inv; };

  SampleMatrix out{N, RealMatrix(N, N), seed, trial, std::move(tag)};
  const double root_half = std::sqrt(0.5);
  if (c2 > 0.0) {
    const SampleMatrix x = sample_goe(N, seed, trial);
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        const double v = root_half * (y(i, j) + y(j, i)) + c2 * x.entries(i, j);
        out.entries(i, j) = v;
        out.entries(j, i) = v;
      }
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        const double v = root_half * (y(i, j) + y(j, i));
        out.entries(i, j) = v;
        out.entries(j, i) = v;
      }
  }
  return out;
}

DenseSampler::DenseSampler(const CorrelationProfile& profile, int N) : n_(N) {
  require(N >= 2, ErrorCode::kParameter, "N must be >= 2");
  require(N <= kMaxN, ErrorCode::kSize,
          "dense sampling is limited to N <= " + std::to_string(kMaxN));
  const int p = N * (N + 1) / 2;
  RealMatrix xi(p, p);
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      const int e = RealizedCovariance::packed_index(i, j, N);
      for (int k = 0; k < N; ++k)
        for (int l = k; l < N; ++l)
          xi(e, RealizedCovariance::packed_index(k, l, N)) = eval_xi(profile, i, j, k, l, N);
    }
  xi = 0.5 * (xi + xi.transpose()).eval();

  const RealMatrix cov = xi / static_cast<double>(N);
  Eigen::LLT<RealMatrix> llt(cov);
  if (llt.info() == Eigen::Success) {
    factor_ = llt.matrixL();
    clip_mass_ = 0.0;
    covariance_ = std::make_shared<RealizedCovariance>(
        RealizedCovariance::from_dense(N, std::move(xi), profile.d()));
    return;
  }

  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(cov);
  require(eig.info() == Eigen::Success, ErrorCode::kNumeric, "covariance eigensolve failed");
  RealVector lambda = eig.eigenvalues();
  const double total = lambda.cwiseAbs().sum();
  double clipped = 0.0;
  for (Eigen::Index t = 0; t < lambda.size(); ++t) {
    if (lambda(t) < 0.0) {
      clipped += -lambda(t);
      lambda(t) = 0.0;
    }
  }
  clip_mass_ = total > 0.0 ? clipped / total : 0.0;
  require(clip_mass_ <= kMaxClipMass, ErrorCode::kIllPosed,
          "covariance projection removed " + std::to_string(clip_mass_) +
              " of the spectral mass");
  factor_ = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
  RealMatrix realized = static_cast<double>(N) * factor_ * factor_.transpose();
  covariance_ = std::make_shared<RealizedCovariance>(
      RealizedCovariance::from_dense(N, std::move(realized), profile.d()));
}

SampleMatrix DenseSampler::sample(std::uint64_t seed, std::uint64_t trial) const {
  const int p = static_cast<int>(factor_.rows());
  RandomStream rng(seed, trial, kDenseStream);
  RealVector v(p);
  for (int t = 0; t < p; ++t) v(t) = rng.gaussian();
  const RealVector x = factor_ * v;
  SampleMatrix out{n_, RealMatrix(n_, n_), seed, trial, "dense"};
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      const double h = x(RealizedCovariance::packed_index(i, j, n_));
      out.entries(i, j) = h;
      out.entries(j, i) = h;
    }
  return out;
}

SampleMatrix sample_matrix_general(const CorrelationProfile& profile, int N,
                                   std::uint64_t seed, std::uint64_t trial) {
  return DenseSampler(profile, N).sample(seed, trial);
}

Ensemble::Ensemble(const CorrelationProfile& profile, int N) : n_(N) {
  tag_ = std::string(to_string(profile.kind()));
  if (profile.translation_invariant()) {
    auto filter = std::make_shared<Filter>(build_filter(profile, N));
    // The GOE kind is realized entirely by the point-mass filter.
    c2_ = profile.kind() == ProfileKind::kGoe ? 0.0 : profile.c2();
    covariance_ = std::make_shared<RealizedCovariance>(
        RealizedCovariance::from_filter(filter->coeffs, c2_, N, profile.d()));
    filter_ = std::move(filter);
  } else {
    auto dense = std::make_shared<DenseSampler>(profile, N);
    covariance_ = std::shared_ptr<const RealizedCovariance>(dense, &dense->covariance());
    dense_ = std::move(dense);
  }
}

Ensemble::Ensemble(Filter filter, double c2, double decay_order, std::string tag)
    : n_(filter.N), c2_(c2), tag_(std::move(tag)) {
  covariance_ = std::make_shared<RealizedCovariance>(
      RealizedCovariance::from_filter(filter.coeffs, c2, n_, decay_order));
  filter_ = std::make_shared<Filter>(std::move(filter));
}

SampleMatrix Ensemble::sample(std::uint64_t seed, std::uint64_t trial) const {
  SampleMatrix h = filter_ ? sample_matrix(*filter_, c2_, n_, seed, trial, tag_)
                           : dense_->sample(seed, trial);
  h.ensemble_tag = tag_;
  return h;
}

CovarianceAccumulator::CovarianceAccumulator(int N, std::vector<Quadruple> quadruples)
    : n_(N),
      quads_(std::move(quadruples)),
      mean_(quads_.size(), 0.0),
      m2_(quads_.size(), 0.0) {
  for (auto& q : quads_)
    for (auto& idx : q) idx = wrap_index(idx, N);
}

void CovarianceAccumulator::add(const RealMatrix& H) {
  require(H.rows() == n_ && H.cols() == n_, ErrorCode::kDimension,
          "sample dimension does not match the accumulator");
  ++count_;
  for (size_t q = 0; q < quads_.size(); ++q) {
    const auto& [i, j, k, l] = quads_[q];
    const double x = static_cast<double>(n_) * H(i, j) * H(k, l);
    const double delta = x - mean_[q];
    mean_[q] += delta / static_cast<double>(count_);
    m2_[q] += delta * (x - mean_[q]);
  }
}

std::vector<CovarianceEstimate> CovarianceAccumulator::results() const {
  require(count_ > 0, ErrorCode::kInput, "no samples accumulated");
  std::vector<CovarianceEstimate> out(quads_.size());
  for (size_t q = 0; q < quads_.size(); ++q) {
    out[q].estimate = mean_[q];
    if (count_ > 1) {
      const double var = m2_[q] / static_cast<double>(count_ - 1);
      out[q].std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(count_));
    }
  }
  return out;
}

std::vector<CovarianceEstimate> empirical_covariance(const std::vector<SampleMatrix>& samples,
                                                     const std::vector<Quadruple>& quadruples) {
  require(!samples.empty(), ErrorCode::kInput, "empty sample list");
  CovarianceAccumulator acc(samples.front().N, quadruples);
  for (const auto& s : samples) acc.add(s.entries);
  return acc.results();
}

std::vector<Quadruple> audit_quadruples(int N, std::uint64_t seed) {
  std::vector<Quadruple> quads = {
      {1, 2, 1, 2}, {1, 2, 2, 3}, {0, 0, 0, 0}, {3, 3, 4, 4}, {1, 2, 2, 1},
      {0, 1, 1, 2}, {5, 5, 5, 6}, {2, 7, 3, 7}, {4, 9, 5, 10}, {0, 3, 1, 2},
  };
  RandomStream rng(seed, 0, kAuditStream);
  while (quads.size() < 20) {
    const int i = rng.index(N), j = i + rng.index(5);
    const int k = i + rng.index(3), l = j + rng.index(3) - 1;
    quads.push_back({i, j, k, l});
  }
  for (auto& q : quads)
    for (auto& idx : q) idx = wrap_index(idx, N);
  return quads;
}

}  // namespace corrmat
