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

#include "corrmat/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "corrmat/fft.hpp"
#include "corrmat/rng.hpp"

namespace corrmat {

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kGoe: return "goe";
    case ProfileKind::kPowerLawTI: return "powerlaw_ti";
    case ProfileKind::kPowerLawModulated: return "powerlaw_modulated";
  }
  return "unknown";
}

ProfileKind parse_profile_kind(std::string_view name) {
  if (name == "goe" || name == "GOE") return ProfileKind::kGoe;
  if (name == "powerlaw_ti" || name == "PowerLawTI") return ProfileKind::kPowerLawTI;
  if (name == "powerlaw_modulated" || name == "PowerLawModulated")
    return ProfileKind::kPowerLawModulated;
  fail(ErrorCode::kParameter, "unknown profile kind '" + std::string(name) + "'");
}

CorrelationProfile CorrelationProfile::create(ProfileKind kind, double d, double c1, double c2,
                                              double eps_mod, double alpha) {
  require(std::isfinite(d) && d > 2.0, ErrorCode::kParameter, "decay exponent d must be > 2");
  require(std::isfinite(c1) && c1 > 0.0, ErrorCode::kParameter, "c1 must be > 0");
  require(std::isfinite(c2) && c2 >= 0.0, ErrorCode::kParameter, "c2 must be >= 0");
  if (kind != ProfileKind::kGoe) {
    require(c2 > 0.0, ErrorCode::kParameter,
            "power-law profiles need a nondegenerate GOE component (c2 > 0)");
  }
  require(std::isfinite(eps_mod) && eps_mod >= 0.0 && eps_mod < 1.0, ErrorCode::kParameter,
          "eps_mod must lie in [0, 1)");
  if (kind != ProfileKind::kPowerLawModulated) {
    require(eps_mod == 0.0, ErrorCode::kParameter,
            "eps_mod is only meaningful for the modulated profile");
  }
  if (std::isnan(alpha)) alpha = 0.5 * (2.0 + d);
  require(alpha > 2.0 && alpha < d, ErrorCode::kParameter, "alpha must lie in (2, d)");

  CorrelationProfile p;
  p.kind_ = kind;
  p.d_ = d;
  p.c1_ = c1;
  p.c2_ = c2;
  p.eps_mod_ = eps_mod;
  p.alpha_ = alpha;
  return p;
}

CorrelationProfile CorrelationProfile::goe(double d) {
  return create(ProfileKind::kGoe, d, 1.0, 0.0);
}

CorrelationProfile CorrelationProfile::power_law(double d, double c1, double c2) {
  return create(ProfileKind::kPowerLawTI, d, c1, c2);
}

CorrelationProfile CorrelationProfile::modulated(double d, double c1, double c2, double eps_mod) {
  return create(ProfileKind::kPowerLawModulated, d, c1, c2, eps_mod);
}

double CorrelationProfile::modulation(double s, double t) const {
  if (kind_ != ProfileKind::kPowerLawModulated) return 1.0;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  return 1.0 + eps_mod_ * std::sin(kTwoPi * s) * std::sin(kTwoPi * t);
}

double CorrelationProfile::kernel(int dist_a, int dist_b) const {
  return std::pow(1.0 + dist_a + dist_b, -d_);
}

double CorrelationProfile::lipschitz_constant() const {
  if (kind_ != ProfileKind::kPowerLawModulated) return 0.0;
  return 2.0 * std::numbers::pi * c1_ * c1_ * eps_mod_;
}

std::string CorrelationProfile::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(d=" << d_ << ", c1=" << c1_ << ", c2=" << c2_
     << ", eps_mod=" << eps_mod_ << ", alpha=" << alpha_ << ")";
  return os.str();
}

double eval_xi(const CorrelationProfile& profile, long long i, long long j, long long k,
               long long l, int N) {
  require(N >= 2, ErrorCode::kParameter, "N must be >= 2");
  const int a = wrap_index(i, N), b = wrap_index(j, N);
  const int c = wrap_index(k, N), e = wrap_index(l, N);
  const double goe = (a == c && b == e ? 1.0 : 0.0) + (a == e && b == c ? 1.0 : 0.0);
  if (profile.kind() == ProfileKind::kGoe) return goe;

  const double c1sq = profile.c1() * profile.c1();
  const double pairing = profile.kernel(torus_distance(a, c, N), torus_distance(b, e, N)) +
                         profile.kernel(torus_distance(a, e, N), torus_distance(b, c, N));
  double weight = 1.0;
  if (profile.kind() == ProfileKind::kPowerLawModulated) {
    const double w1 = profile.modulation(static_cast<double>(a) / N, static_cast<double>(b) / N);
    const double w2 = profile.modulation(static_cast<double>(c) / N, static_cast<double>(e) / N);
    weight = std::sqrt(w1 * w2);
  }
  return c1sq * weight * pairing + profile.c2() * profile.c2() * goe;
}

double decay_envelope(long long i, long long j, long long k, long long l, int N, double d) {
  const int s1 = torus_distance(i, k, N) + torus_distance(j, l, N);
  const int s2 = torus_distance(i, l, N) + torus_distance(j, k, N);
  return std::pow(1.0 + std::min(s1, s2), -d);
}

double clamp_xi(double xi_val, int dist_ij, double c1, double d) {
  const double bound = c1 * c1 * std::pow(1.0 + dist_ij, -d);
  return std::min(std::max(xi_val, -bound), bound);
}

DecayCheckReport verify_decay(const CorrelationProfile& profile, int N, int n_samples,
                              std::uint64_t seed) {
  require(N >= 8, ErrorCode::kParameter, "verify_decay needs N >= 8");
  DecayCheckReport report;
  auto visit = [&](int i, int j, int k, int l) {
    const double ratio =
        std::abs(eval_xi(profile, i, j, k, l, N)) / decay_envelope(i, j, k, l, N, profile.d());
    ++report.quadruples_checked;
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.argmax = {i, j, k, l};
    }
  };
  const int rows[] = {0, 1, N / 2};
  for (int i : rows) {
    for (int j : rows) {
      visit(i, j, i, j);
      visit(i, j, j, i);
    }
  }
  RandomStream rng(seed, 0, kAuditStream);
  for (int s = 0; s < n_samples; ++s) {
    visit(rng.index(N), rng.index(N), rng.index(N), rng.index(N));
  }
  report.passed = std::isfinite(report.max_ratio);
  return report;
}

RealizedCovariance RealizedCovariance::from_filter(const RealMatrix& coeffs, double c2, int N,
                                                   double decay_order) {
  require(N >= 2, ErrorCode::kParameter, "N must be >= 2");
  require(coeffs.rows() == N && coeffs.cols() == N, ErrorCode::kDimension,
          "filter must be N x N");
  require(c2 >= 0.0, ErrorCode::kParameter, "c2 must be >= 0");
  require(decay_order > 0.0, ErrorCode::kParameter, "decay order must be positive");

  const size_t n2 = static_cast<size_t>(N) * N;
  std::vector<Complex> spec(n2);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) spec[static_cast<size_t>(a) * N + b] = coeffs(a, b);
  fft2d(spec, N, N);
  for (auto& v : spec) v = std::norm(v);
  fft2d(spec, N, N, /*inverse=*/true);

  // N * C(x, y) with C(x, y) = sum_{a,b} f(a,b) f(a+x, b+y)
  RealMatrix nc(N, N);
  const double scale = static_cast<double>(N) / static_cast<double>(n2);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) nc(a, b) = spec[static_cast<size_t>(a) * N + b].real() * scale;

  RealizedCovariance cov;
  cov.n_ = N;
  cov.c2_ = c2;
  cov.decay_order_ = decay_order;
  cov.stationary_ = true;
  cov.pair_kernel_ = 0.5 * (nc + nc.transpose());
  cov.compute_decay_constant();
  return cov;
}

RealizedCovariance RealizedCovariance::from_dense(int N, RealMatrix entry_cov,
                                                  double decay_order) {
  const int p = N * (N + 1) / 2;
  require(entry_cov.rows() == p && entry_cov.cols() == p, ErrorCode::kDimension,
          "dense covariance must be N(N+1)/2 square");
  RealizedCovariance cov;
  cov.n_ = N;
  cov.decay_order_ = decay_order;
  cov.stationary_ = false;
  cov.dense_ = std::move(entry_cov);
  cov.compute_decay_constant();
  return cov;
}

int RealizedCovariance::packed_index(int i, int j, int N) {
  if (i > j) std::swap(i, j);
  return i * N - i * (i - 1) / 2 + (j - i);
}

double RealizedCovariance::xi(long long i, long long j, long long k, long long l) const {
  const int a = wrap_index(i, n_), b = wrap_index(j, n_);
  const int c = wrap_index(k, n_), e = wrap_index(l, n_);
  if (!stationary_) return dense_(packed_index(a, b, n_), packed_index(c, e, n_));
  const double goe = (a == c && b == e ? 1.0 : 0.0) + (a == e && b == c ? 1.0 : 0.0);
  return pair_kernel_(wrap_index(c - a, n_), wrap_index(e - b, n_)) +
         pair_kernel_(wrap_index(e - a, n_), wrap_index(c - b, n_)) + c2_ * c2_ * goe;
}

double RealizedCovariance::clamp_bound(int dist) const {
  return decay_constant_ * std::pow(1.0 + dist, -decay_order_);
}

void RealizedCovariance::compute_decay_constant() {
  const int N = n_;
  std::vector<double> envelope(2 * N + 1);
  for (int s = 0; s <= 2 * N; ++s) envelope[s] = std::pow(1.0 + s, -decay_order_);
  if (stationary_) {
    // |xi| <= r (e1 + e2) + c2^2 (e1 + e2) <= 2 (r + c2^2) max(e1, e2)
    double r = 0.0;
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        const int s = torus_distance(a, 0, N) + torus_distance(b, 0, N);
        r = std::max(r, std::abs(pair_kernel_(a, b)) / envelope[s]);
      }
    decay_constant_ = 2.0 * (r + c2_ * c2_);
    return;
  }
  double best = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = k; l < N; ++l) {
          const int s1 = torus_distance(i, k, N) + torus_distance(j, l, N);
          const int s2 = torus_distance(i, l, N) + torus_distance(j, k, N);
          const double v = dense_(packed_index(i, j, N), packed_index(k, l, N));
          best = std::max(best, std::abs(v) / envelope[std::min(s1, s2)]);
        }
  decay_constant_ = best;
}

RealizedCovariance realized_covariance(const RealMatrix& filter, double c2, int N,
                                       double decay_order) {
  return RealizedCovariance::from_filter(filter, c2, N, decay_order);
}

}  // namespace corrmat
