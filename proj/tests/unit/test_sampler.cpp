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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "corrmat/fft.hpp"
#include "corrmat/sampler.hpp"

using namespace corrmat;

namespace {

double mean_square(const std::vector<double>& v, double* se) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= v.size();
  double var = 0.0;
  for (double x : v) var += (x - m) * (x - m);
  var /= (v.size() - 1);
  *se = std::sqrt(var / v.size());
  return m;
}

}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("samples are symmetric and reproducible") {
  const auto p = CorrelationProfile::power_law(3.0, 1.0, 0.5);
  const Ensemble ens(p, 32);
  const SampleMatrix a = ens.sample(11, 3), b = ens.sample(11, 3), c = ens.sample(11, 4);
  CHECK((a.entries.array() == a.entries.transpose().array()).all());
  CHECK((a.entries.array() == b.entries.array()).all());
  CHECK_FALSE((a.entries.array() == c.entries.array()).all());
}

TEST_CASE("goe filter is a point mass") {
  const Filter f = build_filter(CorrelationProfile::goe(), 16);
  CHECK_FALSE(f.psd_clipped);
  CHECK(f.coeffs(0, 0) == doctest::Approx(std::sqrt(1.0 / 16)));
  CHECK(f.coeffs.cwiseAbs().sum() == doctest::Approx(std::sqrt(1.0 / 16)));
}

TEST_CASE("power law filter spectrum") {
  const int N = 64;
  const Filter f = build_filter(CorrelationProfile::power_law(3.0, 1.0, 0.5), N);
  CHECK(f.clip_mass < 0.05);
  // autocorrelation spectrum |F|^2 is nonnegative by construction
  std::vector<Complex> spec(N * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) spec[a * N + b] = f.coeffs(a, b);
  fft2d(spec, N, N);
  for (const auto& v : spec) CHECK(std::norm(v) >= -1e-12);
}

TEST_CASE("goe second moments") {
  const int N = 16, T = 20000;
  std::vector<double> off, diag;
  for (int t = 0; t < T; ++t) {
    const SampleMatrix H = sample_goe(N, 5, t);
    off.push_back(H.entries(0, 1) * H.entries(0, 1));
    diag.push_back(H.entries(0, 0) * H.entries(0, 0));
  }
  double se_off = 0.0, se_diag = 0.0;
  const double m_off = mean_square(off, &se_off);
  const double m_diag = mean_square(diag, &se_diag);
  CHECK(std::abs(m_off - 1.0 / N) <= 5.0 * se_off);
  CHECK(std::abs(m_diag - 2.0 / N) <= 5.0 * se_diag);
}

TEST_CASE("accumulator with constant input") {
  RealMatrix H = RealMatrix::Constant(4, 4, 0.5);
  CovarianceAccumulator acc(4, {{0, 1, 2, 3}});
  for (int t = 0; t < 10; ++t) acc.add(H);
  const auto r = acc.results();
  CHECK(r[0].estimate == doctest::Approx(4 * 0.25));
  CHECK(r[0].std_error == 0.0);
}

TEST_CASE("empirical covariance matches the realized covariance") {
  const int N = 16, T = 20000;
  const Ensemble ens(CorrelationProfile::power_law(3.0, 1.0, 0.5), N);
  const auto quads = audit_quadruples(N);
  CovarianceAccumulator acc(N, quads);
  for (int t = 0; t < T; ++t) acc.add(ens.sample(1, t).entries);
  const auto r = acc.results();
  int within = 0;
  for (size_t q = 0; q < quads.size(); ++q) {
    const auto& [i, j, k, l] = quads[q];
    within += std::abs(r[q].estimate - ens.covariance().xi(i, j, k, l)) <= 5.0 * r[q].std_error;
  }
  CHECK(within >= 19);
}

TEST_CASE("dense path agrees with the nominal modulated covariance") {
  const int N = 8;
  const auto p = CorrelationProfile::modulated(3.0, 1.0, 0.5, 0.3);
  const DenseSampler dense(p, N);
  CHECK(dense.clip_mass() < DenseSampler::kMaxClipMass);
  const SampleMatrix H = dense.sample(3, 0);
  CHECK((H.entries.array() == H.entries.transpose().array()).all());
  if (dense.clip_mass() == 0.0) {
    CHECK(dense.covariance().xi(1, 2, 1, 2) == doctest::Approx(eval_xi(p, 1, 2, 1, 2, N)));
  }
}

TEST_CASE("audit quadruples are fixed and in range") {
  const auto a = audit_quadruples(32), b = audit_quadruples(32);
  REQUIRE(a.size() == 20);
  CHECK(a == b);
  for (const auto& q : a)
    for (int x : q) CHECK((x >= 0 && x < 32));
}

}  // TEST_SUITE
