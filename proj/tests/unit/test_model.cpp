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

#include "corrmat/model.hpp"
#include "corrmat/rng.hpp"
#include "corrmat/sampler.hpp"

using namespace corrmat;

TEST_SUITE("model") {

TEST_CASE("goe covariance deltas") {
  const auto p = CorrelationProfile::goe();
  CHECK(eval_xi(p, 1, 2, 1, 2, 8) == 1.0);
  CHECK(eval_xi(p, 1, 2, 3, 4, 8) == 0.0);
  CHECK(eval_xi(p, 1, 2, 2, 1, 8) == 1.0);
  CHECK(eval_xi(p, 3, 3, 3, 3, 8) == 2.0);
}

TEST_CASE("power law kernel at unit offset") {
  const auto p = CorrelationProfile::create(ProfileKind::kPowerLawTI, 3.0, 1.0, 0.5);
  // both pairings sit at offset distance 1; the GOE part vanishes
  CHECK(eval_xi(p, 0, 0, 1, 0, 16) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("xi symmetries on random quadruples") {
  const auto p = CorrelationProfile::modulated(3.0, 1.0, 0.5, 0.3);
  RandomStream rng(7, 0, kAuditStream);
  const int N = 16;
  for (int s = 0; s < 500; ++s) {
    const int i = rng.index(N), j = rng.index(N), k = rng.index(N), l = rng.index(N);
    const double x = eval_xi(p, i, j, k, l, N);
    CHECK(eval_xi(p, j, i, k, l, N) == doctest::Approx(x).epsilon(1e-14));
    CHECK(eval_xi(p, i, j, l, k, N) == doctest::Approx(x).epsilon(1e-14));
    CHECK(eval_xi(p, k, l, i, j, N) == doctest::Approx(x).epsilon(1e-14));
  }
}

TEST_CASE("clamp") {
  CHECK(clamp_xi(5.0, 0, 1.0, 3.0) == 1.0);
  CHECK(clamp_xi(0.001, 1, 1.0, 3.0) == 0.001);
  CHECK(clamp_xi(-1.0, 2, 1.0, 3.0) == doctest::Approx(-1.0 / 27.0));
}

TEST_CASE("decay constant of the goe profile") {
  // xi_iiii = 2 against an envelope of 1 at coincident indices
  const DecayCheckReport rep = verify_decay(CorrelationProfile::goe(), 16, 200);
  CHECK(rep.passed);
  CHECK(rep.max_ratio == doctest::Approx(2.0));
}

TEST_CASE("power law decay constant is finite and below 2^d 2") {
  const auto p = CorrelationProfile::create(ProfileKind::kPowerLawTI, 3.0, 1.0, 0.5);
  const DecayCheckReport rep = verify_decay(p, 8, 2000);
  CHECK(rep.passed);
  CHECK(rep.max_ratio <= 16.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(CorrelationProfile::create(ProfileKind::kGoe, 1.5, 1.0, 0.0), Error);
  CHECK_THROWS_AS(CorrelationProfile::power_law(3.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(CorrelationProfile::power_law(3.0, -1.0, 0.5), Error);
  CHECK_THROWS_AS(CorrelationProfile::modulated(3.0, 1.0, 0.5, 1.2), Error);
  CHECK_THROWS_AS(CorrelationProfile::create(ProfileKind::kPowerLawTI, 3.0, 1.0, 0.5, 0.0, 3.5),
                  Error);
  CHECK(CorrelationProfile::power_law(3.0, 1.0, 0.5).alpha() == 2.5);
  CHECK(parse_profile_kind("PowerLawTI") == ProfileKind::kPowerLawTI);
  CHECK_THROWS_AS(parse_profile_kind("wishart"), Error);
}

TEST_CASE("realized covariance of a point-mass filter is goe") {
  const int N = 8;
  RealMatrix f = RealMatrix::Zero(N, N);
  f(0, 0) = std::sqrt(1.0 / N);
  const auto cov = RealizedCovariance::from_filter(f, 0.0, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      CHECK(cov.xi(i, j, i, j) == doctest::Approx(1.0 + (i == j ? 1.0 : 0.0)).epsilon(1e-12));
  const auto pure = RealizedCovariance::from_filter(RealMatrix::Zero(N, N), 1.0, N);
  CHECK(pure.xi(1, 2, 1, 2) == 1.0);
  CHECK(pure.xi(1, 2, 2, 1) == 1.0);
  CHECK(pure.xi(1, 2, 3, 4) == 0.0);
}

}  // TEST_SUITE
