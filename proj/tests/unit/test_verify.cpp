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

#include "corrmat/ops.hpp"
#include "corrmat/pipeline.hpp"
#include "corrmat/verify.hpp"

using namespace corrmat;

TEST_SUITE("verify") {

TEST_CASE("power fit recovers an exact power law") {
  std::vector<double> x{64, 128, 256, 512}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.5));
  const PowerFit f = fit_power_law(x, y);
  CHECK(f.exponent == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.r2 == doctest::Approx(1.0));
}

TEST_CASE("jaffard sentinel for the identity") {
  const DecayReport r = jaffard_inverse_decay(RealMatrix::Identity(64, 64), 3.0);
  CHECK(std::isinf(r.fitted_exponent));
}

TEST_CASE("jaffard with a geometric inverse") {
  const int N = 128;
  RealMatrix a = RealMatrix::Identity(N, N);
  for (int i = 0; i < N; ++i) {
    a(i, (i + 1) % N) = 0.2;
    a((i + 1) % N, i) = 0.2;
  }
  const DecayReport r = jaffard_inverse_decay(a, 3.0);
  CHECK(r.fitted_exponent > 2.3);
}

TEST_CASE("jaffard precondition") {
  RealMatrix a = RealMatrix::Identity(16, 16) * 3.0;
  CHECK_THROWS_AS(jaffard_inverse_decay(a, 3.0), Error);
}

TEST_CASE("random decay matrix has the requested norm") {
  const RealMatrix b = random_decay_matrix(32, 3.0, 0.5, 1, 0);
  CHECK(operator_norm(b) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK((b.array() == random_decay_matrix(32, 3.0, 0.5, 1, 0).array()).all());
}

TEST_CASE("product decay inequality holds") {
  const ProductDecayReport r = product_decay_check(32, 2.5, 10, 3);
  CHECK(r.violations == 0);
  CHECK(r.constant == doctest::Approx(std::pow(2.0, 3.5) * 3.5 / 1.5));
}

TEST_CASE("goe discretization checks") {
  const int N = 64;
  const Complex z(0, 1);
  const Complex m = semicircle_stieltjes(z);
  const auto cov = RealizedCovariance::from_filter(RealMatrix::Zero(N, N), 1.0, N);
  const DiscretizationReport r = discretization_checks(TorusFunction::constant(1, N, m, z), cov);
  CHECK(r.sv_distance < 1e-12);
  CHECK(r.residual_inf == doctest::Approx(std::norm(m) / N).epsilon(1e-8));
}

TEST_CASE("goe deterministic equivalent") {
  const Complex z(0.4, 0.3);
  const ComplexMatrix d = deterministic_equivalent(CorrelationProfile::goe(), 32, z);
  const ComplexMatrix ref = semicircle_stieltjes(z) * ComplexMatrix::Identity(32, 32);
  CHECK((d - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("goe local law at z = i") {
  SpectralDensity dens;
  dens.E_L = -2.0;
  dens.E_R = 2.0;
  dens.energies = {-2.0, 0.0, 2.0};
  dens.rho = {0.0, 0.3183, 0.0};
  LocalLawOptions o;
  o.domain.enforce = false;
  const LocalLawResult r =
      local_law_check(CorrelationProfile::goe(), 128, {Complex(0, 1)}, 5, 1, dens, o);
  CHECK(r.reports.size() == 5);
  CHECK(r.max_ratio <= 1.0);
  CHECK(r.median_lambda > 0.0);
}

TEST_CASE("domain enforcement names the inequality") {
  SpectralDensity dens;
  dens.E_L = -2.0;
  dens.E_R = 2.0;
  dens.energies = {-2.0, 0.0, 2.0};
  dens.rho = {0.0, 0.3183, 0.0};
  LocalLawOptions o;
  o.domain.enforce = true;
  try {
    local_law_check(CorrelationProfile::goe(), 64, {Complex(0, 0.01)}, 1, 1, dens, o);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDomain);
    CHECK(std::string(e.what()).find(">=") != std::string::npos);
  }
}

TEST_CASE("residual bound holds for goe") {
  const ResidualReport r = residual_check(CorrelationProfile::goe(), 64, Complex(0, 1), 10, 2);
  CHECK(r.bound == doctest::Approx(8.0 * std::log(64.0) / 8.0));
  CHECK(r.passed());
  CHECK(r.r_values.size() == 10);
}

TEST_CASE("iterate consistency") {
  const auto rep =
      iterate_consistency(CorrelationProfile::power_law(3.0, 1.0, 0.5), Complex(0, 1), 32, 3,
                          1e-3, 4);
  CHECK(rep.eps.size() == rep.f_errors.size());
  CHECK(std::isfinite(rep.fitted_constant));
}

TEST_CASE("goe solution decay sentinel") {
  const SolutionDecayReport r =
      solution_decay_check(CorrelationProfile::goe(), Complex(0, 1), 64, 1);
  CHECK(std::isinf(r.overall.fitted_exponent));
}

}  // TEST_SUITE
