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
#include "corrmat/rng.hpp"

using namespace corrmat;

namespace {

RealizedCovariance goe_cov(int N) {
  return RealizedCovariance::from_filter(RealMatrix::Zero(N, N), 1.0, N);
}

ComplexMatrix random_complex(int N, std::uint64_t seed) {
  RandomStream rng(seed, 0, kAuditStream);
  ComplexMatrix m(N, N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) m(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return m;
}

// (S(M))_pq = (1/N) sum_ab clamp(xi_{p a b q}) M_ab, summed quadruple by quadruple.
ComplexMatrix naive_S(const ComplexMatrix& M, const RealizedCovariance& cov) {
  const int N = cov.N();
  ComplexMatrix out = ComplexMatrix::Zero(N, N);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q) {
      const double bound = cov.clamp_bound(torus_distance(p, q, N));
      Complex acc = 0.0;
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
          const double x = std::min(std::max(cov.xi(p, a, b, q), -bound), bound);
          acc += x * M(a, b);
        }
      out(p, q) = acc / static_cast<double>(N);
    }
  return out;
}

}  // namespace

TEST_SUITE("ops") {

TEST_CASE("decay norm") {
  const int N = 16;
  CHECK(decay_norm(RealMatrix::Identity(N, N), 2.5) == 1.0);
  RealMatrix a(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) a(i, j) = std::pow(1.0 + torus_distance(i, j, N), -2.0);
  CHECK(decay_norm(a, 2.0) == doctest::Approx(1.0));
  const ComplexMatrix r = random_complex(N, 3);
  CHECK(decay_norm(r, 0.0) == doctest::Approx(r.cwiseAbs().maxCoeff()));
}

TEST_CASE("goe S of the identity") {
  const int N = 12;
  const ComplexMatrix s = apply_S(ComplexMatrix::Identity(N, N), goe_cov(N));
  CHECK((s - (1.0 + 1.0 / N) * ComplexMatrix::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(apply_S(ComplexMatrix::Zero(N, N), goe_cov(N)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("goe S is a clamped transpose plus trace") {
  // Off the diagonal the transposed pairing xi = 1 exceeds the clamp bound
  // 2 (1 + |p - q|)^-3, so M_qp enters with weight min(1, 2 (1 + |p - q|)^-3).
  const int N = 10;
  const ComplexMatrix m = random_complex(N, 4);
  ComplexMatrix expect = (m.trace() / static_cast<double>(N)) * ComplexMatrix::Identity(N, N);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      expect(p, q) += std::min(1.0, 2.0 * std::pow(1.0 + torus_distance(p, q, N), -3.0)) *
                      m(q, p) / static_cast<double>(N);
  CHECK((apply_S(m, goe_cov(N)) - expect).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((apply_S(m, goe_cov(N)) - naive_S(m, goe_cov(N))).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("FFT contraction matches the quadruple sum") {
  const int N = 16;
  const Ensemble ens(CorrelationProfile::power_law(3.0, 1.0, 0.5), N);
  const ComplexMatrix m = random_complex(N, 5);
  const ComplexMatrix fast = apply_S(m, ens.covariance());
  const ComplexMatrix slow = naive_S(m, ens.covariance());
  CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dense covariance contraction matches the quadruple sum") {
  const int N = 8;
  const DenseSampler dense(CorrelationProfile::modulated(3.0, 1.0, 0.5, 0.3), N);
  const ComplexMatrix m = random_complex(N, 6);
  CHECK((apply_S(m, dense.covariance()) - naive_S(m, dense.covariance())).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("F map") {
  const int N = 8;
  const auto cov = goe_cov(N);
  const FMapResult f = f_map(ComplexMatrix::Zero(N, N), Complex(0, 1), cov);
  CHECK((f.value - Complex(0, 1) * ComplexMatrix::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-14);

  // dissipative input gives a dissipative output
  ComplexMatrix m = random_complex(N, 7);
  m = 0.5 * (m + m.adjoint().eval());
  m += Complex(0, 0.5) * ComplexMatrix::Identity(N, N);
  const ComplexMatrix v = f_map(m, Complex(0, 1), cov).value;
  const ComplexMatrix im = (v - v.adjoint()) / Complex(0, 2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(im);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  // fixed point check against the one-step algebra at N = 512
  const int big = 512;
  const Complex msc = semicircle_stieltjes(Complex(0, 1));
  const ComplexMatrix mi = msc * ComplexMatrix::Identity(big, big);
  const ComplexMatrix fm = f_map(mi, Complex(0, 1), goe_cov(big)).value;
  CHECK((fm - mi).cwiseAbs().maxCoeff() <= 2.0 / big);
}

TEST_CASE("resolvent identities") {
  const int N = 32;
  const SampleMatrix H = sample_goe(N, 9, 0);
  const Complex z(0.3, 0.2);
  const GreenFunction G = greens_function(H, z);
  const ComplexMatrix id = G.entries * (H.entries.cast<Complex>() -
                                        z * ComplexMatrix::Identity(N, N));
  CHECK((id - ComplexMatrix::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(G.ward_defect() < 1e-8);
  CHECK(G.entries.trace().imag() > 0.0);
  Complex tr = 0.0;
  for (int k = 0; k < N; ++k) tr += 1.0 / ((*G.spectrum)(k) - z);
  CHECK(std::abs(G.normalized_trace() - tr / static_cast<double>(N)) < 1e-10);

  const GreenFunction zero = greens_function(SampleMatrix{N, RealMatrix::Zero(N, N)}, {0, 1});
  CHECK((zero.entries - Complex(0, 1) * ComplexMatrix::Identity(N, N)).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("residual at H = 0 with goe covariance") {
  // G = iI, S(G) = i(1 + 1/N) I, so R = (1 + 1/N) I exactly
  const int N = 16;
  const GreenFunction G = greens_function(SampleMatrix{N, RealMatrix::Zero(N, N)}, {0, 1});
  const ResidualResult r = residual(G, goe_cov(N));
  CHECK(r.r_inf == doctest::Approx(1.0 + 1.0 / N).epsilon(1e-13));
  CHECK(r.r_inf <= 3.0 / N + 1.0);
}

TEST_CASE("residual of the exact goe fixed point is m^2 / N") {
  const int N = 256;
  const Complex z(0, 1);
  const Complex m = semicircle_stieltjes(z);
  const ResidualResult r =
      residual(m * ComplexMatrix::Identity(N, N), z, goe_cov(N));
  CHECK(r.r_inf == doctest::Approx(std::norm(m) / N).epsilon(1e-10));
  CHECK(r.r_inf < 0.02);
}

TEST_CASE("local law deviation at H = 0, z = 3i") {
  const Complex z(0, 3);
  const GreenFunction G = greens_function(SampleMatrix{8, RealMatrix::Zero(8, 8)}, z);
  const Complex m = semicircle_stieltjes(z);
  const double lambda = (G.entries - m * ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff();
  CHECK(lambda == doctest::Approx(1.0 / 3.0 - (std::sqrt(13.0) - 3.0) / 2.0).epsilon(1e-12));
  CHECK(lambda == doctest::Approx(0.0305577).epsilon(1e-5));
}

TEST_CASE("discretize and embed") {
  const int N = 16;
  const TorusFunction c = TorusFunction::constant(1, N, Complex(0.5, 0.25));
  CHECK((discretize(c, N) - Complex(0.5, 0.25) * ComplexMatrix::Identity(N, N))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  TorusFunction wave(1, N);
  for (int j = 0; j < N; ++j)
    wave.values(0, j) = std::polar(1.0, 2.0 * M_PI * j / N);
  const ComplexMatrix shift = discretize(wave, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      CHECK(std::abs(shift(i, j) - (wrap_index(j - i, N) == 1 ? 1.0 : 0.0)) < 1e-13);

  const TorusFunction back = embed(shift);
  for (int s = 0; s < back.K_s; ++s)
    for (int j = 0; j < N; ++j) CHECK(std::abs(back.values(s, j) - wave.values(0, j)) < 1e-13);

  ComplexMatrix a = ComplexMatrix::Zero(N, N);
  const ComplexMatrix r = random_complex(N, 8);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (std::abs(canonical_offset(j - i, N)) <= N / 4) a(i, j) = r(i, j);
  CHECK((discretize(embed(a), N) - a).cwiseAbs().maxCoeff() < 1e-12);
}

}  // TEST_SUITE
