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

#include "corrmat/edgestats.hpp"

using namespace corrmat;

TEST_SUITE("edgestats") {

TEST_CASE("eigenvalues ascending") {
  RealMatrix h = RealMatrix::Zero(3, 3);
  h.diagonal() << 3.0, 1.0, 2.0;
  const auto ev = eigenvalues(h);
  CHECK(ev == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(eigenvalues(RealMatrix::Zero(8, 8)) == std::vector<double>(8, 0.0));
  const SampleMatrix g = sample_goe(64, 1, 0);
  double s = 0.0;
  for (double x : eigenvalues(g)) s += x;
  CHECK(std::abs(s - g.entries.trace()) < 1e-9 * 64);
}

TEST_CASE("spectrum excess") {
  CHECK(spectrum_excess({-1.0, 0.0, 1.0}, -2.0, 2.0) == 0.0);
  CHECK(spectrum_excess({-2.5, 0.0, 2.1}, -2.0, 2.0) == doctest::Approx(0.5));
  CHECK(spectrum_excess({0.0}, -2.0, 2.0) == 0.0);
}

TEST_CASE("gaps from a known spectrum") {
  const std::vector<double> ev{-3.0, -2.5, -2.25, 0.0, 1.0, 1.5};
  const RealVector left = gaps_from_spectrum(ev, 2, 1.0, EdgeSide::kLeft);
  const double scale = std::pow(6.0, 2.0 / 3.0);
  CHECK(left(0) == doctest::Approx(0.5 * scale));
  CHECK(left(1) == doctest::Approx(0.75 * scale));
  const RealVector right = gaps_from_spectrum(ev, 1, 1.0, EdgeSide::kRight);
  CHECK(right(0) == doctest::Approx(0.5 * scale));
  const RealVector doubled = gaps_from_spectrum(ev, 2, 2.0, EdgeSide::kLeft);
  CHECK(doubled(0) == 2.0 * left(0));
  CHECK(doubled(1) == 2.0 * left(1));
}

TEST_CASE("scaled gap is invariant under eigenvalue scaling") {
  // eigenvalues scaled by a stretch the density by a; c -> c / a^(3/2)
  std::vector<double> ev{-2.0, -1.8, -1.5}, scaled;
  for (double x : ev) scaled.push_back(4.0 * x);
  SpectralDensity d, ds;
  d.c_L = 1.0 / M_PI;
  ds.c_L = d.c_L / std::pow(4.0, 1.5);
  const double g1 = gaps_from_spectrum(ev, 1, scaling_factor(d, EdgeSide::kLeft), EdgeSide::kLeft)(0);
  const double g2 =
      gaps_from_spectrum(scaled, 1, scaling_factor(ds, EdgeSide::kLeft), EdgeSide::kLeft)(0);
  CHECK(g2 == doctest::Approx(g1).epsilon(1e-12));
}

TEST_CASE("goe gap sample") {
  const GapSample s = goe_gap_statistics(64, 2, 200, EdgeSide::kLeft, 3);
  CHECK(s.gaps.rows() == 200);
  CHECK(s.gaps.cols() == 2);
  CHECK((s.gaps.array() > 0.0).all());
  const GapSample again = goe_gap_statistics(64, 2, 200, EdgeSide::kLeft, 3);
  CHECK((s.gaps.array() == again.gaps.array()).all());
}

TEST_CASE("ks distance") {
  CHECK(ks_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_distance({1, 2, 3}, {4, 5}) == 1.0);
  CHECK(ks_distance({1, 2, 3, 4}, {3, 4, 5, 6}) == doctest::Approx(0.5));
  CHECK(ks_critical_value(2000, 2000) == doctest::Approx(1.63 * std::sqrt(2.0 / 2000.0)));
  CHECK_THROWS_AS(ks_distance({}, {1.0}), Error);
}

TEST_CASE("null calibration uses disjoint splits") {
  std::vector<double> pool;
  for (int i = 0; i < 400; ++i) pool.push_back(std::sin(1.0 + i * 0.77));
  const NullCalibration c = ks_null_calibration(pool, 100, 100, 10, 9);
  CHECK(c.audits == 10);
  CHECK(c.statistics.size() == 10);
  CHECK(c.critical == doctest::Approx(ks_critical_value(100, 100)));
  CHECK_THROWS_AS(ks_null_calibration(pool, 300, 200, 1, 1), Error);
}

TEST_CASE("edge side names") {
  CHECK(parse_edge_side("left") == EdgeSide::kLeft);
  CHECK(to_string(EdgeSide::kRight) == "right");
  CHECK_THROWS_AS(parse_edge_side("top"), Error);
}

}  // TEST_SUITE
