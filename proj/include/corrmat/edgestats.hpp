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

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "corrmat/common.hpp"
#include "corrmat/dyson.hpp"
#include "corrmat/sampler.hpp"
#include "corrmat/verify.hpp"

namespace corrmat {

// Ascending.
std::vector<double> eigenvalues(const SampleMatrix& H);
std::vector<double> eigenvalues(const RealMatrix& H);

struct EdgeLocationReport {
  std::vector<int> N_list;
  int n_trials = 0;
  std::vector<double> max_excess;  // per N
  double epsilon_fit = 0.0;        // slope of log max_excess vs log N
  double fit_r2 = 0.0;
  double max_excess_last = 0.0;
  double tolerance_last = 0.0;     // N_last^-0.15
  // slope < 0 and max_excess(largest N) < N^-0.15
  bool passed() const { return epsilon_fit < 0.0 && max_excess_last < tolerance_last; }
};

// max over trials of dist(spectrum, [E_L, E_R]) counting only the excess
// outside the support.
double spectrum_excess(const std::vector<double>& ascending, double E_L, double E_R);

EdgeLocationReport edge_location_check(const CorrelationProfile& profile,
                                       const std::vector<int>& N_list, int n_trials,
                                       std::uint64_t seed, const SpectralDensity& dens);

enum class EdgeSide { kLeft, kRight };

std::string_view to_string(EdgeSide side);
EdgeSide parse_edge_side(std::string_view name);

// (pi c_side)^(2/3), which is 1 for the semicircle.
double scaling_factor(const SpectralDensity& dens, EdgeSide side);

struct GapSample {
  int N = 0;
  int k = 0;
  RealMatrix gaps;  // n_trials x k
  double gamma_scale = 1.0;
  EdgeSide edge_side = EdgeSide::kLeft;
  std::string ensemble_tag;

  std::vector<double> column(int j) const;
};

// gamma N^(2/3) (lambda_{1+j} - lambda_1), j = 1..k; the right edge uses
// lambda_N - lambda_{N-j}.
RealVector gaps_from_spectrum(const std::vector<double>& ascending, int k, double gamma_scale,
                              EdgeSide side);

using MatrixDraw = std::function<SampleMatrix(std::uint64_t trial)>;

GapSample gap_statistics(const MatrixDraw& draw, int N, int k, int n_trials, double gamma_scale,
                         EdgeSide side, std::string tag);
GapSample gap_statistics(const Ensemble& ensemble, int k, int n_trials, double gamma_scale,
                         EdgeSide side, std::uint64_t seed);
GapSample goe_gap_statistics(int N, int k, int n_trials, EdgeSide side, std::uint64_t seed);

// sup_x |F_a(x) - F_b(x)|
double ks_distance(std::vector<double> a, std::vector<double> b);

// c_alpha sqrt((n + m) / (n m)); c_alpha = 1.63 is the 1% level.
double ks_critical_value(size_t n, size_t m, double c_alpha = 1.63);

struct NullCalibration {
  int audits = 0;
  int passes = 0;
  double critical = 0.0;
  std::vector<double> statistics;
  double pass_fraction() const { return audits > 0 ? static_cast<double>(passes) / audits : 0.0; }
};

// Draws `audits` disjoint (n, m) splits of the pool at random and compares
// the two halves.
NullCalibration ks_null_calibration(const std::vector<double>& pool, size_t n, size_t m,
                                    int audits, std::uint64_t seed, double c_alpha = 1.63);

}  // namespace corrmat
