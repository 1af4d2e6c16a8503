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

#include "corrmat/edgestats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "corrmat/rng.hpp"
#include "internal.hpp"

namespace corrmat {

std::vector<double> eigenvalues(const RealMatrix& H) {
  require(H.rows() == H.cols() && H.rows() > 0, ErrorCode::kDimension,
          "eigenvalues need a nonempty square matrix");
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(H, Eigen::EigenvaluesOnly);
  require(eig.info() == Eigen::Success, ErrorCode::kNumeric, "eigensolver failed");
  const RealVector& v = eig.eigenvalues();
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<double> eigenvalues(const SampleMatrix& H) { return eigenvalues(H.entries); }

double spectrum_excess(const std::vector<double>& ascending, double E_L, double E_R) {
  if (ascending.empty()) return 0.0;
  return std::max({E_L - ascending.front(), ascending.back() - E_R, 0.0});
}

EdgeLocationReport edge_location_check(const CorrelationProfile& profile,
                                       const std::vector<int>& N_list, int n_trials,
                                       std::uint64_t seed, const SpectralDensity& dens) {
  require(!N_list.empty() && n_trials >= 1, ErrorCode::kParameter,
          "edge check needs N values and trials");
  EdgeLocationReport rep;
  rep.N_list = N_list;
  rep.n_trials = n_trials;
  for (int N : N_list) {
    const Ensemble ensemble(profile, N);
    std::vector<double> excess(n_trials);
    internal::parallel_for(n_trials, [&](int t) {
      excess[t] = spectrum_excess(eigenvalues(ensemble.sample(seed, static_cast<std::uint64_t>(t))),
                                  dens.E_L, dens.E_R);
    });
    rep.max_excess.push_back(*std::max_element(excess.begin(), excess.end()));
  }
  rep.max_excess_last = rep.max_excess.back();
  rep.tolerance_last = std::pow(static_cast<double>(N_list.back()), -0.15);
  if (N_list.size() >= 2) {
    std::vector<double> xs(N_list.begin(), N_list.end()), ys;
    for (double e : rep.max_excess) ys.push_back(std::max(e, 1e-300));
    const PowerFit fit = fit_power_law(xs, ys);
    rep.epsilon_fit = fit.exponent;
    rep.fit_r2 = fit.r2;
  }
  return rep;
}

std::string_view to_string(EdgeSide side) { return side == EdgeSide::kLeft ? "left" : "right"; }

EdgeSide parse_edge_side(std::string_view name) {
  if (name == "left") return EdgeSide::kLeft;
  if (name == "right") return EdgeSide::kRight;
  fail(ErrorCode::kParameter, "edge side must be left or right, got '" + std::string(name) + "'");
}

double scaling_factor(const SpectralDensity& dens, EdgeSide side) {
  const double c = side == EdgeSide::kLeft ? dens.c_L : dens.c_R;
  require(c > 0.0 && std::isfinite(c), ErrorCode::kNumeric,
          "square-root coefficient must be positive");
  return std::pow(std::numbers::pi * c, 2.0 / 3.0);
}

std::vector<double> GapSample::column(int j) const {
  require(j >= 0 && j < k, ErrorCode::kParameter, "gap column out of range");
  std::vector<double> out(static_cast<size_t>(gaps.rows()));
  for (Eigen::Index t = 0; t < gaps.rows(); ++t) out[t] = gaps(t, j);
  return out;
}

RealVector gaps_from_spectrum(const std::vector<double>& ascending, int k, double gamma_scale,
                              EdgeSide side) {
  require(k >= 1 && k <= 6, ErrorCode::kParameter, "k must lie in [1, 6]");
  const int n = static_cast<int>(ascending.size());
  require(n > k, ErrorCode::kDimension, "spectrum is too short for k gaps");
  const double scale = gamma_scale * std::pow(static_cast<double>(n), 2.0 / 3.0);
  RealVector out(k);
  for (int j = 1; j <= k; ++j) {
    const double gap = side == EdgeSide::kLeft ? ascending[j] - ascending[0]
                                               : ascending[n - 1] - ascending[n - 1 - j];
    out(j - 1) = scale * gap;
  }
  return out;
}

GapSample gap_statistics(const MatrixDraw& draw, int N, int k, int n_trials, double gamma_scale,
                         EdgeSide side, std::string tag) {
  require(n_trials >= 1, ErrorCode::kParameter, "n_trials must be >= 1");
  require(k >= 1 && k <= 6, ErrorCode::kParameter, "k must lie in [1, 6]");
  GapSample s;
  s.N = N;
  s.k = k;
  s.gamma_scale = gamma_scale;
  s.edge_side = side;
  s.ensemble_tag = std::move(tag);
  s.gaps.resize(n_trials, k);
  internal::parallel_for(n_trials, [&](int t) {
    const SampleMatrix H = draw(static_cast<std::uint64_t>(t));
    require(H.N == N, ErrorCode::kDimension, "sampled matrix has the wrong dimension");
    s.gaps.row(t) = gaps_from_spectrum(eigenvalues(H), k, gamma_scale, side).transpose();
  });
  return s;
}

GapSample gap_statistics(const Ensemble& ensemble, int k, int n_trials, double gamma_scale,
                         EdgeSide side, std::uint64_t seed) {
  return gap_statistics([&](std::uint64_t t) { return ensemble.sample(seed, t); }, ensemble.N(),
                        k, n_trials, gamma_scale, side, ensemble.tag());
}

GapSample goe_gap_statistics(int N, int k, int n_trials, EdgeSide side, std::uint64_t seed) {
  return gap_statistics([&](std::uint64_t t) { return sample_goe(N, seed, t); }, N, k, n_trials,
                        1.0, side, "goe");
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorCode::kInput, "KS distance needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_critical_value(size_t n, size_t m, double c_alpha) {
  require(n > 0 && m > 0, ErrorCode::kParameter, "sample sizes must be positive");
  return c_alpha * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

NullCalibration ks_null_calibration(const std::vector<double>& pool, size_t n, size_t m,
                                    int audits, std::uint64_t seed, double c_alpha) {
  require(n + m <= pool.size(), ErrorCode::kSize, "pool is smaller than n + m");
  require(audits >= 1, ErrorCode::kParameter, "need at least one audit");
  NullCalibration cal;
  cal.audits = audits;
  cal.critical = ks_critical_value(n, m, c_alpha);
  std::vector<size_t> order(pool.size());
  for (int r = 0; r < audits; ++r) {
    std::iota(order.begin(), order.end(), size_t{0});
    RandomStream rng(seed, static_cast<std::uint64_t>(r), kAuditStream);
    std::shuffle(order.begin(), order.end(), rng.engine());
    std::vector<double> a(n), b(m);
    for (size_t t = 0; t < n; ++t) a[t] = pool[order[t]];
    for (size_t t = 0; t < m; ++t) b[t] = pool[order[n + t]];
    const double stat = ks_distance(std::move(a), std::move(b));
    cal.statistics.push_back(stat);
    if (stat <= cal.critical) ++cal.passes;
  }
  return cal;
}

}  // namespace corrmat
