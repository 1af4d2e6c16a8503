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
#include <limits>
#include <vector>

#include "corrmat/common.hpp"
#include "corrmat/dyson.hpp"
#include "corrmat/model.hpp"
#include "corrmat/ops.hpp"
#include "corrmat/sampler.hpp"

namespace corrmat {

// Im z >= N^-1 (log N)^log_power omega^-4. With enforce = false points
// outside are evaluated and flagged instead of rejected.
struct DomainPolicy {
  double log_power = 10.0;
  bool enforce = true;
};

double domain_lower_bound(int N, double omega, const DomainPolicy& policy = {});

// (log N)^4 sqrt(gamma_im / (N eta)) / omega
double local_law_bound(int N, double eta, double gamma_im, double omega);

struct LocalLawReport {
  Complex z;
  int N = 0;
  int trial = 0;
  double Lambda = 0.0;
  double gamma_im = 0.0;
  double Gamma = 0.0;
  double kappa = 0.0;
  double rho_z = 0.0;
  double omega = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool in_domain = true;
};

struct LocalLawOptions {
  int K_u = 0;  // 0 selects N
  DysonOptions dyson;
  DomainPolicy domain;
};

struct LocalLawResult {
  std::vector<LocalLawReport> reports;  // sorted by (trial, z index)
  double max_ratio = 0.0;
  double median_lambda = 0.0;
  double max_lambda = 0.0;
};

// Samples n_trials matrices and compares G(z) with D(g) for every z.
LocalLawResult local_law_check(const CorrelationProfile& profile, int N,
                               const std::vector<Complex>& z_grid, int n_trials,
                               std::uint64_t seed, const SpectralDensity& dens,
                               const LocalLawOptions& opts = {});

// D(g) at z for the profile at dimension N (K_u = N unless given).
ComplexMatrix deterministic_equivalent(const CorrelationProfile& profile, int N, Complex z,
                                       const DysonOptions& opts = {}, int K_u = 0);

struct AveragedLawReport {
  Complex z;
  int N = 0;
  int n_trials = 0;
  double error = 0.0;  // |mean G - D(g)|_inf
  double bound = 0.0;
  double ratio = 0.0;
  double kappa = 0.0;
  double omega = 0.0;
  double median_single_lambda = 0.0;
  bool in_domain = true;
};

// (log N)^16 (1 / (N kappa omega^3) + 1 / ((N eta)^2 omega^5))
double averaged_law_bound(int N, double eta, double kappa, double omega);

// Domain for the averaged law: kappa >= N^-a.
struct AveragedDomain {
  double a = 0.2;
  bool enforce = true;
};

AveragedLawReport averaged_law_check(const CorrelationProfile& profile, int N, Complex z,
                                     int n_trials, std::uint64_t seed,
                                     const SpectralDensity& dens, const AveragedDomain& domain = {},
                                     const DysonOptions& opts = {});

struct ResidualReport {
  int N = 0;
  Complex z;
  int n_trials = 0;
  double bound = 0.0;  // 8 log N / sqrt(N eta^6)
  double max_r = 0.0;
  double median_r = 0.0;
  int failures = 0;
  std::vector<double> r_values;  // per trial
  bool passed() const { return failures == 0; }
};

double residual_bound(int N, double eta);

ResidualReport residual_check(const CorrelationProfile& profile, int N, Complex z, int n_trials,
                              std::uint64_t seed);

struct DiscretizationReport {
  int N = 0;
  double sv_distance = 0.0;   // max distance of singular values of D(g) to {|g|}
  double sv_tolerance = 0.0;  // N^-1/3 / log N
  double residual_constant = 0.0;  // max |R_ij| / (N^-1 ^ |i-j|^-2)
  double residual_inf = 0.0;
  double f_error = 0.0;   // |F(D(g)) - D(g)|_op
  double ff_error = 0.0;  // |F(F(D(g))) - D(g)|_op
  bool sv_passed() const { return sv_distance <= sv_tolerance; }
};

// g must be solved at its own z on a grid with K_u >= cov.N().
DiscretizationReport discretization_checks(const TorusFunction& g,
                                           const RealizedCovariance& cov);

struct PowerFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r2 = 0.0;
};

// Least squares of log y against log x.
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct FIterationScaling {
  std::vector<int> N_list;
  std::vector<DiscretizationReport> reports;
  PowerFit single;  // |F(D(g)) - D(g)|_op vs N
  PowerFit double_iterate;
};

FIterationScaling f_iteration_scaling(const CorrelationProfile& profile, Complex z,
                                      const std::vector<int>& N_list,
                                      const DysonOptions& opts = {});

struct DecayReport {
  double beta_target = 0.0;
  double fitted_exponent = 0.0;  // +inf when the off-diagonal bins vanish
  double fit_r2 = 1.0;
  double norm_value = 0.0;
  int bins_used = 0;
};

// Per-distance maxima of |A_ij| over torus distances, fitted against
// log(1 + dist) on dist in [lo, hi]. Fewer than 8 nonzero bins in the
// window report the +inf sentinel.
DecayReport fit_offdiagonal_decay(const ComplexMatrix& a, int lo, int hi, double beta_target);

// A = I + B with |B|_op < 1; fits the decay of A^-1 over [4, N/4] with
// target order d_in - 1/2 - delta.
DecayReport jaffard_inverse_decay(const RealMatrix& a, double d_in, double delta = 0.2);

// Nonsymmetric Gaussian matrix with entries scaled by (1 + |i - j|)^-decay
// over torus distances, rescaled to the requested operator norm.
RealMatrix random_decay_matrix(int N, double decay, double op_norm, std::uint64_t seed,
                               std::uint64_t trial);

struct ProductDecayReport {
  double beta = 0.0;
  double constant = 0.0;  // 2^(beta+1) (beta+1) / (beta-1)
  std::vector<double> lhs;  // |AB|_beta
  std::vector<double> rhs;  // constant |A|_beta |B|_beta
  int violations = 0;
  double max_ratio = 0.0;
};

ProductDecayReport product_decay_check(int N, double beta, int pairs, std::uint64_t seed);

struct SolutionDecayReport {
  DecayReport overall;
  std::vector<double> row_exponents;
  double row_spread = 0.0;  // max - min of finite row exponents
};

SolutionDecayReport solution_decay_check(const CorrelationProfile& profile, Complex z, int K_u,
                                         int K_s = 0, const DysonOptions& opts = {});

struct IterateConsistencyReport {
  int N = 0;
  std::vector<double> eps;
  std::vector<double> f_errors;   // |F(M) - D(g)|_inf
  std::vector<double> ff_errors;  // |F(F(M)) - D(g)|_inf
  double fitted_constant = 0.0;   // max error / (eps + N^-1/2)
};

// M = D(g) + E for random decaying E with |J(E)|_inf = eps.
IterateConsistencyReport iterate_consistency(const CorrelationProfile& profile, Complex z, int N,
                                             int n_shapes, double eps_max, std::uint64_t seed,
                                             const DysonOptions& opts = {});

struct StabilityReport {
  double omega = 0.0;
  double perturbation = 0.0;    // |r|_inf
  double reconvergence = 0.0;   // |g' - g|_inf after restarting from g + r
  double sensitivity = 0.0;     // |g~ - g|_inf / |r|_inf, g~ solving with residual r
  double scaled_sensitivity = 0.0;  // sensitivity * omega
};

StabilityReport stability_probe(const DysonKernel& kernel, const TorusFunction& g, double omega,
                                double eps, std::uint64_t seed, const DysonOptions& opts = {});

}  // namespace corrmat
