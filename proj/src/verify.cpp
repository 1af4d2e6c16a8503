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

#include "corrmat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "corrmat/fft.hpp"
#include "corrmat/rng.hpp"
#include "internal.hpp"

namespace corrmat {
namespace {

std::string describe_z(Complex z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

DysonKernel kernel_for(const CorrelationProfile& profile, int N, int K_u) {
  return DysonKernel(profile, profile.translation_invariant() ? 1 : N, K_u > 0 ? K_u : N);
}

// Fit of log(max) vs log(1 + dist) on the nonzero bins in [lo, hi].
DecayReport fit_bins(const std::vector<double>& maxima, int lo, int hi, double beta_target) {
  DecayReport rep;
  rep.beta_target = beta_target;
  std::vector<double> x, y;
  for (int dist = std::max(lo, 0); dist <= hi && dist < static_cast<int>(maxima.size()); ++dist) {
    if (maxima[dist] > 0.0) {
      x.push_back(1.0 + dist);
      y.push_back(maxima[dist]);
    }
  }
  rep.bins_used = static_cast<int>(x.size());
  if (rep.bins_used < 8) {
    rep.fitted_exponent = std::numeric_limits<double>::infinity();
    rep.fit_r2 = 1.0;
    return rep;
  }
  const PowerFit fit = fit_power_law(x, y);
  rep.fitted_exponent = -fit.exponent;
  rep.fit_r2 = fit.r2;
  return rep;
}

}  // namespace

double domain_lower_bound(int N, double omega, const DomainPolicy& policy) {
  return std::pow(std::log(static_cast<double>(N)), policy.log_power) / N / std::pow(omega, 4.0);
}

double local_law_bound(int N, double eta, double gamma_im, double omega) {
  const double logn = std::log(static_cast<double>(N));
  return std::pow(logn, 4.0) * std::sqrt(gamma_im / (N * eta)) / omega;
}

ComplexMatrix deterministic_equivalent(const CorrelationProfile& profile, int N, Complex z,
                                       const DysonOptions& opts, int K_u) {
  const DysonKernel kernel = kernel_for(profile, N, K_u);
  return discretize(solve_dyson(kernel, z, opts).g, N);
}

LocalLawResult local_law_check(const CorrelationProfile& profile, int N,
                               const std::vector<Complex>& z_grid, int n_trials,
                               std::uint64_t seed, const SpectralDensity& dens,
                               const LocalLawOptions& opts) {
  require(n_trials >= 1, ErrorCode::kParameter, "n_trials must be >= 1");
  require(!z_grid.empty(), ErrorCode::kParameter, "z grid is empty");
  const int nz = static_cast<int>(z_grid.size());
  std::vector<DomainPoint> points(nz);
  std::vector<bool> inside(nz);
  for (int k = 0; k < nz; ++k) {
    const Complex z = z_grid[k];
    require(z.imag() > 0.0, ErrorCode::kDomain, "z = " + describe_z(z) + " has Im z <= 0");
    points[k] = domain_params(z, dens);
    const double lower = domain_lower_bound(N, points[k].omega, opts.domain);
    inside[k] = z.imag() >= lower;
    if (!inside[k] && opts.domain.enforce) {
      std::ostringstream os;
      os << "z = " << describe_z(z) << " violates Im z >= N^-1 (log N)^" << opts.domain.log_power
         << " omega^-4: Im z = " << z.imag() << " < " << lower << " (N = " << N
         << ", omega = " << points[k].omega << ")";
      fail(ErrorCode::kDomain, os.str());
    }
  }

  const DysonKernel kernel = kernel_for(profile, N, opts.K_u);
  std::vector<ComplexMatrix> equivalents(nz);
  for (int k = 0; k < nz; ++k)
    equivalents[k] = discretize(solve_dyson(kernel, z_grid[k], opts.dyson).g, N);

  const Ensemble ensemble(profile, N);
  LocalLawResult result;
  result.reports.resize(static_cast<size_t>(n_trials) * nz);
  internal::parallel_for(n_trials, [&](int t) {
    const Resolvent resolvent(ensemble.sample(seed, static_cast<std::uint64_t>(t)));
    for (int k = 0; k < nz; ++k) {
      const GreenFunction G = resolvent.at(z_grid[k]);
      LocalLawReport& rep = result.reports[static_cast<size_t>(t) * nz + k];
      rep.z = z_grid[k];
      rep.N = N;
      rep.trial = t;
      rep.Lambda = max_abs(equivalents[k] - G.entries);
      rep.gamma_im = G.gamma_im;
      rep.Gamma = G.gamma_cap;
      rep.kappa = points[k].kappa;
      rep.rho_z = points[k].rho_z;
      rep.omega = points[k].omega;
      rep.bound = local_law_bound(N, z_grid[k].imag(), rep.gamma_im, rep.omega);
      rep.ratio = rep.Lambda / rep.bound;
      rep.in_domain = inside[k];
    }
  });
  std::vector<double> lambdas;
  for (const auto& rep : result.reports) {
    result.max_ratio = std::max(result.max_ratio, rep.ratio);
    result.max_lambda = std::max(result.max_lambda, rep.Lambda);
    lambdas.push_back(rep.Lambda);
  }
  result.median_lambda = internal::median(lambdas);
  return result;
}

double averaged_law_bound(int N, double eta, double kappa, double omega) {
  const double logn = std::log(static_cast<double>(N));
  const double neta = N * eta;
  return std::pow(logn, 16.0) *
         (1.0 / (N * kappa * std::pow(omega, 3.0)) + 1.0 / (neta * neta * std::pow(omega, 5.0)));
}

AveragedLawReport averaged_law_check(const CorrelationProfile& profile, int N, Complex z,
                                     int n_trials, std::uint64_t seed,
                                     const SpectralDensity& dens, const AveragedDomain& domain,
                                     const DysonOptions& opts) {
  require(n_trials >= 1, ErrorCode::kParameter, "n_trials must be >= 1");
  require(z.imag() > 0.0, ErrorCode::kDomain, "z = " + describe_z(z) + " has Im z <= 0");
  const DomainPoint p = domain_params(z, dens);
  AveragedLawReport rep;
  rep.z = z;
  rep.N = N;
  rep.n_trials = n_trials;
  rep.kappa = p.kappa;
  rep.omega = p.omega;
  const double lower = std::pow(static_cast<double>(N), -domain.a);
  rep.in_domain = p.kappa >= lower;
  if (!rep.in_domain && domain.enforce) {
    std::ostringstream os;
    os << "z = " << describe_z(z) << " violates kappa >= N^-" << domain.a << ": kappa = "
       << p.kappa << " < " << lower;
    fail(ErrorCode::kDomain, os.str());
  }
  const ComplexMatrix D = deterministic_equivalent(profile, N, z, opts);
  const Ensemble ensemble(profile, N);

  // Fixed-size blocks summed in trial order keep the mean schedule independent.
  constexpr int kBlock = 16;
  ComplexMatrix sum = ComplexMatrix::Zero(N, N);
  std::vector<double> lambdas(n_trials);
  for (int start = 0; start < n_trials; start += kBlock) {
    const int count = std::min(kBlock, n_trials - start);
    std::vector<ComplexMatrix> block(count);
    internal::parallel_for(count, [&](int b) {
      const int t = start + b;
      block[b] = Resolvent(ensemble.sample(seed, static_cast<std::uint64_t>(t))).at(z).entries;
      lambdas[t] = max_abs(D - block[b]);
    });
    for (const auto& g : block) sum += g;
  }
  sum /= static_cast<double>(n_trials);
  rep.error = max_abs(sum - D);
  rep.bound = averaged_law_bound(N, z.imag(), p.kappa, p.omega);
  rep.ratio = rep.error / rep.bound;
  rep.median_single_lambda = internal::median(lambdas);
  return rep;
}

double residual_bound(int N, double eta) {
  return 8.0 * std::log(static_cast<double>(N)) / std::sqrt(N * std::pow(eta, 6.0));
}

ResidualReport residual_check(const CorrelationProfile& profile, int N, Complex z, int n_trials,
                              std::uint64_t seed) {
  require(n_trials >= 1, ErrorCode::kParameter, "n_trials must be >= 1");
  require(z.imag() > 0.0, ErrorCode::kDomain, "z = " + describe_z(z) + " has Im z <= 0");
  const Ensemble ensemble(profile, N);
  ResidualReport rep;
  rep.N = N;
  rep.z = z;
  rep.n_trials = n_trials;
  rep.bound = residual_bound(N, z.imag());
  rep.r_values.resize(n_trials);
  internal::parallel_for(n_trials, [&](int t) {
    const GreenFunction G = greens_function(ensemble.sample(seed, static_cast<std::uint64_t>(t)), z);
    rep.r_values[t] = residual(G, ensemble.covariance()).r_inf;
  });
  for (double r : rep.r_values) {
    rep.max_r = std::max(rep.max_r, r);
    if (!(r <= rep.bound)) ++rep.failures;
  }
  rep.median_r = internal::median(rep.r_values);
  return rep;
}

DiscretizationReport discretization_checks(const TorusFunction& g,
                                           const RealizedCovariance& cov) {
  const int N = cov.N();
  DiscretizationReport rep;
  rep.N = N;
  const ComplexMatrix D = discretize(g, N);

  std::vector<double> moduli(g.values.size());
  for (Eigen::Index t = 0; t < g.values.size(); ++t) moduli[t] = std::abs(g.values(t));
  std::sort(moduli.begin(), moduli.end());
  const RealVector sv = Eigen::BDCSVD<ComplexMatrix>(D).singularValues();
  for (Eigen::Index t = 0; t < sv.size(); ++t) {
    const auto it = std::lower_bound(moduli.begin(), moduli.end(), sv(t));
    double best = std::numeric_limits<double>::infinity();
    if (it != moduli.end()) best = *it - sv(t);
    if (it != moduli.begin()) best = std::min(best, sv(t) - *(it - 1));
    rep.sv_distance = std::max(rep.sv_distance, best);
  }
  const double logn = std::log(static_cast<double>(N));
  rep.sv_tolerance = std::pow(static_cast<double>(N), -1.0 / 3.0) / logn;

  const ResidualResult R = residual(D, g.z, cov);
  rep.residual_inf = R.r_inf;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      const int dist = torus_distance(i, j, N);
      const double envelope =
          dist == 0 ? 1.0 / N : std::min(1.0 / N, 1.0 / (static_cast<double>(dist) * dist));
      rep.residual_constant = std::max(rep.residual_constant, std::abs(R.R(i, j)) / envelope);
    }

  const ComplexMatrix F1 = f_map(D, g.z, cov).value;
  const ComplexMatrix F2 = f_map(F1, g.z, cov).value;
  rep.f_error = operator_norm(ComplexMatrix(F1 - D));
  rep.ff_error = operator_norm(ComplexMatrix(F2 - D));
  return rep;
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::kInput,
          "power-law fit needs at least two points");
  const size_t n = x.size();
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (size_t t = 0; t < n; ++t) {
    require(x[t] > 0.0 && y[t] > 0.0, ErrorCode::kInput, "power-law fit needs positive data");
    lx[t] = std::log(x[t]);
    ly[t] = std::log(y[t]);
    sx += lx[t];
    sy += ly[t];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t t = 0; t < n; ++t) {
    sxx += (lx[t] - mx) * (lx[t] - mx);
    sxy += (lx[t] - mx) * (ly[t] - my);
    syy += (ly[t] - my) * (ly[t] - my);
  }
  require(sxx > 0.0, ErrorCode::kInput, "power-law fit needs distinct x values");
  PowerFit fit;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

FIterationScaling f_iteration_scaling(const CorrelationProfile& profile, Complex z,
                                      const std::vector<int>& N_list, const DysonOptions& opts) {
  require(N_list.size() >= 2, ErrorCode::kParameter, "scaling fit needs at least two N");
  FIterationScaling out;
  out.N_list = N_list;
  std::vector<double> xs, single, twice;
  for (int N : N_list) {
    const Ensemble ensemble(profile, N);
    const DysonKernel kernel = kernel_for(profile, N, N);
    const TorusFunction g = solve_dyson(kernel, z, opts).g;
    out.reports.push_back(discretization_checks(g, ensemble.covariance()));
    xs.push_back(N);
    single.push_back(out.reports.back().f_error);
    twice.push_back(out.reports.back().ff_error);
  }
  out.single = fit_power_law(xs, single);
  out.double_iterate = fit_power_law(xs, twice);
  return out;
}

DecayReport fit_offdiagonal_decay(const ComplexMatrix& a, int lo, int hi, double beta_target) {
  require(a.rows() == a.cols() && a.rows() > 0, ErrorCode::kDimension,
          "decay fit needs a square matrix");
  const int n = static_cast<int>(a.rows());
  std::vector<double> maxima(n / 2 + 1, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double& m = maxima[torus_distance(i, j, n)];
      m = std::max(m, std::abs(a(i, j)));
    }
  DecayReport rep = fit_bins(maxima, lo, hi, beta_target);
  rep.norm_value = decay_norm(a, beta_target);
  return rep;
}

DecayReport jaffard_inverse_decay(const RealMatrix& a, double d_in, double delta) {
  require(a.rows() == a.cols() && a.rows() >= 8, ErrorCode::kDimension,
          "Jaffard check needs a square matrix with N >= 8");
  const int n = static_cast<int>(a.rows());
  const RealMatrix b = a - RealMatrix::Identity(n, n);
  const double op = operator_norm(b);
  if (!(op < 1.0)) {
    fail(ErrorCode::kPrecondition,
         "A = I + B needs |B|_op < 1, got " + std::to_string(op));
  }
  const ComplexMatrix inv = a.partialPivLu().inverse().cast<Complex>();
  return fit_offdiagonal_decay(inv, 4, n / 4, d_in - 0.5 - delta);
}

RealMatrix random_decay_matrix(int N, double decay, double op_norm, std::uint64_t seed,
                               std::uint64_t trial) {
  require(N >= 2, ErrorCode::kParameter, "N must be >= 2");
  require(decay > 0.0 && op_norm > 0.0, ErrorCode::kParameter,
          "decay and operator norm must be positive");
  RandomStream rng(seed, trial, kTestMatrixStream);
  RealMatrix b(N, N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i)
      b(i, j) = rng.gaussian() * std::pow(1.0 + torus_distance(i, j, N), -decay);
  const double op = operator_norm(b);
  require(op > 0.0, ErrorCode::kNumeric, "degenerate random matrix");
  return b * (op_norm / op);
}

ProductDecayReport product_decay_check(int N, double beta, int pairs, std::uint64_t seed) {
  require(beta > 1.0, ErrorCode::kParameter, "product decay needs beta > 1");
  require(pairs >= 1, ErrorCode::kParameter, "need at least one pair");
  ProductDecayReport rep;
  rep.beta = beta;
  rep.constant = std::pow(2.0, beta + 1.0) * (beta + 1.0) / (beta - 1.0);
  rep.lhs.resize(pairs);
  rep.rhs.resize(pairs);
  // Trial ids above 2^32 keep these draws apart from the Jaffard instances.
  const std::uint64_t base = std::uint64_t{1} << 32;
  internal::parallel_for(pairs, [&](int p) {
    const std::uint64_t t = base + 2 * static_cast<std::uint64_t>(p);
    const RealMatrix a = random_decay_matrix(N, beta, 1.0, seed, t);
    const RealMatrix b = random_decay_matrix(N, beta, 1.0, seed, t + 1);
    const RealMatrix ab = a * b;
    rep.lhs[p] = decay_norm(ab, beta);
    rep.rhs[p] = rep.constant * decay_norm(a, beta) * decay_norm(b, beta);
  });
  for (int p = 0; p < pairs; ++p) {
    if (!(rep.lhs[p] <= rep.rhs[p])) ++rep.violations;
    rep.max_ratio = std::max(rep.max_ratio, rep.lhs[p] / rep.rhs[p]);
  }
  return rep;
}

SolutionDecayReport solution_decay_check(const CorrelationProfile& profile, Complex z, int K_u,
                                         int K_s, const DysonOptions& opts) {
  require(K_u >= 32, ErrorCode::kResolution, "decay fit needs K_u >= 32");
  if (K_s <= 0) K_s = profile.translation_invariant() ? 1 : K_u;
  const DysonKernel kernel(profile, K_s, K_u);
  const TorusFunction g = solve_dyson(kernel, z, opts).g;
  SolutionDecayReport rep;
  rep.overall = fit_offdiagonal_decay(discretize(g, K_u), 4, K_u / 4, profile.alpha());

  std::vector<Complex> row(K_u);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int s = 0; s < g.K_s; ++s) {
    for (int l = 0; l < K_u; ++l) row[l] = g.values(s, l);
    fft1d(row);
    std::vector<double> maxima(K_u / 2 + 1, 0.0);
    for (int k = 0; k < K_u; ++k) {
      double& m = maxima[torus_distance(k, 0, K_u)];
      m = std::max(m, std::abs(row[k]) / K_u);
    }
    const double e = fit_bins(maxima, 4, K_u / 4, profile.alpha()).fitted_exponent;
    rep.row_exponents.push_back(e);
    if (std::isfinite(e)) {
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  }
  rep.row_spread = hi >= lo ? hi - lo : 0.0;
  return rep;
}

IterateConsistencyReport iterate_consistency(const CorrelationProfile& profile, Complex z, int N,
                                             int n_shapes, double eps_max, std::uint64_t seed,
                                             const DysonOptions& opts) {
  require(n_shapes >= 1, ErrorCode::kParameter, "need at least one perturbation shape");
  require(eps_max > 0.0 && eps_max <= 1e-2, ErrorCode::kParameter, "eps must lie in (0, 1e-2]");
  const Ensemble ensemble(profile, N);
  const ComplexMatrix D = deterministic_equivalent(profile, N, z, opts);
  IterateConsistencyReport rep;
  rep.N = N;
  const double floor_term = 1.0 / std::sqrt(static_cast<double>(N));
  for (int s = 0; s < n_shapes; ++s) {
    RandomStream rng(seed, static_cast<std::uint64_t>(s), kAuditStream);
    const double decay = 2.0 + 2.0 * rng.uniform();
    ComplexMatrix E(N, N);
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i)
        E(i, j) = Complex(rng.gaussian(), rng.gaussian()) *
                  std::pow(1.0 + torus_distance(i, j, N), -decay);
    const double eps = eps_max * (s + 1) / n_shapes;
    E *= eps / embed(E).sup_norm();
    const ComplexMatrix F1 = f_map(D + E, z, ensemble.covariance()).value;
    const ComplexMatrix F2 = f_map(F1, z, ensemble.covariance()).value;
    rep.eps.push_back(eps);
    rep.f_errors.push_back(max_abs(F1 - D));
    rep.ff_errors.push_back(max_abs(F2 - D));
    rep.fitted_constant = std::max(
        rep.fitted_constant,
        std::max(rep.f_errors.back(), rep.ff_errors.back()) / (eps + floor_term));
  }
  return rep;
}

StabilityReport stability_probe(const DysonKernel& kernel, const TorusFunction& g, double omega,
                                double eps, std::uint64_t seed, const DysonOptions& opts) {
  require(eps > 0.0, ErrorCode::kParameter, "perturbation size must be positive");
  RandomStream rng(seed, 0, kAuditStream);
  const int rows = kernel.translation_invariant() ? 1 : g.K_s;
  ComplexMatrix r(g.K_s, g.K_u);
  for (int s = 0; s < rows; ++s)
    for (int l = 0; l < g.K_u; ++l) r(s, l) = Complex(rng.gaussian(), rng.gaussian());
  for (int s = rows; s < g.K_s; ++s) r.row(s) = r.row(0);
  r *= eps / r.cwiseAbs().maxCoeff();

  StabilityReport rep;
  rep.omega = omega;
  rep.perturbation = eps;
  DysonOptions local = opts;
  local.continuation = false;

  TorusFunction start = g;
  start.values += r;
  for (Eigen::Index t = 0; t < start.values.size(); ++t)
    if (!(start.values(t).imag() > 0.0)) start.values(t).imag(1e-14);
  const DysonResult again = solve_dyson(kernel, g.z, local, &start);
  rep.reconvergence = (again.g.values - g.values).cwiseAbs().maxCoeff();

  const DysonResult shifted = solve_dyson_perturbed(kernel, g, r, local);
  rep.sensitivity = (shifted.g.values - g.values).cwiseAbs().maxCoeff() / eps;
  rep.scaled_sensitivity = rep.sensitivity * omega;
  return rep;
}

}  // namespace corrmat
