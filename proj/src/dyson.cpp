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

#include "corrmat/dyson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "corrmat/fft.hpp"

namespace corrmat {
namespace {

constexpr double kImFloor = 1e-14;
constexpr double kThetaFloor = 1.0 / 64.0;
constexpr int kWarmStartBudget = 500;

// sup |g denom - 1 - shift|; an empty shift means zero.
double max_dev(const ComplexMatrix& g, const ComplexMatrix& denom,
               const ComplexMatrix& shift = ComplexMatrix()) {
  const bool shifted = shift.size() > 0;
  double r = 0.0;
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      r = std::max(r, std::abs(g(i, j) * denom(i, j) - 1.0 - (shifted ? shift(i, j) : 0.0)));
  return r;
}

// Flattening is row-major over (s, u) to match DysonKernel::dense.
ComplexVector flatten(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  const Eigen::Index cols = m.cols();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < cols; ++j) v(i * cols + j) = m(i, j);
  return v;
}

void unflatten(const ComplexVector& v, ComplexMatrix& m) {
  const Eigen::Index cols = m.cols();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
}

class LevelSolver {
 public:
  LevelSolver(const DysonKernel& kernel, const DysonOptions& opts, int rows,
              ComplexMatrix shift = ComplexMatrix())
      : kernel_(kernel), opts_(opts), rows_(rows), shift_(std::move(shift)) {
    const int n = rows * kernel.K_u();
    if (opts.newton_max_unknowns > 0 && n <= opts.newton_max_unknowns)
      dense_ = kernel.dense(rows).cast<Complex>();
  }

  double residual(const ComplexMatrix& g, Complex z, ComplexMatrix& denom) const {
    denom = -kernel_.apply(g);
    denom.array() -= z;
    return max_dev(g, denom, shift_);
  }

  // Runs until the residual drops below tol or the budget is spent.
  bool run(Complex z, ComplexMatrix& g, double tol, int budget, DysonResult& out) {
    ComplexMatrix denom, cand_denom;
    double r = residual(g, z, denom);
    double theta = 1.0;
    int newton_pause = 0;
    for (int it = 0;; ++it) {
      out.residual_history.push_back(r);
      out.residual = r;
      if (r < tol) return true;
      if (it >= budget) return false;
      ++out.iterations;

      if (dense_.size() > 0 && newton_pause == 0) {
        ComplexMatrix jac = (-flatten(g)).asDiagonal() * dense_;
        jac.diagonal() += flatten(denom);
        ComplexVector rhs = flatten(g.cwiseProduct(denom));
        rhs.array() -= 1.0;
        if (shift_.size() > 0) rhs -= flatten(shift_);
        const ComplexVector step = jac.partialPivLu().solve(-rhs);
        ComplexMatrix dg(g.rows(), g.cols());
        unflatten(step, dg);
        bool accepted = false;
        for (double lambda = 1.0; lambda >= 1.0 / 32.0; lambda *= 0.5) {
          ComplexMatrix cand = g + lambda * dg;
          if (!(cand.imag().minCoeff() > 0.0)) continue;
          const double rc = residual(cand, z, cand_denom);
          if (rc < r) {
            g = std::move(cand);
            denom = cand_denom;
            r = rc;
            accepted = true;
            break;
          }
        }
        if (accepted) {
          ++out.newton_steps;
          continue;
        }
        newton_pause = 20;
      }
      if (newton_pause > 0) --newton_pause;

      ComplexMatrix target = denom.cwiseInverse();
      if (shift_.size() > 0) target.array() *= 1.0 + shift_.array();
      ComplexMatrix cand = (1.0 - theta) * g + theta * target;
      for (Eigen::Index j = 0; j < cand.cols(); ++j)
        for (Eigen::Index i = 0; i < cand.rows(); ++i)
          if (!(cand(i, j).imag() > 0.0)) {
            cand(i, j).imag(kImFloor);
            out.im_floored = true;
          }
      const double rc = residual(cand, z, cand_denom);
      if (rc > r && theta > kThetaFloor) {
        theta = std::max(0.5 * theta, kThetaFloor);
        continue;
      }
      g = std::move(cand);
      denom = cand_denom;
      r = rc;
    }
  }

  int rows() const { return rows_; }

 private:
  const DysonKernel& kernel_;
  const DysonOptions& opts_;
  int rows_;
  ComplexMatrix shift_;
  ComplexMatrix dense_;
};

std::string history_tail(const std::vector<double>& h) {
  std::ostringstream os;
  os << "residual history (last " << std::min<size_t>(h.size(), 5) << " of " << h.size()
     << "):";
  for (size_t i = h.size() > 5 ? h.size() - 5 : 0; i < h.size(); ++i) os << ' ' << h[i];
  return os.str();
}

}  // namespace

DysonKernel::DysonKernel(const CorrelationProfile& profile, int K_s, int K_u)
    : profile_(profile),
      k_s_(K_s),
      k_u_(K_u),
      translation_invariant_(profile.translation_invariant()),
      c2sq_(profile.kind() == ProfileKind::kGoe ? 0.0 : profile.c2() * profile.c2()) {
  require(K_s >= 1 && K_u >= 1, ErrorCode::kParameter, "grid sizes must be positive");
  if (profile.kind() == ProfileKind::kGoe) {
    phi_ = RealMatrix::Constant(K_u, K_u, 1.0 / K_u);
  } else {
    const double c1sq = profile.c1() * profile.c1();
    std::vector<Complex> buf(static_cast<size_t>(K_u) * K_u);
    for (int k = 0; k < K_u; ++k)
      for (int l = 0; l < K_u; ++l)
        buf[static_cast<size_t>(k) * K_u + l] =
            c1sq * profile.kernel(torus_distance(k, 0, K_u), torus_distance(l, 0, K_u));
    // The kernel is even in each offset, so the sign convention is immaterial
    // and the transform is real.
    fft2d(buf, K_u, K_u);
    phi_.resize(K_u, K_u);
    for (int j = 0; j < K_u; ++j)
      for (int l = 0; l < K_u; ++l) phi_(j, l) = buf[static_cast<size_t>(j) * K_u + l].real() / K_u;
  }
  weight_.resize(K_s, K_s);
  for (int m = 0; m < K_s; ++m)
    for (int n = 0; n < K_s; ++n)
      weight_(m, n) =
          profile.modulation(static_cast<double>(m) / K_s, static_cast<double>(n) / K_s) / K_s;
}

ComplexMatrix DysonKernel::apply(const ComplexMatrix& h) const {
  require(h.cols() == k_u_, ErrorCode::kDimension, "torus function has the wrong K_u");
  const Complex mean = h.mean();
  if (translation_invariant_) {
    const ComplexVector hbar = h.colwise().mean().transpose();
    const RealVector re = phi_ * hbar.real();
    const RealVector im = phi_ * hbar.imag();
    ComplexMatrix out(h.rows(), k_u_);
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      for (int j = 0; j < k_u_; ++j) out(i, j) = Complex(re(j), im(j)) + c2sq_ * mean;
    return out;
  }
  require(h.rows() == k_s_, ErrorCode::kDimension, "torus function has the wrong K_s");
  const RealMatrix re = weight_ * h.real() * phi_.transpose();
  const RealMatrix im = weight_ * h.imag() * phi_.transpose();
  ComplexMatrix out(k_s_, k_u_);
  out.real() = re;
  out.imag() = im;
  out.array() += c2sq_ * mean;
  return out;
}

TorusFunction DysonKernel::apply(const TorusFunction& h) const {
  TorusFunction out(h.K_s, h.K_u, h.z);
  out.values = apply(h.values);
  return out;
}

RealMatrix DysonKernel::dense(int rows) const {
  require(rows == 1 ? translation_invariant_ || k_s_ == 1 : rows == k_s_, ErrorCode::kDimension,
          "dense Psi needs all K_s rows unless the kernel is translation invariant");
  const int n = rows * k_u_;
  RealMatrix out(n, n);
  for (int s = 0; s < rows; ++s)
    for (int t = 0; t < rows; ++t) {
      const double w = translation_invariant_ ? 1.0 / rows : weight_(s, t);
      out.block(s * k_u_, t * k_u_, k_u_, k_u_) = w * phi_;
    }
  out.array() += c2sq_ / n;
  return out;
}

TorusFunction apply_psi(const TorusFunction& h, const CorrelationProfile& profile) {
  return DysonKernel(profile, h.K_s, h.K_u).apply(h);
}

double dyson_residual(const DysonKernel& kernel, const TorusFunction& g) {
  ComplexMatrix denom = -kernel.apply(g.values);
  denom.array() -= g.z;
  return max_dev(g.values, denom);
}

DysonResult solve_dyson(const DysonKernel& kernel, Complex z, const DysonOptions& opts,
                        const TorusFunction* initial) {
  require(z.imag() > 0.0, ErrorCode::kDomain, "the Dyson equation needs Im z > 0");
  require(opts.tol >= 1e-12, ErrorCode::kParameter, "tol must be >= 1e-12");
  const int rows = kernel.translation_invariant() ? 1 : kernel.K_s();
  LevelSolver solver(kernel, opts, rows);
  DysonResult res;
  ComplexMatrix g(rows, kernel.K_u());
  bool done = false;

  if (initial != nullptr) {
    require(initial->K_u == kernel.K_u() && initial->values.rows() >= rows,
            ErrorCode::kDimension, "initial guess does not match the solver grid");
    g = initial->values.topRows(rows);
    res.eta_ladder.push_back(z.imag());
    const int budget = opts.continuation ? std::min(opts.max_iter, kWarmStartBudget)
                                         : opts.max_iter;
    done = solver.run(z, g, opts.tol, budget, res);
    if (!done && !opts.continuation) {
      fail(ErrorCode::kConvergence, "Dyson iteration did not converge from the warm start; " +
                                        history_tail(res.residual_history));
    }
  }

  if (!done) {
    std::vector<double> ladder;
    if (opts.continuation && z.imag() < opts.continuation_top) {
      for (double e = z.imag(); e < opts.continuation_top; e *= 2.0) ladder.push_back(e);
      ladder.push_back(ladder.back() * 2.0);
      std::reverse(ladder.begin(), ladder.end());
    } else {
      ladder.push_back(z.imag());
    }
    res.eta_ladder = ladder;
    const Complex top(z.real(), ladder.front());
    g.setConstant(-1.0 / top);
    ComplexMatrix prev;
    for (size_t k = 0; k < ladder.size(); ++k) {
      const bool last = k + 1 == ladder.size();
      const Complex zk(z.real(), ladder[k]);
      const double tol_k = last ? opts.tol : std::max(opts.tol, 1e-8);
      const int budget = opts.max_iter - res.iterations;
      if (!solver.run(zk, g, tol_k, budget, res)) {
        std::ostringstream os;
        os << "Dyson iteration did not converge at z = " << zk.real() << " + " << zk.imag()
           << "i after " << res.iterations << " iterations; "
           << history_tail(res.residual_history);
        fail(ErrorCode::kConvergence, os.str());
      }
      if (k > 0) res.continuation_jumps.push_back((g - prev).cwiseAbs().maxCoeff());
      prev = g;
    }
  }

  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      if (!(g(i, j).imag() > 0.0)) {
        g(i, j).imag(kImFloor);
        res.im_floored = true;
      }
  res.g = TorusFunction(kernel.K_s(), kernel.K_u(), z);
  for (int s = 0; s < kernel.K_s(); ++s) res.g.values.row(s) = g.row(rows == 1 ? 0 : s);
  return res;
}

DysonResult solve_dyson(const CorrelationProfile& profile, Complex z, int K_s, int K_u,
                        double tol) {
  DysonOptions opts;
  opts.tol = tol;
  return solve_dyson(DysonKernel(profile, K_s, K_u), z, opts);
}

DysonResult solve_dyson_perturbed(const DysonKernel& kernel, const TorusFunction& initial,
                                  const ComplexMatrix& r, const DysonOptions& opts) {
  const Complex z = initial.z;
  require(z.imag() > 0.0, ErrorCode::kDomain, "the Dyson equation needs Im z > 0");
  const int rows = kernel.translation_invariant() ? 1 : kernel.K_s();
  require(r.cols() == kernel.K_u() && r.rows() >= rows && initial.K_u == kernel.K_u() &&
              initial.values.rows() >= rows,
          ErrorCode::kDimension, "perturbation does not match the solver grid");
  LevelSolver solver(kernel, opts, rows, r.topRows(rows));
  DysonResult res;
  ComplexMatrix g = initial.values.topRows(rows);
  res.eta_ladder.push_back(z.imag());
  if (!solver.run(z, g, opts.tol, opts.max_iter, res)) {
    fail(ErrorCode::kConvergence, "perturbed Dyson iteration did not converge; " +
                                      history_tail(res.residual_history));
  }
  res.g = TorusFunction(kernel.K_s(), kernel.K_u(), z);
  for (int s = 0; s < kernel.K_s(); ++s) res.g.values.row(s) = g.row(rows == 1 ? 0 : s);
  return res;
}

Complex stieltjes(const TorusFunction& g) { return g.values.mean(); }

double SpectralDensity::rho_at(double E) const {
  if (!(E >= E_L && E <= E_R) || energies.empty()) return 0.0;
  if (E <= energies.front()) return rho.front();
  if (E >= energies.back()) return rho.back();
  const auto it = std::upper_bound(energies.begin(), energies.end(), E);
  const size_t hi = static_cast<size_t>(it - energies.begin());
  const size_t lo = hi - 1;
  const double f = (E - energies[lo]) / (energies[hi] - energies[lo]);
  return (1.0 - f) * rho[lo] + f * rho[hi];
}

std::vector<double> energy_grid(double lo, double hi, double step) {
  require(step > 0.0 && hi > lo, ErrorCode::kParameter, "energy grid needs lo < hi, step > 0");
  const int n = static_cast<int>(std::llround((hi - lo) / step)) + 1;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = lo + i * step;
  return grid;
}

namespace {

struct EdgeFit {
  double edge;
  double coefficient;
};

class DensitySolver {
 public:
  DensitySolver(const DysonKernel& kernel, double eta, double tol)
      : kernel_(kernel), eta_(eta) {
    opts_.tol = tol;
  }

  // Im m / pi at E, warm-started from `warm` when given.
  double rho(double E, const TorusFunction* warm, TorusFunction* solution = nullptr) {
    DysonResult r = solve_dyson(kernel_, Complex(E, eta_), opts_, warm);
    max_residual = std::max(max_residual, r.residual);
    const double value = stieltjes(r.g).imag() / std::numbers::pi;
    if (solution != nullptr) *solution = std::move(r.g);
    return value;
  }

  double max_residual = 0.0;

 private:
  const DysonKernel& kernel_;
  double eta_;
  DysonOptions opts_;
};

// side = +1 for the left edge (density grows with E), -1 for the right.
EdgeFit locate_edge(DensitySolver& solver, double outside, double inside, TorusFunction warm,
                    double threshold, double eta, const DensityOptions& opts, int side) {
  double a = outside, b = inside;
  for (int it = 0; it < 60 && std::abs(b - a) > 1e-13; ++it) {
    const double mid = 0.5 * (a + b);
    TorusFunction sol;
    if (solver.rho(mid, &warm, &sol) >= threshold) {
      b = mid;
      warm = std::move(sol);
    } else {
      a = mid;
    }
  }
  const double e_thr = 0.5 * (a + b);

  const int p = std::max(opts.fit_points, 5);
  const double t_lo = 4.0 * eta, t_hi = opts.fit_window;
  require(t_hi > t_lo, ErrorCode::kParameter, "fit window must exceed 4 eta_recover");
  RealMatrix design(p, 3);
  RealVector target(p);
  for (int k = 0; k < p; ++k) {
    const double t = t_lo + (t_hi - t_lo) * k / (p - 1);
    TorusFunction sol;
    const double r = solver.rho(e_thr + side * t, &warm, &sol);
    warm = std::move(sol);
    design(k, 0) = 1.0;
    design(k, 1) = t;
    design(k, 2) = t * t;
    target(k) = r * r;
  }
  const RealVector coef = design.colPivHouseholderQr().solve(target);
  const double c0 = coef(0), c1 = coef(1), c2 = coef(2);
  double t0;
  if (std::abs(c2) * std::abs(c0) < 1e-14 * c1 * c1) {
    t0 = -c0 / c1;
  } else {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    require(disc >= 0.0, ErrorCode::kNumeric, "edge fit has no real root");
    const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
    const double r1 = q / c2, r2 = c0 / q;
    t0 = std::abs(r1) < std::abs(r2) ? r1 : r2;
  }
  const double slope = c1 + 2.0 * c2 * t0;
  require(slope > 0.0, ErrorCode::kNumeric, "edge fit slope is not positive");
  return {e_thr + side * t0, std::sqrt(slope)};
}

}  // namespace

SpectralDensity density_and_edges(const CorrelationProfile& profile,
                                  const std::vector<double>& E_grid, double eta_recover,
                                  const DensityOptions& opts) {
  require(eta_recover >= 1e-5 && eta_recover <= 1e-2, ErrorCode::kParameter,
          "eta_recover must lie in [1e-5, 1e-2]");
  require(E_grid.size() >= 3 && std::is_sorted(E_grid.begin(), E_grid.end()),
          ErrorCode::kParameter, "energy grid needs at least 3 ascending points");
  const int K_s = opts.K_s > 0 ? opts.K_s : (profile.translation_invariant() ? 1 : opts.K_u);
  const DysonKernel kernel(profile, K_s, opts.K_u);
  DensitySolver solver(kernel, eta_recover, opts.tol);

  SpectralDensity dens;
  dens.energies = E_grid;
  dens.eta_recover = eta_recover;
  dens.threshold = 2.0 * std::sqrt(eta_recover);
  const size_t n = E_grid.size();
  std::vector<TorusFunction> sols(n);
  std::vector<double> raw(n);
  for (size_t i = 0; i < n; ++i)
    raw[i] = solver.rho(E_grid[i], i > 0 ? &sols[i - 1] : nullptr, &sols[i]);

  size_t first = n, last = n;
  for (size_t i = 0; i < n; ++i)
    if (raw[i] >= dens.threshold) {
      if (first == n) first = i;
      last = i;
    }
  if (first == n || first == 0 || last + 1 == n) {
    fail(ErrorCode::kBracketing,
         "density does not cross 2 sqrt(eta_recover) inside the energy grid");
  }
  const EdgeFit left = locate_edge(solver, E_grid[first - 1], E_grid[first], sols[first],
                                   dens.threshold, eta_recover, opts, +1);
  const EdgeFit right = locate_edge(solver, E_grid[last + 1], E_grid[last], sols[last],
                                    dens.threshold, eta_recover, opts, -1);
  dens.E_L = left.edge;
  dens.c_L = left.coefficient;
  dens.E_R = right.edge;
  dens.c_R = right.coefficient;

  const double step = (E_grid.back() - E_grid.front()) / static_cast<double>(n - 1);
  dens.rho.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const bool inside = E_grid[i] >= dens.E_L - step && E_grid[i] <= dens.E_R + step;
    dens.rho[i] = inside ? std::max(raw[i], 0.0) : 0.0;
  }
  dens.mass = 0.0;
  for (size_t i = 1; i < n; ++i)
    dens.mass += 0.5 * (dens.rho[i] + dens.rho[i - 1]) * (E_grid[i] - E_grid[i - 1]);
  dens.max_solver_residual = solver.max_residual;
  return dens;
}

DomainPoint domain_params(Complex z, const SpectralDensity& dens) {
  DomainPoint p;
  p.z = z;
  const double x = z.real(), y = z.imag();
  if (x < dens.E_L) {
    p.kappa = std::hypot(dens.E_L - x, y);
  } else if (x > dens.E_R) {
    p.kappa = std::hypot(x - dens.E_R, y);
  } else {
    p.kappa = std::abs(y);
  }
  p.rho_z = dens.rho_at(x);
  p.omega = std::pow(p.kappa, 2.0 / 3.0) + p.rho_z * p.rho_z;
  return p;
}

FreeConvolution::FreeConvolution(std::vector<double> spectrum, double t)
    : spectrum_(std::move(spectrum)), t_(t) {
  require(!spectrum_.empty(), ErrorCode::kInput, "spectrum must be nonempty");
  require(t >= 0.0 && std::isfinite(t), ErrorCode::kParameter, "t must be finite and >= 0");
  std::sort(spectrum_.begin(), spectrum_.end());
  const double lmin = spectrum_.front();
  if (t == 0.0) {
    edge_ = critical_ = lmin;
    degenerate_ = true;
    return;
  }
  const double n = static_cast<double>(spectrum_.size());
  auto excess = [&](double x) {
    double d1 = 0.0;
    for (double l : spectrum_) {
      const double r = l - (lmin - x);
      d1 += 1.0 / (r * r);
    }
    return t * d1 / n - 1.0;
  };
  // t m0'(lmin - x) decreases in x; the bracket ends have opposite signs.
  double lo = 0.5 * std::sqrt(t / n), hi = std::sqrt(t) + 1.0;
  for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-15; ++it) {
    const double mid = std::sqrt(lo * hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  critical_ = lmin - std::sqrt(lo * hi);
  edge_ = critical_ - t * m0(critical_).real();
}

Complex FreeConvolution::m0(Complex z) const {
  Complex acc = 0.0;
  for (double l : spectrum_) acc += 1.0 / (l - z);
  return acc / static_cast<double>(spectrum_.size());
}

Complex FreeConvolution::m(Complex z) const {
  require(z.imag() > 0.0, ErrorCode::kDomain, "m_t needs Im z > 0");
  Complex m = m0(z);
  for (int it = 0; it < 100000; ++it) {
    const Complex next = 0.5 * m + 0.5 * m0(z + t_ * m);
    if (std::abs(next - m) < 1e-14 * std::max(1.0, std::abs(m))) return next;
    m = next;
  }
  fail(ErrorCode::kConvergence, "subordination fixed point did not converge");
}

FreeConvolution free_convolution_edge(std::vector<double> spectrum, double t) {
  return FreeConvolution(std::move(spectrum), t);
}

}  // namespace corrmat
