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

#include <optional>
#include <vector>

#include "corrmat/common.hpp"
#include "corrmat/model.hpp"
#include "corrmat/torus.hpp"

namespace corrmat {

// Psi(h)(s, u) = int W(s, t) [ int Phi(u, v) h(t, v) dv ] dt + c2^2 int int h
//
// Phi(u, v) = sum_{k,l} c1^2 K(k, l) e^{2 pi i (k u - l v)} on the K_u torus
// and W(s, t) = w(s, t). Only the pairing that couples the output offset to
// the input offset survives the limit; the transposed pairing is O(1/N).
// GOE has Phi == 1 and no c2 term.
class DysonKernel {
 public:
  DysonKernel(const CorrelationProfile& profile, int K_s, int K_u);

  int K_s() const { return k_s_; }
  int K_u() const { return k_u_; }
  bool translation_invariant() const { return translation_invariant_; }
  const CorrelationProfile& profile() const { return profile_; }
  const RealMatrix& fourier_kernel() const { return phi_; }
  const RealMatrix& weight() const { return weight_; }
  double c2_squared() const { return c2sq_; }

  // Psi applied to a K_s x K_u grid (or to a single row when the kernel is
  // translation invariant and values has one row).
  ComplexMatrix apply(const ComplexMatrix& h) const;
  TorusFunction apply(const TorusFunction& h) const;

  // Dense matrix of Psi on the flattened unknowns (row-major over (s, u))
  // for `rows` rows of s.
  RealMatrix dense(int rows) const;

 private:
  CorrelationProfile profile_;
  int k_s_;
  int k_u_;
  bool translation_invariant_;
  RealMatrix phi_;     // K_u x K_u, divided by K_u
  RealMatrix weight_;  // K_s x K_s, divided by K_s
  double c2sq_;
};

TorusFunction apply_psi(const TorusFunction& h, const CorrelationProfile& profile);

struct DysonOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  bool continuation = true;
  double continuation_top = 0.1;
  // Newton polishing with backtracking on the flattened unknowns when their
  // count is at most this size; 0 leaves the damped iteration alone.
  int newton_max_unknowns = 2048;
};

struct DysonResult {
  TorusFunction g;
  double residual = 0.0;
  int iterations = 0;
  int newton_steps = 0;
  bool im_floored = false;
  std::vector<double> residual_history;
  std::vector<double> eta_ladder;          // descending, ends at Im z
  std::vector<double> continuation_jumps;  // sup |g(eta_k) - g(eta_{k-1})|
};

// Solves g (-Psi(g) - z) = 1 by damped fixed-point iteration
// g <- (1 - theta) g + theta / (-z - Psi(g)) from g = -1/z, halving theta on
// a residual increase (floor 1/64). Below Im z = 0.1 the solve walks down an
// eta ladder, warm-starting each level from the one above it.
DysonResult solve_dyson(const DysonKernel& kernel, Complex z, const DysonOptions& opts = {},
                        const TorusFunction* initial = nullptr);
DysonResult solve_dyson(const CorrelationProfile& profile, Complex z, int K_s, int K_u,
                        double tol = 1e-10);

// Solves g (-Psi(g) - z) = 1 + r starting from `initial` (whose z is used).
// For translation-invariant kernels only the first row of r is read.
DysonResult solve_dyson_perturbed(const DysonKernel& kernel, const TorusFunction& initial,
                                  const ComplexMatrix& r, const DysonOptions& opts = {});

// sup |g (-Psi(g) - z) - 1|
double dyson_residual(const DysonKernel& kernel, const TorusFunction& g);

// m(z) = int int g
Complex stieltjes(const TorusFunction& g);

struct SpectralDensity {
  std::vector<double> energies;
  std::vector<double> rho;
  double E_L = 0.0;
  double E_R = 0.0;
  double c_L = 0.0;
  double c_R = 0.0;
  double eta_recover = 0.0;
  double threshold = 0.0;  // rho level used to bracket the edges
  double mass = 0.0;       // trapezoid integral of rho
  double max_solver_residual = 0.0;

  // rho at E by linear interpolation; zero outside [E_L, E_R].
  double rho_at(double E) const;
};

struct DensityOptions {
  int K_s = 0;  // 0 picks 1 for translation-invariant kernels, K_u otherwise
  int K_u = 64;
  double tol = 1e-10;
  double fit_window = 0.1;
  int fit_points = 41;
};

// rho(E) = Im m(E + i eta) / pi on the grid; edges bracketed where rho
// crosses 2 sqrt(eta) and refined by a quadratic fit of rho^2 against
// t = E - E_edge over t in [4 eta, window]; c_edge is the square root of the
// fitted slope at the root.
SpectralDensity density_and_edges(const CorrelationProfile& profile,
                                  const std::vector<double>& E_grid, double eta_recover,
                                  const DensityOptions& opts = {});

// Uniform grid lo, lo + step, ..., hi.
std::vector<double> energy_grid(double lo, double hi, double step);

struct DomainPoint {
  Complex z;
  double kappa = 0.0;
  double rho_z = 0.0;
  double omega = 0.0;
};

DomainPoint domain_params(Complex z, const SpectralDensity& dens);

// Free convolution of the empirical measure of `spectrum` with a semicircle
// of variance t. The subordination m_t(z) = m0(z + t m_t(z)) puts the left
// edge at w - t m0(w) where w < min(spectrum) solves t m0'(w) = 1.
class FreeConvolution {
 public:
  FreeConvolution(std::vector<double> spectrum, double t);

  double edge() const { return edge_; }
  double critical_point() const { return critical_; }
  bool degenerate() const { return degenerate_; }
  double t() const { return t_; }

  Complex m0(Complex z) const;
  // Subordinated transform m_t(z), Im z > 0.
  Complex m(Complex z) const;

 private:
  std::vector<double> spectrum_;
  double t_;
  double edge_ = 0.0;
  double critical_ = 0.0;
  bool degenerate_ = false;
};

FreeConvolution free_convolution_edge(std::vector<double> spectrum, double t);

}  // namespace corrmat
