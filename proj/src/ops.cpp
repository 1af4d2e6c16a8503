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

#include "corrmat/ops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "corrmat/fft.hpp"

namespace corrmat {
namespace {

ComplexMatrix apply_S_dense(const ComplexMatrix& M, const RealizedCovariance& cov) {
  const int N = cov.N();
  const double c1 = std::sqrt(cov.decay_constant());
  const double d = cov.decay_order();
  ComplexMatrix out(N, N);
#pragma omp parallel for schedule(static) if (N >= 32)
  for (int q = 0; q < N; ++q) {
    for (int p = 0; p < N; ++p) {
      const int dist = torus_distance(p, q, N);
      Complex acc = 0.0;
      for (int b = 0; b < N; ++b)
        for (int a = 0; a < N; ++a) acc += clamp_xi(cov.xi(p, a, b, q), dist, c1, d) * M(a, b);
      out(p, q) = acc / static_cast<double>(N);
    }
  }
  return out;
}

ComplexMatrix apply_S_stationary(const ComplexMatrix& M, const RealizedCovariance& cov) {
  const int N = cov.N();
  const double inv_n = 1.0 / N;
  const RealMatrix& pk = cov.pair_kernel();
  const double c2sq = cov.c2() * cov.c2();
  const size_t n2 = static_cast<size_t>(N) * N;

  // Transposed pairing: (1/N) sum_{y,w} pk(y, w) M(q - w, p + y), a 2D
  // cross-correlation of M^T against pk(y, -w).
  std::vector<Complex> kern(n2), trans(n2);
  for (int y = 0; y < N; ++y)
    for (int w = 0; w < N; ++w) {
      kern[static_cast<size_t>(y) * N + w] = pk(y, wrap_index(-w, N));
      trans[static_cast<size_t>(y) * N + w] = M(w, y);
    }
  fft2d(kern, N, N);
  fft2d(trans, N, N);
  for (size_t t = 0; t < n2; ++t) trans[t] *= std::conj(kern[t]);
  fft2d(trans, N, N, /*inverse=*/true);

  // Diagonal sums t(o) = sum_a M(a, a + o) for the direct pairing.
  std::vector<Complex> diag_sum(N, 0.0);
  for (int o = 0; o < N; ++o)
    for (int a = 0; a < N; ++a) diag_sum[o] += M(a, wrap_index(a + o, N));
  const Complex trace = M.trace();

  ComplexMatrix out(N, N);
  const double fft_scale = inv_n / static_cast<double>(n2);
  for (int q = 0; q < N; ++q)
    for (int p = 0; p < N; ++p) {
      const int delta = wrap_index(q - p, N);
      Complex direct = 0.0;
      for (int o = 0; o < N; ++o) direct += pk(delta, o) * diag_sum[o];
      Complex v = trans[static_cast<size_t>(p) * N + q] * fft_scale + direct * inv_n;
      v += c2sq * inv_n * (M(q, p) + (p == q ? trace : Complex(0.0)));
      out(p, q) = v;
    }

  // Exact correction where the clamp is active. With y = b - p, w = q - a,
  // delta = q - p, the tensor entry is a function of (y, w, delta) and
  // M(a, b) = M(p + delta - w, p + y) runs along the diagonal with offset
  // o = y + w - delta, so the inner loop over p is contiguous in the
  // diagonal layout diag(o, r) = M(r, r + o).
  std::vector<Complex> diag(n2);
  for (int o = 0; o < N; ++o)
    for (int r = 0; r < N; ++r) diag[static_cast<size_t>(o) * N + r] = M(r, wrap_index(r + o, N));

  const double c1 = std::sqrt(cov.decay_constant());
  const double d = cov.decay_order();
  std::vector<std::vector<Complex>> correction(N);
#pragma omp parallel for schedule(dynamic)
  for (int delta = 0; delta < N; ++delta) {
    const int dist = torus_distance(delta, 0, N);
    const double bound = c1 * c1 * std::pow(1.0 + dist, -d);
    std::vector<Complex> acc;
    for (int y = 0; y < N; ++y) {
      for (int w = 0; w < N; ++w) {
        const int o = wrap_index(y + w - delta, N);
        double xi = pk(y, w) + pk(delta, o);
        if (y == 0 && w == 0) xi += c2sq;
        if (delta == 0 && o == 0) xi += c2sq;
        if (std::abs(xi) <= bound) continue;
        const double excess = xi - clamp_xi(xi, dist, c1, d);
        if (acc.empty()) acc.assign(N, 0.0);
        const Complex* row = &diag[static_cast<size_t>(o) * N];
        const int shift = wrap_index(delta - w, N);
        // acc[p] += excess * row[(p + shift) mod N]
        const int split = N - shift;
        for (int p = 0; p < split; ++p) acc[p] += excess * row[p + shift];
        for (int p = split; p < N; ++p) acc[p] += excess * row[p + shift - N];
      }
    }
    correction[delta] = std::move(acc);
  }
  for (int delta = 0; delta < N; ++delta) {
    if (correction[delta].empty()) continue;
    for (int p = 0; p < N; ++p)
      out(p, wrap_index(p + delta, N)) -= correction[delta][p] * inv_n;
  }
  return out;
}

}  // namespace

double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

double operator_norm(const RealMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<RealMatrix> svd(a);
  return svd.singularValues()(0);
}

ComplexMatrix apply_S(const ComplexMatrix& M, const RealizedCovariance& cov) {
  const int N = cov.N();
  require(M.rows() == N && M.cols() == N, ErrorCode::kDimension,
          "S expects an N x N matrix matching the covariance");
  return cov.stationary() ? apply_S_stationary(M, cov) : apply_S_dense(M, cov);
}

FMapResult f_map(const ComplexMatrix& M, Complex z, const RealizedCovariance& cov) {
  require(z.imag() > 0.0, ErrorCode::kDomain, "F needs Im z > 0");
  const int N = cov.N();
  ComplexMatrix a = -apply_S(M, cov);
  a.diagonal().array() -= z;
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const double rcond = lu.rcond();
  FMapResult result;
  result.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(result.condition <= 1e12)) {
    fail(ErrorCode::kSingular,
         "-z - S(M) is numerically singular (condition estimate " +
             std::to_string(result.condition) + ")");
  }
  result.value = lu.solve(ComplexMatrix::Identity(N, N));
  return result;
}

double GreenFunction::ward_defect() const {
  const double eta = z.imag();
  double worst = 0.0;
  for (int i = 0; i < N(); ++i) {
    const double lhs = entries.row(i).squaredNorm();
    const double rhs = entries(i, i).imag() / eta;
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
  }
  return worst;
}

Resolvent::Resolvent(const RealMatrix& H) {
  require(H.rows() == H.cols() && H.rows() > 0, ErrorCode::kDimension,
          "resolvent needs a nonempty square matrix");
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(H);
  require(eig.info() == Eigen::Success, ErrorCode::kNumeric, "eigensolver failed");
  eigenvalues_ = std::make_shared<const RealVector>(eig.eigenvalues());
  eigenvectors_ = std::make_shared<const RealMatrix>(eig.eigenvectors());
}

GreenFunction Resolvent::at(Complex z) const {
  require(z.imag() > 0.0, ErrorCode::kDomain, "Green function needs Im z > 0");
  const RealVector& lambda = *eigenvalues_;
  const RealMatrix& q = *eigenvectors_;
  const Eigen::Index n = lambda.size();
  RealVector re(n), im(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex w = 1.0 / (lambda(k) - z);
    re(k) = w.real();
    im(k) = w.imag();
  }
  RealMatrix g_re = (q * re.asDiagonal()) * q.transpose();
  RealMatrix g_im = (q * im.asDiagonal()) * q.transpose();

  GreenFunction g;
  g.z = z;
  g.spectrum = eigenvalues_;
  g.entries.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      g.entries(i, j) =
          Complex(0.5 * (g_re(i, j) + g_re(j, i)), 0.5 * (g_im(i, j) + g_im(j, i)));
  g.gamma_cap = std::max(1.0, g.entries.cwiseAbs().maxCoeff());
  g.gamma_im = std::max(z.imag(), g.entries.diagonal().imag().maxCoeff());
  return g;
}

GreenFunction greens_function(const SampleMatrix& H, Complex z) { return Resolvent(H).at(z); }

ResidualResult residual(const ComplexMatrix& G, Complex z, const RealizedCovariance& cov) {
  ComplexMatrix inner = -apply_S(G, cov);
  inner.diagonal().array() -= z;
  ResidualResult r;
  r.R = G * inner;
  r.R.diagonal().array() -= 1.0;
  r.r_inf = max_abs(r.R);
  return r;
}

ResidualResult residual(const GreenFunction& G, const RealizedCovariance& cov) {
  require(G.N() == cov.N(), ErrorCode::kDimension, "Green function and covariance differ in N");
  return residual(G.entries, G.z, cov);
}

ComplexMatrix discretize(const TorusFunction& h, int N) {
  require(N >= 1, ErrorCode::kParameter, "N must be positive");
  require(h.K_u >= N, ErrorCode::kResolution,
          "K_u = " + std::to_string(h.K_u) + " cannot resolve " + std::to_string(N) +
              " Fourier modes");
  require(h.K_s >= 1 && h.values.rows() == h.K_s && h.values.cols() == h.K_u,
          ErrorCode::kDimension, "torus function grid is inconsistent");
  const int ks = h.K_s, ku = h.K_u;
  ComplexMatrix coef(ks, ku);
  std::vector<Complex> row(ku);
  for (int m = 0; m < ks; ++m) {
    for (int l = 0; l < ku; ++l) row[l] = h.values(m, l);
    fft1d(row);
    for (int l = 0; l < ku; ++l) coef(m, l) = row[l] / static_cast<double>(ku);
  }
  ComplexMatrix out(N, N);
  for (int i = 0; i < N; ++i) {
    const long long pos = static_cast<long long>(i) * ks;
    const int m0 = static_cast<int>(pos / N);
    const double frac = static_cast<double>(pos % N) / N;
    const int m1 = (m0 + 1) % ks;
    for (int j = 0; j < N; ++j) {
      const int kidx = wrap_index(canonical_offset(j - i, N), ku);
      Complex v = coef(m0, kidx);
      if (frac > 0.0) v = (1.0 - frac) * v + frac * coef(m1, kidx);
      out(i, j) = v;
    }
  }
  return out;
}

TorusFunction embed(const ComplexMatrix& A, int K_u) {
  require(A.rows() == A.cols() && A.rows() > 0, ErrorCode::kDimension,
          "embed needs a square matrix");
  const int N = static_cast<int>(A.rows());
  if (K_u == 0) K_u = N;
  require(K_u >= N, ErrorCode::kResolution, "embedding grid must have K_u >= N");
  TorusFunction f(N, K_u);
  std::vector<Complex> row(K_u);
  for (int i = 0; i < N; ++i) {
    std::fill(row.begin(), row.end(), Complex(0.0));
    for (int j = 0; j < N; ++j) {
      const int k = canonical_offset(j - i, N);
      row[wrap_index(k, K_u)] = A(i, j);
    }
    fft1d(row, /*inverse=*/true);
    for (int l = 0; l < K_u; ++l) f.values(i, l) = row[l];
  }
  return f;
}

}  // namespace corrmat
