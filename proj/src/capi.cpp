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

#include "corrmat/corrmat.h"

#include <algorithm>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "corrmat/config.hpp"
#include "corrmat/dyson.hpp"
#include "corrmat/edgestats.hpp"
#include "corrmat/io.hpp"
#include "corrmat/model.hpp"
#include "corrmat/pipeline.hpp"
#include "corrmat/sampler.hpp"

struct cm_profile {
  corrmat::CorrelationProfile value;
};

struct cm_ensemble {
  corrmat::Ensemble value;
};

struct cm_matrix {
  corrmat::SampleMatrix value;
};

struct cm_density {
  corrmat::SpectralDensity value;
};

struct cm_experiment {
  corrmat::ExperimentConfig config;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

cm_status record(cm_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
cm_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return CM_OK;
  } catch (const corrmat::Error& e) {
    return record(static_cast<cm_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(CM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(CM_ERR_INTERNAL, std::string("internal error: ") + e.what());
  } catch (...) {
    return record(CM_ERR_INTERNAL, "internal error");
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr)
    corrmat::fail(corrmat::ErrorCode::kParameter, std::string(name) + " must not be null");
}

corrmat::ProfileKind to_kind(cm_profile_kind kind) {
  switch (kind) {
    case CM_PROFILE_GOE: return corrmat::ProfileKind::kGoe;
    case CM_PROFILE_POWERLAW_TI: return corrmat::ProfileKind::kPowerLawTI;
    case CM_PROFILE_POWERLAW_MODULATED: return corrmat::ProfileKind::kPowerLawModulated;
  }
  corrmat::fail(corrmat::ErrorCode::kParameter, "unknown profile kind");
}

}  // namespace

extern "C" {

const char* cm_version(void) { return corrmat::kVersion; }

const char* cm_status_string(cm_status status) {
  if (status == CM_OK) return "ok";
  if (status == CM_ERR_INTERNAL) return "internal";
  if (status >= CM_ERR_PARAMETER && status <= CM_ERR_INPUT)
    return corrmat::error_code_name(static_cast<corrmat::ErrorCode>(status));
  return "unknown";
}

const char* cm_last_error(void) { return g_last_error.c_str(); }

cm_status cm_profile_create(cm_profile_kind kind, double d, double c1, double c2, double eps_mod,
                            double alpha, cm_profile** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto p = std::make_unique<cm_profile>(
        cm_profile{corrmat::CorrelationProfile::create(to_kind(kind), d, c1, c2, eps_mod, alpha)});
    *out = p.release();
  });
}

void cm_profile_destroy(cm_profile* profile) { delete profile; }

cm_status cm_profile_eval_xi(const cm_profile* profile, long long i, long long j, long long k,
                             long long l, int N, double* out) {
  return guarded([&] {
    need(profile, "profile");
    need(out, "out");
    *out = corrmat::eval_xi(profile->value, i, j, k, l, N);
  });
}

cm_status cm_ensemble_create(const cm_profile* profile, int N, cm_ensemble** out) {
  return guarded([&] {
    need(profile, "profile");
    need(out, "out");
    *out = nullptr;
    *out = new cm_ensemble{corrmat::Ensemble(profile->value, N)};
  });
}

void cm_ensemble_destroy(cm_ensemble* ensemble) { delete ensemble; }

cm_status cm_ensemble_sample(const cm_ensemble* ensemble, uint64_t seed, uint64_t trial,
                             cm_matrix** out) {
  return guarded([&] {
    need(ensemble, "ensemble");
    need(out, "out");
    *out = nullptr;
    *out = new cm_matrix{ensemble->value.sample(seed, trial)};
  });
}

cm_status cm_goe_sample(int N, uint64_t seed, uint64_t trial, cm_matrix** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new cm_matrix{corrmat::sample_goe(N, seed, trial)};
  });
}

int cm_matrix_dim(const cm_matrix* m) { return m ? m->value.N : 0; }

cm_status cm_matrix_get(const cm_matrix* m, int i, int j, double* out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    const int n = m->value.N;
    corrmat::require(i >= 0 && i < n && j >= 0 && j < n, corrmat::ErrorCode::kDimension,
                     "index out of range");
    *out = m->value.entries(i, j);
  });
}

cm_status cm_matrix_copy(const cm_matrix* m, double* buffer, size_t len) {
  return guarded([&] {
    need(m, "matrix");
    need(buffer, "buffer");
    const size_t n = static_cast<size_t>(m->value.N);
    corrmat::require(len >= n * n, corrmat::ErrorCode::kSize, "buffer shorter than N * N");
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        buffer[i * n + j] = m->value.entries(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(j));
  });
}

cm_status cm_matrix_eigenvalues(const cm_matrix* m, double* buffer, size_t len) {
  return guarded([&] {
    need(m, "matrix");
    need(buffer, "buffer");
    corrmat::require(len >= static_cast<size_t>(m->value.N), corrmat::ErrorCode::kSize,
                     "buffer shorter than N");
    const std::vector<double> ev = corrmat::eigenvalues(m->value);
    std::copy(ev.begin(), ev.end(), buffer);
  });
}

cm_status cm_matrix_write(const cm_matrix* m, const char* path) {
  return guarded([&] {
    need(m, "matrix");
    need(path, "path");
    corrmat::write_matrix(path, m->value);
  });
}

cm_status cm_matrix_read(const char* path, cm_matrix** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new cm_matrix{corrmat::read_matrix(path)};
  });
}

void cm_matrix_destroy(cm_matrix* m) { delete m; }

cm_status cm_dyson_solve(const cm_profile* profile, double z_re, double z_im, int K_s, int K_u,
                         double tol, double* m_re, double* m_im, double* residual) {
  return guarded([&] {
    need(profile, "profile");
    need(m_re, "m_re");
    need(m_im, "m_im");
    const corrmat::DysonResult r =
        corrmat::solve_dyson(profile->value, corrmat::Complex(z_re, z_im), K_s, K_u, tol);
    const corrmat::Complex m = corrmat::stieltjes(r.g);
    *m_re = m.real();
    *m_im = m.imag();
    if (residual) *residual = r.residual;
  });
}

cm_status cm_density_compute(const cm_profile* profile, double E_min, double E_max,
                             double E_step, double eta, int K_u, cm_density** out) {
  return guarded([&] {
    need(profile, "profile");
    need(out, "out");
    *out = nullptr;
    corrmat::DensityOptions opts;
    opts.K_u = K_u;
    *out = new cm_density{corrmat::density_and_edges(
        profile->value, corrmat::energy_grid(E_min, E_max, E_step), eta, opts)};
  });
}

cm_status cm_density_edges(const cm_density* dens, double* E_L, double* E_R, double* c_L,
                           double* c_R) {
  return guarded([&] {
    need(dens, "density");
    if (E_L) *E_L = dens->value.E_L;
    if (E_R) *E_R = dens->value.E_R;
    if (c_L) *c_L = dens->value.c_L;
    if (c_R) *c_R = dens->value.c_R;
  });
}

size_t cm_density_size(const cm_density* dens) { return dens ? dens->value.energies.size() : 0; }

cm_status cm_density_values(const cm_density* dens, double* energies, double* rho, size_t len) {
  return guarded([&] {
    need(dens, "density");
    const size_t n = dens->value.energies.size();
    corrmat::require(len >= n, corrmat::ErrorCode::kSize, "buffer shorter than the grid");
    if (energies) std::copy(dens->value.energies.begin(), dens->value.energies.end(), energies);
    if (rho) std::copy(dens->value.rho.begin(), dens->value.rho.end(), rho);
  });
}

void cm_density_destroy(cm_density* dens) { delete dens; }

cm_status cm_ks_distance(const double* a, size_t na, const double* b, size_t nb, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = corrmat::ks_distance(std::vector<double>(a, a + na), std::vector<double>(b, b + nb));
  });
}

cm_status cm_experiment_load(const char* path, cm_experiment** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new cm_experiment{corrmat::ExperimentConfig::load(path), {}};
  });
}

cm_status cm_experiment_set(cm_experiment* exp, const char* assignment) {
  return guarded([&] {
    need(exp, "experiment");
    need(assignment, "assignment");
    exp->config.apply_override(assignment);
  });
}

cm_status cm_experiment_set_seed(cm_experiment* exp, uint64_t seed) {
  return guarded([&] {
    need(exp, "experiment");
    exp->config.seed = seed;
  });
}

cm_status cm_experiment_set_threads(cm_experiment* exp, int threads) {
  return guarded([&] {
    need(exp, "experiment");
    corrmat::require(threads >= 0, corrmat::ErrorCode::kParameter, "threads must be >= 0");
    exp->config.threads = threads;
  });
}

cm_status cm_experiment_set_output_dir(cm_experiment* exp, const char* dir) {
  return guarded([&] {
    need(exp, "experiment");
    need(dir, "dir");
    corrmat::require(*dir != '\0', corrmat::ErrorCode::kParameter,
                     "output directory must not be empty");
    exp->config.output.dir = dir;
  });
}

cm_status cm_experiment_run(cm_experiment* exp, const char* subcommand, int* exit_code) {
  cm_status status = CM_OK;
  const cm_status guard = guarded([&] {
    need(exp, "experiment");
    need(subcommand, "subcommand");
    need(exit_code, "exit_code");
    exp->summary.clear();
    const corrmat::RunOutcome r = corrmat::run_experiment(subcommand, exp->config);
    *exit_code = r.exit_code;
    if (r.exit_code == corrmat::kExitError) {
      status = r.error_status > 0 ? static_cast<cm_status>(r.error_status) : CM_ERR_INTERNAL;
      g_last_error = r.error;
      return;
    }
    exp->summary = r.summary_json;
  });
  if (guard != CM_OK) {
    if (exit_code) *exit_code = corrmat::kExitError;
    return guard;
  }
  return status;
}

const char* cm_experiment_summary_json(const cm_experiment* exp) {
  return exp ? exp->summary.c_str() : "";
}

void cm_experiment_destroy(cm_experiment* exp) { delete exp; }

}  // extern "C"
