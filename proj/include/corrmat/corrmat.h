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

#ifndef CORRMAT_CORRMAT_H_
#define CORRMAT_CORRMAT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(CORRMAT_BUILDING_LIBRARY)
#define CM_API __attribute__((visibility("default")))
#else
#define CM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cm_status {
  CM_OK = 0,
  CM_ERR_PARAMETER = 1,
  CM_ERR_DIMENSION = 2,
  CM_ERR_DOMAIN = 3,
  CM_ERR_CONVERGENCE = 4,
  CM_ERR_SINGULAR = 5,
  CM_ERR_NUMERIC = 6,
  CM_ERR_IO = 7,
  CM_ERR_PARSE = 8,
  CM_ERR_UNSUPPORTED = 9,
  CM_ERR_RESOLUTION = 10,
  CM_ERR_PRECONDITION = 11,
  CM_ERR_BRACKETING = 12,
  CM_ERR_SIZE = 13,
  CM_ERR_ILL_POSED = 14,
  CM_ERR_INPUT = 15,
  CM_ERR_INTERNAL = 99
} cm_status;

typedef enum cm_profile_kind {
  CM_PROFILE_GOE = 0,
  CM_PROFILE_POWERLAW_TI = 1,
  CM_PROFILE_POWERLAW_MODULATED = 2
} cm_profile_kind;

typedef struct cm_profile cm_profile;
typedef struct cm_ensemble cm_ensemble;
typedef struct cm_matrix cm_matrix;
typedef struct cm_density cm_density;
typedef struct cm_experiment cm_experiment;

CM_API const char* cm_version(void);
CM_API const char* cm_status_string(cm_status status);
/* Message of the last failed call on this thread; "" when none. */
CM_API const char* cm_last_error(void);

/* alpha = NAN selects the default (2 + d) / 2. */
CM_API cm_status cm_profile_create(cm_profile_kind kind, double d, double c1, double c2,
                                   double eps_mod, double alpha, cm_profile** out);
CM_API void cm_profile_destroy(cm_profile* profile);
CM_API cm_status cm_profile_eval_xi(const cm_profile* profile, long long i, long long j,
                                    long long k, long long l, int N, double* out);

CM_API cm_status cm_ensemble_create(const cm_profile* profile, int N, cm_ensemble** out);
CM_API void cm_ensemble_destroy(cm_ensemble* ensemble);
CM_API cm_status cm_ensemble_sample(const cm_ensemble* ensemble, uint64_t seed, uint64_t trial,
                                    cm_matrix** out);
CM_API cm_status cm_goe_sample(int N, uint64_t seed, uint64_t trial, cm_matrix** out);

CM_API int cm_matrix_dim(const cm_matrix* m);
CM_API cm_status cm_matrix_get(const cm_matrix* m, int i, int j, double* out);
/* Row-major copy into buffer of length N * N. */
CM_API cm_status cm_matrix_copy(const cm_matrix* m, double* buffer, size_t len);
/* Ascending eigenvalues into buffer of length N. */
CM_API cm_status cm_matrix_eigenvalues(const cm_matrix* m, double* buffer, size_t len);
CM_API cm_status cm_matrix_write(const cm_matrix* m, const char* path);
CM_API cm_status cm_matrix_read(const char* path, cm_matrix** out);
CM_API void cm_matrix_destroy(cm_matrix* m);

/* m(z) of the solution on a K_s x K_u grid; K_s = 0 picks the natural size. */
CM_API cm_status cm_dyson_solve(const cm_profile* profile, double z_re, double z_im, int K_s,
                                int K_u, double tol, double* m_re, double* m_im,
                                double* residual);

CM_API cm_status cm_density_compute(const cm_profile* profile, double E_min, double E_max,
                                    double E_step, double eta, int K_u, cm_density** out);
CM_API cm_status cm_density_edges(const cm_density* dens, double* E_L, double* E_R, double* c_L,
                                  double* c_R);
CM_API size_t cm_density_size(const cm_density* dens);
CM_API cm_status cm_density_values(const cm_density* dens, double* energies, double* rho,
                                   size_t len);
CM_API void cm_density_destroy(cm_density* dens);

CM_API cm_status cm_ks_distance(const double* a, size_t na, const double* b, size_t nb,
                                double* out);

/* Experiments: a loaded config plus overrides, run by subcommand name. */
CM_API cm_status cm_experiment_load(const char* path, cm_experiment** out);
CM_API cm_status cm_experiment_set(cm_experiment* exp, const char* assignment);
CM_API cm_status cm_experiment_set_seed(cm_experiment* exp, uint64_t seed);
/* 0 = auto */
CM_API cm_status cm_experiment_set_threads(cm_experiment* exp, int threads);
CM_API cm_status cm_experiment_set_output_dir(cm_experiment* exp, const char* dir);
/* exit_code receives 0 (all checks pass), 2 (a check failed) or 1 (error).
   The status is CM_OK unless the run hit an error. */
CM_API cm_status cm_experiment_run(cm_experiment* exp, const char* subcommand, int* exit_code);
/* Summary of the last run; "" before the first run or after an error. */
CM_API const char* cm_experiment_summary_json(const cm_experiment* exp);
CM_API void cm_experiment_destroy(cm_experiment* exp);

#ifdef __cplusplus
}
#endif

#endif  // CORRMAT_CORRMAT_H_
