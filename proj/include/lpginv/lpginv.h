// Copyright 2026 The lpginv Authors. All Rights Reserved.
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

/* C interface to lpginv. Every object is an opaque handle owned by the
 * caller and released with the matching *_destroy function. Functions
 * return an lpginv_status; on failure lpginv_last_error() describes the
 * problem (the message is per thread and valid until the next call). */

#ifndef LPGINV_LPGINV_H
#define LPGINV_LPGINV_H

#include <stddef.h>
#include <stdint.h>

#if defined(LPGINV_BUILDING_LIBRARY)
#define LPGINV_API __attribute__((visibility("default")))
#else
#define LPGINV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lpginv_status {
  LPGINV_OK = 0,
  LPGINV_ERR_DIMENSION = 1,
  LPGINV_ERR_SINGULAR = 2,
  LPGINV_ERR_DOMAIN = 3,
  LPGINV_ERR_GUARD = 4,
  LPGINV_ERR_INCONSISTENT = 5,
  LPGINV_ERR_NUMERICAL = 6,
  LPGINV_ERR_IO = 7,
  LPGINV_ERR_PARSE = 8,
  LPGINV_ERR_INVALID_ARGUMENT = 9,
  LPGINV_ERR_INTERNAL = 10
} lpginv_status;

/* Per-column solve outcome, mirrors the C++ SolveStatus. */
typedef enum lpginv_solve_status {
  LPGINV_SOLVE_CONVERGED = 0,
  LPGINV_SOLVE_MAX_ITERS = 1,
  LPGINV_SOLVE_CERTIFIED_UNIQUE = 2,
  LPGINV_SOLVE_CERTIFIED_NONUNIQUE_RISK = 3,
  LPGINV_SOLVE_NOT_CERTIFIED = 4
} lpginv_solve_status;

typedef struct lpginv_matrix lpginv_matrix;
typedef struct lpginv_geninv lpginv_geninv;

typedef struct lpginv_solver_config {
  size_t max_iters;
  double tol_primal;
  double tol_dual;
  double splitting_step;
  double sparsity_rel_threshold;
  double certificate_margin;
  size_t refine_interval;
  size_t refine_pivot_budget;
} lpginv_solver_config;

typedef struct lpginv_theory_query {
  double p;
  double delta;
  size_t n; /* 0 selects the n -> infinity limit */
  size_t mc_samples;
  uint64_t seed;
  int theta_control_variate;
  int pathwise_slope; /* finite n: exact sample-mean slope, regula falsi */
} lpginv_theory_query;

typedef struct lpginv_theory_result {
  double p;
  double delta;
  size_t n; /* 0 for the limit */
  double t_star;
  int t_star_normalized; /* t_star is t* / sqrt(n) */
  double d_at_tstar;
  double alpha_star;
  double alpha_star_sq;
  double stderr_d;
  int monte_carlo;
  int unverified_hypothesis;
} lpginv_theory_result;

/* Errors. */
LPGINV_API const char* lpginv_last_error(void);
LPGINV_API const char* lpginv_status_name(lpginv_status status);
LPGINV_API const char* lpginv_version(void);
/* Releases strings returned through char** out parameters. */
LPGINV_API void lpginv_string_free(char* text);

/* Matrices (row-major, finite entries). */
LPGINV_API lpginv_status lpginv_matrix_create(size_t rows, size_t cols,
                                              const double* data,
                                              lpginv_matrix** out);
LPGINV_API lpginv_status lpginv_matrix_gaussian(size_t rows, size_t cols,
                                                uint64_t seed,
                                                lpginv_matrix** out);
LPGINV_API lpginv_status lpginv_matrix_load_csv(const char* path,
                                                lpginv_matrix** out);
LPGINV_API lpginv_status lpginv_matrix_save_csv(const lpginv_matrix* m,
                                                const char* path);
LPGINV_API size_t lpginv_matrix_rows(const lpginv_matrix* m);
LPGINV_API size_t lpginv_matrix_cols(const lpginv_matrix* m);
LPGINV_API const double* lpginv_matrix_data(const lpginv_matrix* m);
LPGINV_API void lpginv_matrix_destroy(lpginv_matrix* m);

/* Solver configuration. */
LPGINV_API void lpginv_solver_config_default(lpginv_solver_config* config);

/* min ||x||_p subject to A x = b. x_out holds cols(A) entries. Any of
 * objective, status may be NULL. */
LPGINV_API lpginv_status lpginv_solve_bp(const lpginv_matrix* a, const double* b,
                                         double p,
                                         const lpginv_solver_config* config,
                                         double* x_out, double* objective,
                                         lpginv_solve_status* status);

/* Generalized inverses. config may be NULL for the defaults. */
LPGINV_API lpginv_status lpginv_mpp(const lpginv_matrix* a,
                                    const lpginv_solver_config* config,
                                    lpginv_geninv** out);
LPGINV_API lpginv_status lpginv_spinv(const lpginv_matrix* a,
                                      const lpginv_solver_config* config,
                                      lpginv_geninv** out);
LPGINV_API lpginv_status lpginv_ginv_p(const lpginv_matrix* a, double p,
                                       const lpginv_solver_config* config,
                                       lpginv_geninv** out);
LPGINV_API lpginv_status lpginv_submatrix_inverse(const lpginv_matrix* a,
                                                  uint64_t seed,
                                                  const lpginv_solver_config* config,
                                                  lpginv_geninv** out);

/* Copy of X (n x m). */
LPGINV_API lpginv_status lpginv_geninv_matrix(const lpginv_geninv* g,
                                              lpginv_matrix** out);
LPGINV_API size_t lpginv_geninv_total_support(const lpginv_geninv* g);
LPGINV_API double lpginv_geninv_frobenius_sq(const lpginv_geninv* g);
LPGINV_API double lpginv_geninv_entrywise_l1(const lpginv_geninv* g);
LPGINV_API int lpginv_geninv_nonunique_risk(const lpginv_geninv* g);
LPGINV_API lpginv_status lpginv_geninv_to_json(const lpginv_geninv* g, char** out);
/* Checks AXA = A, AX = I and the recorded norms; all_passed may be NULL. */
LPGINV_API lpginv_status lpginv_validate(const lpginv_matrix* a,
                                         const lpginv_geninv* g,
                                         const lpginv_solver_config* config,
                                         int* all_passed, char** report_json);
LPGINV_API void lpginv_geninv_destroy(lpginv_geninv* g);

/* Theory. */
LPGINV_API void lpginv_theory_query_default(lpginv_theory_query* query);
LPGINV_API lpginv_status lpginv_alpha_star(const lpginv_theory_query* query,
                                           lpginv_theory_result* out);
LPGINV_API lpginv_status lpginv_theory_result_to_json(const lpginv_theory_result* r,
                                                      char** out);

/* Experiments. spec_json mirrors the ExperimentSpec fields (name, n_values,
 * delta_values, p, trials, base_seed, output_dir, m, repetitions, draws,
 * finite_n_theory, mc_samples, max_iters). */
LPGINV_API lpginv_status lpginv_experiment_run(const char* spec_json,
                                               char** summary_json);

/* Acceptance suite. progress (optional) receives one line per criterion. */
typedef void (*lpginv_progress_fn)(const char* line, void* user);
LPGINV_API lpginv_status lpginv_verify(uint64_t seed, lpginv_progress_fn progress,
                                       void* user, int* all_passed,
                                       char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* LPGINV_LPGINV_H */
