// Copyright 2026 The ppack Authors
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

/* C interface to the ppack rounding library.
 *
 * Every function returns a ppack_status; on failure ppack_last_error() holds a
 * message for the calling thread until its next failing call. Objects are
 * opaque handles released with the matching *_free function. Strings returned
 * through char** are heap-allocated and released with ppack_string_free. */

#ifndef PPACK_PPACK_H_
#define PPACK_PPACK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PPACK_API __declspec(dllexport)
#else
#define PPACK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ppack_status {
  PPACK_OK = 0,
  PPACK_ERR_INVALID_ARGUMENT = 1,
  PPACK_ERR_DIMENSION_MISMATCH = 2,
  PPACK_ERR_INFEASIBLE = 3,
  PPACK_ERR_IO = 4,
  PPACK_ERR_PARSE = 5,
  PPACK_ERR_BUDGET_EXCEEDED = 6,
  PPACK_ERR_OVERFLOW = 7,
  PPACK_ERR_GUARD_FAILED = 8,
  PPACK_ERR_INTERNAL = 9
} ppack_status;

typedef struct ppack_instance ppack_instance;
typedef struct ppack_point ppack_point;
typedef struct ppack_outcome ppack_outcome;
typedef struct ppack_walk ppack_walk;

PPACK_API const char* ppack_last_error(void);
PPACK_API const char* ppack_version(void);
PPACK_API const char* ppack_status_name(ppack_status status);
PPACK_API void ppack_string_free(char* s);

/* ---- instances ---- */

/* Row j holds indices[row_offsets[j] .. row_offsets[j+1]). weights may be
 * NULL for unit weights. lenient != 0 admits rows outside [2, n-1]. */
PPACK_API ppack_status ppack_instance_create(size_t n_vars, size_t num_rows,
                                             const size_t* row_offsets,
                                             const uint32_t* indices,
                                             const double* rhs,
                                             const double* weights, int lenient,
                                             ppack_instance** out);
PPACK_API ppack_status ppack_instance_load(const char* path, ppack_instance** out);
PPACK_API ppack_status ppack_instance_save(const ppack_instance* inst, const char* path);
PPACK_API void ppack_instance_free(ppack_instance* inst);
PPACK_API size_t ppack_instance_num_rows(const ppack_instance* inst);
PPACK_API size_t ppack_instance_num_vars(const ppack_instance* inst);
PPACK_API size_t ppack_instance_max_row_size(const ppack_instance* inst);
PPACK_API double ppack_instance_max_rhs(const ppack_instance* inst);
PPACK_API uint64_t ppack_instance_fingerprint(const ppack_instance* inst);

/* ---- fractional points ---- */

PPACK_API ppack_status ppack_point_create(const double* values, size_t n, ppack_point** out);
PPACK_API ppack_status ppack_point_load(const char* path, ppack_point** out);
PPACK_API ppack_status ppack_point_save(const ppack_point* point, const char* path);
PPACK_API void ppack_point_free(ppack_point* point);
PPACK_API size_t ppack_point_size(const ppack_point* point);
PPACK_API const double* ppack_point_values(const ppack_point* point);
PPACK_API int ppack_point_slack_checked(const ppack_point* point);

/* Returns PPACK_ERR_INFEASIBLE with the offending rows in the error message.
 * Optional outputs may be NULL. */
PPACK_API ppack_status ppack_validate(const ppack_instance* inst, const ppack_point* point,
                                      double* max_row_sum, size_t* num_offending,
                                      ppack_point** checked);
PPACK_API ppack_status ppack_scale_to_feasible(const ppack_instance* inst,
                                               const ppack_point* point, ppack_point** out);
PPACK_API ppack_status ppack_objective(const ppack_instance* inst, const ppack_point* point,
                                       double* out);

/* ---- generators ---- */

typedef struct ppack_gen_spec {
  const char* family; /* k-sparse-exact | k-sparse-bernoulli | hypergraph-bmatch | butterfly */
  size_t m;           /* rows; hyperedges for hypergraph-bmatch */
  size_t n;           /* columns; vertices for hypergraph-bmatch */
  size_t k;
  double b;
  double prob;   /* 0: k / n */
  size_t inputs; /* butterfly width */
  uint64_t seed;
} ppack_gen_spec;

PPACK_API void ppack_gen_spec_init(ppack_gen_spec* spec);

/* *point_out is set to NULL for families without a fractional point.
 * point_out and dropped_rows may be NULL. */
PPACK_API ppack_status ppack_generate(const ppack_gen_spec* spec, ppack_instance** out,
                                      ppack_point** point_out, size_t* dropped_rows);

/* ---- walk ---- */

typedef struct ppack_walk_config {
  double gamma;            /* <= 0: delta / ln n */
  double delta;            /* <= 0: 1 / (ln n)^2 */
  double scale;            /* >= 1 */
  int64_t stop_unfixed;    /* < 0: ceil(ln m) */
  uint64_t max_steps;      /* 0: 10^7 */
  uint64_t seed;
} ppack_walk_config;

PPACK_API void ppack_walk_config_init(ppack_walk_config* config);

/* trace_path may be NULL; otherwise a CSV trace is written there. */
PPACK_API ppack_status ppack_walk_run(const ppack_instance* inst, const ppack_point* point,
                                      const ppack_walk_config* config,
                                      const char* trace_path, ppack_walk** out);
PPACK_API void ppack_walk_free(ppack_walk* walk);
PPACK_API uint64_t ppack_walk_steps(const ppack_walk* walk);
PPACK_API int ppack_walk_incomplete(const ppack_walk* walk);
PPACK_API size_t ppack_walk_max_unfixed(const ppack_walk* walk);
PPACK_API double ppack_walk_max_abs_error(const ppack_walk* walk);
PPACK_API ppack_status ppack_walk_sparsified(const ppack_walk* walk, ppack_point** out);
/* Summary with the effective config and per-phase records. */
PPACK_API ppack_status ppack_walk_json(const ppack_walk* walk, char** json);

/* ---- rounding ---- */

typedef struct ppack_round_config {
  const char* method; /* rt | greedy | walk-lll | damped */
  int t;              /* 0: auto */
  double alpha;
  double epsilon;
  double B;           /* <= 0: max rhs */
  uint64_t seed;
  int force;          /* run the resampling stage even when the guard fails */
  /* Further key=value settings separated by spaces, e.g.
   * "fixed_rounding=independent load_events=0 b_shift=1"; may be NULL. */
  const char* extra;
} ppack_round_config;

PPACK_API void ppack_round_config_init(ppack_round_config* config);

/* point may be NULL for greedy. */
PPACK_API ppack_status ppack_round(const ppack_instance* inst, const ppack_point* point,
                                   const ppack_round_config* config, ppack_outcome** out);
PPACK_API ppack_status ppack_evaluate(const ppack_instance* inst, const uint8_t* solution,
                                      size_t n, ppack_outcome** out);
PPACK_API void ppack_outcome_free(ppack_outcome* outcome);
PPACK_API int64_t ppack_outcome_linf_load(const ppack_outcome* outcome);
PPACK_API double ppack_outcome_objective(const ppack_outcome* outcome);
PPACK_API int ppack_outcome_converged(const ppack_outcome* outcome);
PPACK_API size_t ppack_outcome_size(const ppack_outcome* outcome);
PPACK_API const uint8_t* ppack_outcome_solution(const ppack_outcome* outcome);
PPACK_API ppack_status ppack_outcome_json(const ppack_outcome* outcome, char** json);
PPACK_API ppack_status ppack_outcome_save_solution(const ppack_outcome* outcome,
                                                   const char* path);

/* ---- calculators ---- */

PPACK_API ppack_status ppack_phase_duration(int p, size_t n, double gamma, uint64_t* out);
PPACK_API ppack_status ppack_total_steps(double B, double S, double m, double gamma,
                                         uint64_t* out);
PPACK_API ppack_status ppack_error_budget(int p, double B, double S, double n, double m,
                                          double* out);
PPACK_API ppack_status ppack_absorption_probability(double start, double lo, double hi,
                                                    double* out);
PPACK_API ppack_status ppack_expected_absorption_steps(double a, double b, double* out);
PPACK_API ppack_status ppack_lll_error_target(uint64_t d, int* out);
PPACK_API ppack_status ppack_lll_error_target_tight(uint64_t d, int* out);
PPACK_API ppack_status ppack_chernoff_tail(double mean, double delta, double* out);
PPACK_API ppack_status ppack_damped_scale(double m, double opt, double d, double B,
                                          double* out);
PPACK_API ppack_status ppack_damped_beta(double d, double alpha, double B, double* out);
PPACK_API ppack_status ppack_lower_bound_condition(double m, double n, double k, double t,
                                                   int* out);
PPACK_API ppack_status ppack_sum_tail(double T, double beta, double* out);
/* target_size 0 means n / k. */
PPACK_API ppack_status ppack_row_hit_probability(size_t n, size_t k, size_t t,
                                                 size_t target_size, double* exact,
                                                 double* closed_form);
/* active may be NULL (all variables); degrees may be NULL or hold num_rows. */
PPACK_API ppack_status ppack_build_dependency(const ppack_instance* inst,
                                              const uint8_t* active, size_t* max_degree,
                                              size_t* degrees);

/* ---- oracles and reports ---- */

/* support may be NULL or hold support_size entries. */
PPACK_API ppack_status ppack_brute_force_min_load(const ppack_instance* inst,
                                                  size_t support_size, int override_budget,
                                                  int64_t* min_max_load, uint32_t* support);
PPACK_API ppack_status ppack_row_hit_sweep_csv(size_t n_max, size_t k_max, char** csv,
                                               size_t* violations);
PPACK_API ppack_status ppack_report_csv(const ppack_instance* inst,
                                        const ppack_outcome* const* outcomes,
                                        const char* const* names, size_t count,
                                        double opt_fractional, double slack, char** csv);

/* ---- harness ---- */

/* workers 0: PPACK_WORKERS or hardware concurrency. */
PPACK_API ppack_status ppack_run_plan(const char* plan_path, const char* out_dir,
                                      size_t workers, size_t* ok_cells, size_t* failed_cells);
/* One line per criterion; *all_passed is 1 when every line passed. */
PPACK_API ppack_status ppack_accept(const char* suite, size_t workers, char** report,
                                    int* all_passed);
/* Space-separated suite names. */
PPACK_API const char* ppack_accept_suites(void);

#ifdef __cplusplus
}
#endif

#endif /* PPACK_PPACK_H_ */
