/* Copyright (c) The gltmean authors.
 * SPDX-License-Identifier: Apache-2.0 */

/* C interface to the gltmean library. Handles are opaque and owned by the
 * caller; every handle returned through an out-parameter must be released
 * with its matching _free function. Functions return GLTM_OK or an error
 * status; gltm_last_error() then describes the failure for the calling
 * thread. */

#ifndef GLTMEAN_GLTMEAN_H
#define GLTMEAN_GLTMEAN_H

#include <stddef.h>

#if defined(GLTM_BUILDING_LIBRARY)
#define GLTM_API __attribute__((visibility("default")))
#else
#define GLTM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gltm_status {
  GLTM_OK = 0,
  GLTM_E_INVALID_ARGUMENT = 1,
  GLTM_E_SIZE_MISMATCH = 2,
  GLTM_E_NON_FINITE = 3,
  GLTM_E_NOT_HPD = 4,
  GLTM_E_NON_CONVERGENCE = 5,
  GLTM_E_CONSTRUCTION = 6,
  GLTM_E_CONFIG = 7,
  GLTM_E_IO = 8,
  GLTM_E_INTERNAL = 9
} gltm_status;

typedef struct gltm_experiment gltm_experiment;
typedef struct gltm_experiment_list gltm_experiment_list;
typedef struct gltm_report gltm_report;

typedef struct gltm_report_row {
  long n;
  long d_n;
  double lambda_min;
  double lambda_max;
  double cond2;
  double zero_fraction;
  double sup_dist;
  double mean_abs_dist;
} gltm_report_row;

typedef struct gltm_run_options {
  const char* out_dir; /* NULL or "": no files */
  int svg;             /* nonzero: also write overlay SVGs */
  int threads;         /* parallelism hint, >= 1 */
} gltm_run_options;

GLTM_API const char* gltm_version(void);
GLTM_API const char* gltm_status_name(gltm_status status);
/* Message of the last failed call on this thread; "" if none. */
GLTM_API const char* gltm_last_error(void);

/* Experiment lists: the built-in catalog or a JSON config file. */
GLTM_API gltm_status gltm_catalog(gltm_experiment_list** out);
GLTM_API gltm_status gltm_load_config(const char* path, gltm_experiment_list** out);
GLTM_API size_t gltm_list_size(const gltm_experiment_list* list);
/* Copies entry i into a new experiment handle. */
GLTM_API gltm_status gltm_list_get(const gltm_experiment_list* list, size_t i,
                                   gltm_experiment** out);
GLTM_API void gltm_list_free(gltm_experiment_list* list);

GLTM_API gltm_status gltm_experiment_from_catalog(const char* id, gltm_experiment** out);
GLTM_API const char* gltm_experiment_id(const gltm_experiment* e);
GLTM_API const char* gltm_experiment_description(const gltm_experiment* e);
GLTM_API gltm_status gltm_experiment_set_n_list(gltm_experiment* e, const long* n, size_t count);
GLTM_API gltm_status gltm_experiment_set_grid(gltm_experiment* e, long mx, long mtheta);
GLTM_API gltm_status gltm_experiment_set_threshold(gltm_experiment* e, double threshold);
GLTM_API gltm_status gltm_experiment_set_candidate_tol(gltm_experiment* e, double tol);
GLTM_API void gltm_experiment_free(gltm_experiment* e);

/* options may be NULL (no files, one thread). */
GLTM_API gltm_status gltm_run(const gltm_experiment* e, const gltm_run_options* options,
                              gltm_report** out);
GLTM_API size_t gltm_report_row_count(const gltm_report* r);
GLTM_API gltm_status gltm_report_get_row(const gltm_report* r, size_t i, gltm_report_row* out);
GLTM_API size_t gltm_report_alpha_count(const gltm_report* r);
GLTM_API gltm_status gltm_report_get_alpha(const gltm_report* r, size_t j, double* out);
GLTM_API double gltm_report_target_measure(const gltm_report* r);
/* Plain-text tables; the string lives as long as the report. */
GLTM_API const char* gltm_report_table(const gltm_report* r);
GLTM_API size_t gltm_report_file_count(const gltm_report* r);
GLTM_API const char* gltm_report_file(const gltm_report* r, size_t i);
GLTM_API void gltm_report_free(gltm_report* r);

/* Geometric mean of two real symmetric positive definite n x n matrices,
 * row-major. out may alias neither input. */
GLTM_API gltm_status gltm_geometric_mean_real(size_t n, const double* a, const double* b,
                                              double* out);

#ifdef __cplusplus
}
#endif

#endif /* GLTMEAN_GLTMEAN_H */
