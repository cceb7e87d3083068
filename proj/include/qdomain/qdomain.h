/* Copyright 2026 The qdomain Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the qdomain shared library. Every handle is opaque; every
 * function that can fail returns a qd_status and leaves a thread-local message
 * retrievable with qd_last_error(). Strings returned through char** out
 * parameters are owned by the caller and released with qd_string_free().
 */

#ifndef QDOMAIN_QDOMAIN_H
#define QDOMAIN_QDOMAIN_H

#include <stddef.h>

#if defined(QDOMAIN_BUILDING_LIBRARY)
#define QD_API __attribute__((visibility("default")))
#else
#define QD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qd_status {
  QD_OK = 0,
  QD_ERR_NULL_ARGUMENT = 1,
  QD_ERR_CONFIG = 2,     /* malformed or inconsistent run configuration */
  QD_ERR_PARAMETER = 3,  /* numeric argument outside its admissible range */
  QD_ERR_IO = 4,
  QD_ERR_SOLVER = 5,     /* a numerical solve failed */
  QD_ERR_INTERNAL = 6
} qd_status;

typedef struct qd_config qd_config;
typedef struct qd_result qd_result;

typedef struct qd_run_flags {
  int dump_fields;
  int verify;
  int parallel_times;
  int verify_shape_derivative;
} qd_run_flags;

QD_API const char* qd_version(void);

/* Message of the last failure on the calling thread; "" when none. */
QD_API const char* qd_last_error(void);

QD_API void qd_string_free(char* s);

QD_API qd_status qd_config_parse(const char* json_text, qd_config** out);
QD_API void qd_config_free(qd_config* cfg);
QD_API qd_status qd_config_set_output_dir(qd_config* cfg, const char* dir);
/* Configuration with every default materialized. */
QD_API qd_status qd_config_resolved_json(const qd_config* cfg, char** out);

/* Runs the configured method and writes artifacts into the output directory.
 * Solver failures still produce a result; inspect qd_result_exit_code(). */
QD_API qd_status qd_execute(const qd_config* cfg, const qd_run_flags* flags, qd_result** out);
/* 0 converged, 2 not converged, 3 configuration error, 4 invariant violation. */
QD_API int qd_result_exit_code(const qd_result* res);
QD_API const char* qd_result_message(const qd_result* res);
QD_API qd_status qd_result_summary_json(const qd_result* res, char** out);
QD_API void qd_result_free(qd_result* res);

/* Radius and mass table of the configured measure, as JSON. */
QD_API qd_status qd_oracle_table(const qd_config* cfg, char** out);

/* Closed-form solution for M times the indicator of a ball of radius a in
 * dimension n (1 or 2), evaluated at distance s from the centre. */
QD_API qd_status qd_radial_u(double a, double M, int n, double s, double* out);
/* Radius of the quadrature domain of a point mass alpha in dimension n. */
QD_API qd_status qd_point_mass_radius(double alpha, int n, double* out);

/* One-dimensional free boundary for the piecewise-constant density given by
 * count intervals [lo[k], hi[k]] with density[k], started from [c, d]. */
QD_API qd_status qd_solve_1d(const double* lo, const double* hi, const double* density, size_t count, double c,
                             double d, double* c_final, double* d_final);

#ifdef __cplusplus
}
#endif

#endif /* QDOMAIN_QDOMAIN_H */
