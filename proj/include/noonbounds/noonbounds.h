/* Copyright 2026 The noonbounds Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef NOONBOUNDS_NOONBOUNDS_H_
#define NOONBOUNDS_NOONBOUNDS_H_

/*
 * C interface to the noonbounds library.
 *
 * Conventions:
 *  - Every function returns an int status: NB_OK (0) or a negative NB_ERROR_*.
 *    After a failure, nb_last_error() returns a message for the calling thread.
 *  - Objects are opaque handles created by nb_*_create / nb_*_run and released
 *    with the matching nb_*_destroy. Destroying NULL is a no-op.
 *  - String and array outputs take (buffer, *length). On entry *length is the
 *    capacity; on return it holds the required size (including the NUL for
 *    strings). A NULL buffer or short capacity yields
 *    NB_ERROR_INSUFFICIENT_BUFFER with *length set, so callers can size and
 *    retry.
 *  - Mode 0 is the reference mode. Loss arrays have d+1 entries, phase arrays
 *    d entries, weight arrays d+1 entries.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(NOONBOUNDS_BUILDING_LIBRARY)
#define NB_API __declspec(dllexport)
#else
#define NB_API __declspec(dllimport)
#endif
#else
#define NB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum nb_status {
  NB_OK = 0,
  NB_ERROR_INVALID_ARGUMENT = -1,
  NB_ERROR_DIMENSION_MISMATCH = -2,
  NB_ERROR_OUT_OF_RANGE = -3,
  NB_ERROR_SINGULAR_MODEL = -4,
  NB_ERROR_UNIDENTIFIABLE_PHASE = -5,
  NB_ERROR_DEGENERATE_ENVIRONMENT = -6,
  NB_ERROR_BASIS_OVERFLOW = -7,
  NB_ERROR_NUMERICAL = -8,
  NB_ERROR_SINGULAR_MEASUREMENT = -9,
  NB_ERROR_OPTIMIZATION_FAILED = -10,
  NB_ERROR_PARSE = -11,
  NB_ERROR_NULL_POINTER = -20,
  NB_ERROR_INSUFFICIENT_BUFFER = -21,
  NB_ERROR_INVALID_HANDLE = -22,
  NB_ERROR_UNKNOWN = -99
};

typedef enum nb_weight_scheme {
  NB_WEIGHTS_OPTIMAL = 0,
  NB_WEIGHTS_HUMPHREYS = 1,
  NB_WEIGHTS_BALANCED = 2,
  NB_WEIGHTS_CUSTOM = 3
} nb_weight_scheme;

typedef enum nb_series {
  NB_SERIES_OPTIMAL = 0,
  NB_SERIES_HUMPHREYS = 1,
  NB_SERIES_COHERENT = 2
} nb_series;

typedef struct nb_scenario_struct* nb_scenario_t;
typedef struct nb_mesh_struct* nb_mesh_t;
typedef struct nb_optresult_struct* nb_optresult_t;
typedef struct nb_sweep_struct* nb_sweep_t;

NB_API const char* nb_version_string(void);
NB_API const char* nb_last_error(void);
NB_API const char* nb_status_name(int status);
NB_API unsigned nb_thread_count(void);

/* ---- scenario ---------------------------------------------------------- */

/* phases may be NULL for the default evaluation point 0.3 + 0.2k. */
NB_API int nb_scenario_create(nb_scenario_t* out, int n_photons, int n_phases,
                              const double* gamma, size_t gamma_len, const double* phases,
                              size_t phases_len, int repetitions);
NB_API int nb_scenario_from_json(nb_scenario_t* out, const char* json);
NB_API int nb_scenario_destroy(nb_scenario_t s);
NB_API int nb_scenario_to_json(nb_scenario_t s, char* out, size_t* out_len);
NB_API int nb_scenario_n_photons(nb_scenario_t s, int* out);
NB_API int nb_scenario_n_phases(nb_scenario_t s, int* out);

/* ---- closed-form bounds ------------------------------------------------ */

/* weights is read only for NB_WEIGHTS_CUSTOM (d+1 entries, normalized). */
NB_API int nb_weights(nb_scenario_t s, nb_weight_scheme scheme, const double* custom,
                      size_t custom_len, double* out, size_t* out_len);
/* d*d row-major entries. */
NB_API int nb_qfim(nb_scenario_t s, nb_weight_scheme scheme, const double* custom,
                   size_t custom_len, double* out, size_t* out_len);
NB_API int nb_qcrb(nb_scenario_t s, nb_weight_scheme scheme, const double* custom,
                   size_t custom_len, double* out);
/* q may be NULL for the optimal coherent weights. */
NB_API int nb_sql(nb_scenario_t s, const double* q, size_t q_len, double* out);
NB_API int nb_advantage(nb_scenario_t s, nb_weight_scheme scheme, const double* custom,
                        size_t custom_len, double* out);
NB_API int nb_critical_loss(int n_photons, int n_phases, double gamma_ref,
                            nb_weight_scheme scheme, double* out);

/* ---- Fock-space oracle ------------------------------------------------- */

NB_API int nb_qfim_oracle(nb_scenario_t s, const double* weights, size_t weights_len,
                          double* out, size_t* out_len);
NB_API int nb_attainability(nb_scenario_t s, const double* weights, size_t weights_len,
                            double* out);

/* ---- interferometer ---------------------------------------------------- */

NB_API int nb_mesh_create_uniform(nb_mesh_t* out, int n_modes, double theta, double chi);
NB_API int nb_mesh_create_random(nb_mesh_t* out, int n_modes, uint64_t seed);
NB_API int nb_mesh_from_json(nb_mesh_t* out, const char* json, int n_modes);
NB_API int nb_mesh_destroy(nb_mesh_t m);
NB_API int nb_mesh_to_json(nb_mesh_t m, char* out, size_t* out_len);
/* 2*n*n doubles: interleaved (re, im), row-major. */
NB_API int nb_mesh_unitary(nb_mesh_t m, double* out, size_t* out_len);
/* Photon-counting CRB at the scenario's phases. weights may be NULL for the
 * QCRB-optimal weights. */
NB_API int nb_mesh_crb(nb_scenario_t s, const double* weights, size_t weights_len, nb_mesh_t m,
                       double* out);

/* ---- optimization ------------------------------------------------------ */

/* Mesh-only search at fixed weights (NULL: QCRB-optimal weights). */
NB_API int nb_optimize_mesh(nb_optresult_t* out, nb_scenario_t s, const double* weights,
                            size_t weights_len, int restarts, uint64_t seed);
NB_API int nb_optimize_joint(nb_optresult_t* out, nb_scenario_t s, int restarts, uint64_t seed);
NB_API int nb_optresult_destroy(nb_optresult_t r);
NB_API int nb_optresult_crb(nb_optresult_t r, double* out);
NB_API int nb_optresult_weights(nb_optresult_t r, double* out, size_t* out_len);
NB_API int nb_optresult_mesh(nb_optresult_t r, nb_mesh_t* out);
NB_API int nb_optresult_restarts(nb_optresult_t r, int* out);
NB_API int nb_optresult_converged(nb_optresult_t r, int* out);
/* "iteration,objective" CSV of the winning restart. */
NB_API int nb_optresult_history_csv(nb_optresult_t r, char* out, size_t* out_len);

/* ---- Monte-Carlo sweep ------------------------------------------------- */

typedef struct nb_sweep_config {
  int n_instances;
  double gamma_min;
  double gamma_max;
  int n_photons;
  int n_phases;
  uint64_t seed;
  int pin_gamma_ref; /* nonzero: hold mode 0 at gamma_ref */
  double gamma_ref;
} nb_sweep_config;

NB_API void nb_sweep_config_default(nb_sweep_config* cfg);
NB_API int nb_sweep_run(nb_sweep_t* out, const nb_sweep_config* cfg);
NB_API int nb_sweep_destroy(nb_sweep_t sw);
NB_API int nb_sweep_size(nb_sweep_t sw, size_t* out);
/* One row: qcrb_optimal, qcrb_humphreys, qcrb_coherent. */
NB_API int nb_sweep_row(nb_sweep_t sw, size_t index, double out[3]);
NB_API int nb_sweep_csv(nb_sweep_t sw, char* out, size_t* out_len);
NB_API int nb_sweep_summary_json(nb_sweep_t sw, char* out, size_t* out_len);
/* "bin,lo,hi,count" CSV of equal-width bins over the series range. */
NB_API int nb_sweep_histogram_csv(nb_sweep_t sw, nb_series series, int bins, char* out,
                                  size_t* out_len);

/* ---- verification suite ------------------------------------------------ */

typedef struct nb_verify_config {
  int max_n;
  int max_d;
  int grid_points;
  int random_draws;
  uint64_t seed;
  int max_dimension;
  int inject_fault;
} nb_verify_config;

NB_API void nb_verify_config_default(nb_verify_config* cfg);
/* *passed is set to 1 or 0; the report JSON includes worst residuals and the
 * first offending scenario. */
NB_API int nb_verify(const nb_verify_config* cfg, int* passed, char* report, size_t* report_len);

#ifdef __cplusplus
}
#endif

#endif /* NOONBOUNDS_NOONBOUNDS_H_ */
