/* Copyright 2026 The tripent Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface. Every call returns a tp_status; on failure tp_last_error()
 * describes the problem for the calling thread. Strings handed out by the
 * library are released with tp_string_free. */

#ifndef TRIPENT_TRIPENT_H_
#define TRIPENT_TRIPENT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TP_API __declspec(dllexport)
#else
#define TP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tp_status {
  TP_OK = 0,
  TP_ERR_DOMAIN = 1,      /* invalid argument or unsupported input */
  TP_ERR_CONFIG = 2,      /* malformed configuration */
  TP_ERR_CONVERGENCE = 3, /* iterative solver hit its cap */
  TP_ERR_IO = 4,          /* file or format problem */
  TP_ERR_INTERNAL = 5
} tp_status;

/* Opaque pure state on several parties. */
typedef struct tp_state tp_state;

TP_API const char* tp_version(void);
TP_API const char* tp_last_error(void);
TP_API void tp_string_free(char* s);

/* amplitudes: interleaved (re, im) pairs, row-major over `dims`. */
TP_API tp_status tp_state_create(const double* amplitudes, const size_t* dims,
                                 size_t num_parties, tp_state** out);
TP_API tp_status tp_state_load(const char* path, tp_state** out);
TP_API tp_status tp_state_save(const tp_state* state, const char* path, int binary);
TP_API void tp_state_free(tp_state* state);
TP_API tp_status tp_state_num_parties(const tp_state* state, size_t* out);

/* assignment[i] in {0, 1, 2} puts party i into A, B or C. compute_g = 0
 * skips the purification search and reports g as NaN. */
typedef struct tp_measures {
  double g, h, mutual_information, ep, reflected_entropy;
  int converged;
} tp_measures;

TP_API tp_status tp_state_measures(const tp_state* state, const int* assignment,
                                   double eta, uint64_t seed, int compute_g,
                                   tp_measures* out);

/* Experiment entry points take and return JSON text. */
TP_API tp_status tp_run_experiment(const char* config_json, char** records_jsonl,
                                   char** records_csv, char** summary_json,
                                   int* all_converged);
TP_API tp_status tp_run_point(const char* config_json, size_t n, char** record_json,
                              int* converged);
TP_API tp_status tp_fit(const char* records_jsonl, const char* quantity, char** fit_json);
TP_API tp_status tp_records_to_csv(const char* records_jsonl, char** csv);
TP_API tp_status tp_check(const char* suite, uint64_t seed, size_t count,
                          char** checks_jsonl, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* TRIPENT_TRIPENT_H_ */
