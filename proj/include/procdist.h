/* C interface to procdist: distances between stationary processes and the
 * estimators built on them. All objects are opaque handles; every fallible
 * call returns a pd_status and leaves a message in pd_last_error(). Strings
 * returned through char** are owned by the caller and released with
 * pd_string_free. */
#ifndef PROCDIST_H
#define PROCDIST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef PROCDIST_BUILDING
#    define PD_API __declspec(dllexport)
#  else
#    define PD_API __declspec(dllimport)
#  endif
#else
#  define PD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pd_sample pd_sample;
typedef struct pd_model pd_model;
typedef struct pd_hypothesis pd_hypothesis;
typedef struct pd_calibration pd_calibration;

typedef enum pd_status {
    PD_OK = 0,
    PD_ERR_INVALID_ARGUMENT = 1,
    PD_ERR_ALPHABET_MISMATCH = 2,
    PD_ERR_UNSUPPORTED_MODEL = 3,
    PD_ERR_NO_UNIQUE_STATIONARY = 4,
    PD_ERR_INFEASIBLE = 5,
    PD_ERR_CALIBRATION_MISMATCH = 6,
    PD_ERR_PARSE = 7,
    PD_ERR_IO = 8,
    PD_ERR_INTERNAL = 99
} pd_status;

typedef enum pd_sample_kind { PD_KIND_AUTO = 0, PD_KIND_DISCRETE = 1, PD_KIND_REAL = 2 } pd_sample_kind;

typedef enum pd_truncation_mode { PD_TRUNC_AUTO = 0, PD_TRUNC_FIXED = 1, PD_TRUNC_EXACT_TAIL = 2 } pd_truncation_mode;

/* k_max for discrete samples, m_max / l_max for real ones; exact_tail uses m_max only. */
typedef struct pd_truncation {
    pd_truncation_mode mode;
    size_t k_max;
    size_t m_max;
    size_t l_max;
} pd_truncation;

PD_API const char* pd_version(void);
/* Message for the last failed call on this thread; empty if none. */
PD_API const char* pd_last_error(void);
PD_API const char* pd_status_name(pd_status status);
PD_API void pd_string_free(char* s);
/* 0 = hardware concurrency. */
PD_API void pd_set_max_threads(size_t threads);

/* Samples */
PD_API pd_status pd_sample_from_symbols(uint32_t alphabet_size, const uint32_t* values, size_t n, pd_sample** out);
PD_API pd_status pd_sample_from_reals(const double* values, size_t n, pd_sample** out);
/* alphabet_size 0 = max symbol + 1. */
PD_API pd_status pd_sample_load(const char* path, pd_sample_kind kind, uint32_t alphabet_size, pd_sample** out);
PD_API pd_status pd_sample_save_csv(const pd_sample* s, const char* path);
PD_API pd_status pd_sample_widen(const pd_sample* s, uint32_t alphabet_size, pd_sample** out);
PD_API pd_status pd_sample_slice(const pd_sample* s, size_t begin, size_t end, pd_sample** out);
PD_API size_t pd_sample_length(const pd_sample* s);
PD_API int pd_sample_is_discrete(const pd_sample* s);
/* 0 for real samples. */
PD_API uint32_t pd_sample_alphabet_size(const pd_sample* s);
/* Copies min(n, capacity) values; returns the number copied. */
PD_API size_t pd_sample_copy_symbols(const pd_sample* s, uint32_t* buffer, size_t capacity);
PD_API size_t pd_sample_copy_reals(const pd_sample* s, double* buffer, size_t capacity);
PD_API void pd_sample_free(pd_sample* s);

/* Process models (JSON specs) */
PD_API pd_status pd_model_from_json(const char* json, pd_model** out);
PD_API pd_status pd_model_load(const char* path, pd_model** out);
PD_API pd_status pd_model_to_json(const pd_model* m, char** json_out);
PD_API uint32_t pd_model_alphabet_size(const pd_model* m);
PD_API void pd_model_free(pd_model* m);
PD_API pd_status pd_simulate(const pd_model* m, size_t n, uint64_t seed, pd_sample** out);

/* Distances. json_out may be NULL. */
PD_API pd_status pd_distance(const pd_sample* x, const pd_sample* y, pd_truncation t, double* value, char** json_out);
PD_API pd_status pd_distance_model(const pd_sample* x, const pd_model* m, pd_truncation t, double* value,
                                   char** json_out);
PD_API pd_status pd_sum_information(const pd_sample* const* samples, size_t count, pd_truncation t, double* value,
                                    char** json_out);

/* label: 0 = z goes with x, 1 = with y. */
PD_API pd_status pd_classify(const pd_sample* x, const pd_sample* y, const pd_sample* z, pd_truncation t, int* label,
                             char** json_out);
/* assignment (length count, may be NULL) receives 0-based cluster labels. */
PD_API pd_status pd_cluster(const pd_sample* const* samples, size_t count, size_t clusters, pd_truncation t,
                            size_t* assignment, char** json_out);

/* Change points; results are JSON documents. */
PD_API pd_status pd_changepoint_single(const pd_sample* z, double alpha, double beta, pd_truncation t, char** json_out);
PD_API pd_status pd_changepoint_known_k(const pd_sample* z, size_t count, double lambda, pd_truncation t,
                                        char** json_out);
PD_API pd_status pd_changepoint_list(const pd_sample* z, double lambda, pd_truncation t, char** json_out);
PD_API pd_status pd_changepoint_known_r(const pd_sample* z, size_t distributions, double lambda, pd_truncation t,
                                        char** json_out);

/* Hypotheses: a model, an array of models, or {"label": ..., "models": [...]}. */
PD_API pd_status pd_hypothesis_from_json(const char* json, pd_hypothesis** out);
PD_API pd_status pd_hypothesis_load(const char* path, pd_hypothesis** out);
PD_API pd_status pd_hypothesis_from_model(const pd_model* m, pd_hypothesis** out);
PD_API uint32_t pd_hypothesis_alphabet_size(const pd_hypothesis* h);
PD_API void pd_hypothesis_free(pd_hypothesis* h);

PD_API pd_status pd_calibrate(const pd_hypothesis* h, size_t n, double theta, size_t mc_runs, uint64_t seed,
                              pd_calibration** out);
PD_API pd_status pd_calibration_load(const char* path, pd_calibration** out);
PD_API pd_status pd_calibration_save(const pd_calibration* c, const char* path);
PD_API pd_status pd_calibration_to_json(const pd_calibration* c, char** json_out);
PD_API double pd_calibration_gamma(const pd_calibration* c);
PD_API void pd_calibration_free(pd_calibration* c);

/* decision: 0 accepts H0, 1 rejects. */
PD_API pd_status pd_test_asymmetric(const pd_sample* x, const pd_hypothesis* h0, double alpha,
                                    const pd_calibration* cal, int* decision, char** json_out);
PD_API pd_status pd_test_uniform(const pd_sample* x, const pd_hypothesis* h0, const pd_hypothesis* h1, pd_truncation t,
                                 int* decision, char** json_out);

#ifdef __cplusplus
}
#endif

#endif
