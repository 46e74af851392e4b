#ifndef LINPROC_H
#define LINPROC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef LINPROC_BUILDING_LIBRARY
#    define LP_API __declspec(dllexport)
#  else
#    define LP_API __declspec(dllimport)
#  endif
#else
#  define LP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lp_status {
    LP_OK = 0,
    LP_ERR_INVALID_ARGUMENT = 1,
    LP_ERR_DEGENERATE = 2,
    LP_ERR_PRECONDITION = 3,
    LP_ERR_INFEASIBLE = 4,
    LP_ERR_IO = 5,
    LP_ERR_PARSE = 6,
    LP_ERR_INTERNAL = 99
} lp_status;

LP_API const char* lp_version(void);
LP_API const char* lp_status_name(lp_status status);
/* Message of the last failed call on this thread; "" after a success. */
LP_API const char* lp_last_error(void);

/* ---- coefficients ---- */

typedef struct lp_coeffs lp_coeffs;

LP_API lp_status lp_coeffs_create(const double* values, size_t length, double tail_l2, lp_coeffs** out);
LP_API lp_status lp_coeffs_read_csv(const char* path, lp_coeffs** out);
LP_API lp_status lp_coeffs_write_csv(const lp_coeffs* a, const char* path, const char* header_comment);
LP_API void lp_coeffs_free(lp_coeffs* a);
/* Number of stored coefficients, L + 1. */
LP_API size_t lp_coeffs_length(const lp_coeffs* a);
LP_API lp_status lp_coeffs_values(const lp_coeffs* a, double* out, size_t capacity);
/* Writes b_0..b_m into out[0..m]. */
LP_API lp_status lp_partial_sums(const lp_coeffs* a, size_t m, double* out);
LP_API lp_status lp_hannan_sum(const lp_coeffs* a, double* value, int* lower_bound);

/* ---- variance profile ---- */

typedef struct lp_profile lp_profile;

LP_API lp_status lp_profile_create(const lp_coeffs* a, size_t n_max, size_t past_window, lp_profile** out);
LP_API void lp_profile_free(lp_profile* p);
LP_API size_t lp_profile_n_max(const lp_profile* p);
LP_API lp_status lp_profile_get(const lp_profile* p, size_t n, double* sigma_bar_sq, double* cond_exp_norm_sq,
                                double* sigma_sq);

/* ---- conditions ---- */

typedef enum lp_extended_kind { LP_FINITE = 0, LP_INFINITE = 1, LP_UNKNOWN = 2 } lp_extended_kind;

typedef struct lp_extended {
    lp_extended_kind kind;
    double value; /* meaningful only for LP_FINITE */
} lp_extended;

typedef struct lp_condition2 {
    lp_extended c;
    size_t n;
    size_t k;
    size_t n_max;
    double log_slope;
    int bounded;
} lp_condition2;

LP_API lp_status lp_check_condition2(const lp_profile* p, size_t n_max, lp_condition2* out);

typedef struct lp_cx_spec lp_cx_spec;

/* spec may be NULL, in which case the tail bound is LP_UNKNOWN. */
LP_API lp_status lp_maxwell_woodroofe(const lp_profile* p, size_t n_max, const lp_cx_spec* spec, double* partial,
                                      lp_extended* tail_bound);

/* ---- counterexample ---- */

/* raw and normalized each receive K values; either may be NULL. */
LP_API lp_status lp_gamma_schedule(size_t K, double* raw, double* normalized);

/* kappa (length J) and scheduled may be NULL for the defaults. */
LP_API lp_status lp_cx_create(const uint64_t* V, size_t K, const uint64_t* N, size_t J, const double* kappa,
                              const size_t* scheduled, size_t n_scheduled, int renormalize, lp_cx_spec** out);
LP_API void lp_cx_free(lp_cx_spec* spec);
LP_API lp_status lp_cx_coefficients(const lp_cx_spec* spec, lp_coeffs** out);
/* weights and heights receive J values each. */
LP_API lp_status lp_cx_innovation(const lp_cx_spec* spec, double* d, double* weights, uint64_t* heights);
/* Number of failing schedule constraints in *failed; *pass is 1 when none fail. */
LP_API lp_status lp_cx_validate(const lp_cx_spec* spec, int* pass, size_t* failed);
LP_API lp_status lp_cx_mw_certificate(const lp_cx_spec* spec, double* value);

/* ---- command runner ---- */

typedef struct lp_run_options {
    const char* command;   /* check, build, simulate, annealed, quenched, failure, wip, tn, trends */
    const char* spec_path; /* may be NULL */
    const char* out_dir;   /* NULL or "": nothing is written */
    uint64_t seed;
    int has_seed;
    const char* const* overrides; /* key=value strings */
    size_t n_overrides;
    unsigned threads;
} lp_run_options;

typedef struct lp_run_result lp_run_result;

LP_API lp_status lp_run(const lp_run_options* options, lp_run_result** out);
LP_API int lp_run_result_pass(const lp_run_result* r);
LP_API const char* lp_run_result_summary(const lp_run_result* r);
LP_API size_t lp_run_result_artifact_count(const lp_run_result* r);
LP_API const char* lp_run_result_artifact_name(const lp_run_result* r, size_t i);
LP_API const char* lp_run_result_artifact_contents(const lp_run_result* r, size_t i);
LP_API void lp_run_result_free(lp_run_result* r);

#ifdef __cplusplus
}
#endif

#endif
