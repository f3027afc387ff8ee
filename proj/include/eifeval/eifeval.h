/*
 * eifeval C API.
 *
 * Every function returns an eif_status. On failure a human-readable message
 * is available from eif_last_error() on the calling thread until the next
 * API call on that thread. Handles are opaque and owned by the caller, who
 * releases them with the matching *_destroy function (NULL is accepted).
 * Handles are not synchronized: share one across threads only for reads.
 */
#ifndef EIFEVAL_EIFEVAL_H
#define EIFEVAL_EIFEVAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EIFEVAL_BUILDING)
#    define EIF_API __declspec(dllexport)
#  else
#    define EIF_API __declspec(dllimport)
#  endif
#else
#  define EIF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eif_status {
  EIF_OK = 0,
  EIF_ERR_INVALID_INPUT = 1,
  EIF_ERR_PARSE = 2,
  EIF_ERR_CONTRACT = 3,
  EIF_ERR_DEGENERATE_SIGNAL = 4,
  EIF_ERR_SINGULAR_DESIGN = 5,
  EIF_ERR_INVALID_FOLDS = 6,
  EIF_ERR_MISSING_TAU = 7,
  EIF_ERR_EMPTY_DATASET = 8,
  EIF_ERR_INVALID_M = 9,
  EIF_ERR_UNDEFINED_VR = 10,
  EIF_ERR_INVALID_ESTIMATE = 11,
  EIF_ERR_IO = 12,
  EIF_ERR_INTERNAL = 99
} eif_status;

typedef enum eif_method {
  EIF_METHOD_NAIVE = 0,
  EIF_METHOD_ONE_STEP_CROSSFIT = 1,
  EIF_METHOD_ONE_STEP_FIXED = 2,
  EIF_METHOD_ONE_STEP_ORACLE = 3
} eif_method;

typedef enum eif_mode {
  EIF_MODE_SIMULATE = 0,
  EIF_MODE_SWEEP = 1,
  EIF_MODE_RANK = 2,
  EIF_MODE_ESTIMATE = 3
} eif_mode;

typedef enum eif_axis { EIF_AXIS_BASE_SIGMA = 0, EIF_AXIS_SIGMA_ETA = 1 } eif_axis;

/* Point estimate with its normal confidence interval, on the metric's scale. */
typedef struct eif_report {
  eif_method method;
  double theta_hat;
  double theta_hat_clamped;
  double var_influence;
  double std_error;
  double ci_lower;
  double ci_upper;
  double level;
  size_t n;
  size_t m;
  size_t k;
} eif_report;

typedef struct eif_config eif_config;
typedef struct eif_bench eif_bench;
typedef struct eif_rank_result eif_rank_result;

EIF_API const char* eif_last_error(void);
EIF_API const char* eif_status_string(eif_status status);
EIF_API const char* eif_method_name(eif_method method);
EIF_API const char* eif_version(void);

/* Run configuration; defaults: N=1000, M=500, K=5, R=100, sigma^2=(1, 1.05, 1.1),
   rho=(0.8, 0.6), sigma_eta=0.6, seed 0, level 0.95. */
EIF_API eif_status eif_config_create(eif_config** out);
EIF_API eif_status eif_config_load_json(const char* path, eif_config** out);
EIF_API void eif_config_destroy(eif_config* config);
EIF_API eif_status eif_config_validate(const eif_config* config);

EIF_API eif_status eif_config_set_n(eif_config* config, size_t n);
EIF_API eif_status eif_config_set_mc_samples(eif_config* config, size_t m);
EIF_API eif_status eif_config_set_folds(eif_config* config, size_t k);
EIF_API eif_status eif_config_set_trials(eif_config* config, size_t trials);
EIF_API eif_status eif_config_set_seed(eif_config* config, uint64_t seed);
EIF_API eif_status eif_config_set_level(eif_config* config, double level);
EIF_API eif_status eif_config_set_rho(eif_config* config, double rho1, double rho2);
EIF_API eif_status eif_config_set_sigma_eta(eif_config* config, double sigma_eta);
EIF_API eif_status eif_config_set_sigma_sq(eif_config* config, const double* sigma_sq, size_t models);
EIF_API eif_status eif_config_set_model_index(eif_config* config, size_t model_index);
EIF_API eif_status eif_config_set_axis(eif_config* config, eif_axis axis);
/* len == 0 restores the default grid of the current axis. */
EIF_API eif_status eif_config_set_grid(eif_config* config, const double* grid, size_t len);
EIF_API eif_status eif_config_set_gap(eif_config* config, double gap);
EIF_API eif_status eif_config_set_oracle(eif_config* config, int with_oracle);
EIF_API eif_status eif_config_set_mode(eif_config* config, eif_mode mode);
EIF_API eif_status eif_config_set_input(eif_config* config, const char* path);
EIF_API eif_status eif_config_set_output(eif_config* config, const char* path);

EIF_API eif_status eif_config_get_mode(const eif_config* config, eif_mode* mode);
EIF_API eif_status eif_config_get_level(const eif_config* config, double* level);
EIF_API eif_status eif_config_get_rho(const eif_config* config, double* rho1, double* rho2);
/* Returned strings live as long as the config and its next setter call. */
EIF_API eif_status eif_config_get_input(const eif_config* config, const char** path);
EIF_API eif_status eif_config_get_output(const eif_config* config, const char** path);

/* Simulates one dataset (trial 0, configured model) and estimates it both ways. */
EIF_API eif_status eif_simulate(const eif_config* config, eif_report* naive, eif_report* one_step);

/* Ranking experiment over config trials; truth is the identity ordering. */
EIF_API eif_status eif_rank(const eif_config* config, eif_rank_result** out);
EIF_API void eif_rank_result_destroy(eif_rank_result* result);
/* Returns EIF_ERR_INVALID_INPUT for a method the experiment did not run. */
EIF_API eif_status eif_rank_result_summary(const eif_rank_result* result, eif_method method, double* exact_match,
                                           double* kendall_mean, size_t* trials);

/* Runs the sweep configured in `config` and writes the sweep CSV to `path`. */
EIF_API eif_status eif_sweep_write_csv(const eif_config* config, const char* path);

EIF_API eif_status eif_bench_load(const char* path, eif_bench** out);
EIF_API void eif_bench_destroy(eif_bench* bench);
EIF_API size_t eif_bench_size(const eif_bench* bench);
EIF_API size_t eif_bench_mc_samples(const eif_bench* bench);
/* clamped_count (optional) receives how many tau predictions were clipped into [0,1]. */
EIF_API eif_status eif_bench_estimate(const eif_bench* bench, double level, eif_report* naive, eif_report* one_step,
                                      size_t* clamped_count);

/* Writes a one-row report CSV. gt_fraction < 0 leaves the GT and Improv. columns empty. */
EIF_API eif_status eif_write_report_csv(const char* path, const char* model, double gt_fraction, const eif_report* naive,
                                        const eif_report* one_step);

/* |naive - gt| - |onestep - gt| */
EIF_API double eif_improvement(double naive_pct, double onestep_pct, double gt_pct);

/* Writes "method=... theta_hat=..." into buf (always NUL-terminated when cap > 0). */
EIF_API eif_status eif_format_report(const eif_report* report, char* buf, size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* EIFEVAL_EIFEVAL_H */
