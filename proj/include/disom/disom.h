/*
 * disom.h - C interface to the Distorted OneMax benchmark library.
 *
 * All objects are opaque handles created by a *_create / *_parse / *_run
 * function and released by the matching *_free function (NULL is accepted).
 * Every fallible call returns a disom_status; on failure the message for the
 * calling thread is available from disom_last_error() until the next call
 * that fails on that thread.
 *
 * Strings returned through `char** out` are heap allocated by the library
 * and must be released with disom_string_free().
 */
#ifndef DISOM_H
#define DISOM_H

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32 || defined __CYGWIN__
#  ifdef DISOM_BUILDING_LIBRARY
#    define DISOM_API __declspec(dllexport)
#  else
#    define DISOM_API __declspec(dllimport)
#  endif
#else
#  define DISOM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum disom_status {
  DISOM_OK = 0,
  DISOM_ERR_INVALID_ARGUMENT = 1,  /* NULL handle, bad enum, ... */
  DISOM_ERR_PARAMETER = 2,         /* parameter outside its domain */
  DISOM_ERR_DOMAIN = 3,            /* argument outside an operation's domain */
  DISOM_ERR_DIMENSION = 4,         /* length mismatch */
  DISOM_ERR_PARSE = 5,             /* malformed spec string or JSON */
  DISOM_ERR_SUPPORT_EXHAUSTED = 6, /* tail ratio undefined (bounded support) */
  DISOM_ERR_RESOURCE = 7,          /* request exceeds a documented bound */
  DISOM_ERR_USAGE = 8,             /* misuse, e.g. empty input */
  DISOM_ERR_INTERNAL = 99
} disom_status;

typedef enum disom_variant { DISOM_PLUS = 0, DISOM_COMMA = 1 } disom_variant;

DISOM_API const char* disom_version(void);
DISOM_API uint32_t disom_prf_version(void);
DISOM_API const char* disom_last_error(void);
DISOM_API const char* disom_status_name(disom_status status);
DISOM_API void disom_string_free(char* s);

/* ---- distributions --------------------------------------------------- */

typedef struct disom_distribution disom_distribution;

/* Grammar: kind:key=value(,key=value)*, kinds exp, gauss, pareto, uniform, truncexp. */
DISOM_API disom_status disom_distribution_parse(const char* spec, disom_distribution** out);
DISOM_API void disom_distribution_free(disom_distribution* dist);
DISOM_API disom_status disom_distribution_to_string(const disom_distribution* dist, char** out);
/* Pr[D >= d]. */
DISOM_API disom_status disom_distribution_tail(const disom_distribution* dist, double d, double* out);
/* Inverse CDF at u in (0, 1). */
DISOM_API disom_status disom_distribution_sample(const disom_distribution* dist, double u, double* out);
/* Pr[D >= d] / Pr[D >= d + 1]; DISOM_ERR_SUPPORT_EXHAUSTED past a bounded support. */
DISOM_API disom_status disom_distribution_sigma_ratio(const disom_distribution* dist, double d,
                                                      double* out);
/* CSV "d,tail,sigma_ratio" on d_min, d_min + step, ..., <= d_max. */
DISOM_API disom_status disom_distribution_table_csv(const disom_distribution* dist, double d_min,
                                                    double d_max, double step, char** out);

/* ---- landscape ------------------------------------------------------- */

typedef struct disom_landscape disom_landscape;

typedef struct disom_fitness {
  uint64_t om;
  int distorted;
  double distortion;
  double total;
} disom_fitness;

DISOM_API disom_status disom_landscape_create(uint64_t n, double p, const disom_distribution* dist,
                                              uint64_t seed, disom_landscape** out);
DISOM_API void disom_landscape_free(disom_landscape* landscape);
/* `bits` holds one byte per position, each 0 or 1. */
DISOM_API disom_status disom_landscape_evaluate(const disom_landscape* landscape,
                                                const uint8_t* bits, size_t n, disom_fitness* out);

/* ---- evolutionary algorithms ------------------------------------------ */

typedef struct disom_ea_config {
  disom_variant variant;
  uint32_t lambda;
  uint64_t n;
  double kstar;
  double mutation_rate; /* <= 0 selects 1/n */
  uint64_t cutoff_generations;
  uint64_t rng_seed;
  int dense_trace;
} disom_ea_config;

/* Fills defaults: comma, lambda 1, n 1, kstar 0, rate 1/n, cutoff 1e6, seed 0. */
DISOM_API void disom_ea_config_init(disom_ea_config* config);

/* Landscape and RNG seeds derived from one master seed, as used by batches. */
DISOM_API void disom_derive_run_seeds(uint64_t master_seed, uint64_t cell, uint64_t run,
                                      uint64_t* landscape_seed, uint64_t* rng_seed);

typedef struct disom_run disom_run;

typedef struct disom_run_summary {
  int success;
  int om_target_reached;
  uint64_t generations;
  uint64_t evaluations;
  disom_fitness final_fitness;
  uint64_t max_flips;
  size_t trace_length;
} disom_run_summary;

typedef struct disom_trace_event {
  uint64_t generation;
  uint64_t om;
  double distortion;
  double total;
  int accepted;
} disom_trace_event;

DISOM_API disom_status disom_run_ea(const disom_landscape* landscape, const disom_ea_config* config,
                                    disom_run** out);
DISOM_API void disom_run_free(disom_run* run);
DISOM_API disom_status disom_run_get_summary(const disom_run* run, disom_run_summary* out);
DISOM_API disom_status disom_run_get_trace_event(const disom_run* run, size_t index,
                                                 disom_trace_event* out);
/* CSV "generation,evaluations,om,distortion,total,accepted". */
DISOM_API disom_status disom_run_trace_csv(const disom_run* run, char** out);
/* Summary, final point and the config that produced it. */
DISOM_API disom_status disom_run_to_json(const disom_run* run, char** out);

/* ---- exact oracles ----------------------------------------------------- */

DISOM_API disom_status disom_fitness_gain_prob(uint32_t n, uint32_t k, uint32_t ell, uint32_t t,
                                               double* out);
/* C(n, ell) as a decimal string. */
DISOM_API disom_status disom_hamming_layer_size(uint32_t n, uint32_t ell, char** out);
DISOM_API disom_status disom_layer_census(const disom_landscape* landscape, const uint8_t* bits,
                                          size_t n, uint32_t ell, uint64_t* distorted,
                                          uint64_t* total);

/* ---- parameter assumptions -------------------------------------------- */

typedef struct disom_assumption_query {
  double n;
  double kstar;
  double lambda;
  double p;
  double epsilon;
  double d_min;
  double d_max;
  double d_step;
  double sigma_bound; /* <= 0: no bound */
} disom_assumption_query;

DISOM_API void disom_assumption_query_init(disom_assumption_query* query);

typedef struct disom_report disom_report;

typedef struct disom_report_values {
  double eta;
  double q;
  double epsilon;
  double lambda_lower;
  double lambda_upper;
  double sigma_estimate;
  int has_d_hat;
  double d_hat;
  int all_pass;
  size_t flag_count;
} disom_report_values;

typedef struct disom_flag {
  const char* name;   /* owned by the report */
  int pass;
  int advisory;
  const char* reason; /* owned by the report */
} disom_flag;

DISOM_API disom_status disom_check_assumptions(const disom_assumption_query* query,
                                               const disom_distribution* dist, disom_report** out);
DISOM_API void disom_report_free(disom_report* report);
DISOM_API disom_status disom_report_get_values(const disom_report* report, disom_report_values* out);
DISOM_API disom_status disom_report_get_flag(const disom_report* report, size_t index,
                                             disom_flag* out);
DISOM_API disom_status disom_report_to_text(const disom_report* report, char** out);
DISOM_API disom_status disom_report_to_json(const disom_report* report, char** out);

/* ---- experiments ------------------------------------------------------- */

typedef struct disom_experiment disom_experiment;
typedef struct disom_batch disom_batch;

/* name: fig1, fig2, fig3 or custom; scale > 0 (1 = full size). */
DISOM_API disom_status disom_experiment_preset(const char* name, double scale,
                                               disom_experiment** out);
DISOM_API disom_status disom_experiment_from_json(const char* json, disom_experiment** out);
DISOM_API void disom_experiment_free(disom_experiment* experiment);
DISOM_API disom_status disom_experiment_to_json(const disom_experiment* experiment, char** out);
DISOM_API disom_status disom_experiment_set_runs(disom_experiment* experiment, uint32_t runs);
DISOM_API disom_status disom_experiment_set_master_seed(disom_experiment* experiment, uint64_t seed);
DISOM_API disom_status disom_experiment_set_cutoff(disom_experiment* experiment,
                                                   uint64_t cutoff_generations);
DISOM_API disom_status disom_experiment_get_cutoff(const disom_experiment* experiment,
                                                   uint64_t* cutoff_generations);
/* Keep full per-run results (traces) so disom_batch_trace_csv can be used. */
DISOM_API disom_status disom_experiment_set_keep_runs(disom_experiment* experiment, int keep);
DISOM_API disom_status disom_experiment_run(const disom_experiment* experiment, uint32_t jobs,
                                            disom_batch** out);

typedef struct disom_cell_stats {
  disom_variant variant;
  uint64_t n;
  uint32_t lambda;
  double p;
  double kstar;
  int has_cutoff_d;
  double cutoff_d;
  uint32_t runs;
  uint32_t failed;
  uint32_t success;
  uint32_t censored;
  double median_generations;
  double mean_generations;
  int mean_is_lower_bound;
  int has_normalized;
  double normalized;
} disom_cell_stats;

DISOM_API void disom_batch_free(disom_batch* batch);
DISOM_API size_t disom_batch_cell_count(const disom_batch* batch);
DISOM_API disom_status disom_batch_get_cell(const disom_batch* batch, size_t index,
                                            disom_cell_stats* out);
DISOM_API disom_status disom_batch_median_csv(const disom_batch* batch, char** out);
DISOM_API disom_status disom_batch_normalized_csv(const disom_batch* batch, char** out);
DISOM_API disom_status disom_batch_summary_json(const disom_batch* batch, char** out);
/* Trace of one run; requires keep_runs. */
DISOM_API disom_status disom_batch_trace_csv(const disom_batch* batch, size_t cell, size_t run,
                                             char** out);

/* generations * p * Pr[D >= cutoff_d]; DISOM_ERR_DOMAIN when the tail is 0. */
DISOM_API disom_status disom_normalize_runtime(double generations, double p,
                                               const disom_distribution* dist, double cutoff_d,
                                               double* out);

#ifdef __cplusplus
}
#endif

#endif /* DISOM_H */
