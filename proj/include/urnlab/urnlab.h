#ifndef URNLAB_URNLAB_H
#define URNLAB_URNLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(URNLAB_BUILDING_LIBRARY)
#define URNLAB_API __attribute__((visibility("default")))
#else
#define URNLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns a status; on failure urnlab_last_error() describes it
   until the next failing call on the same thread. */
typedef enum urnlab_status {
  URNLAB_OK = 0,
  URNLAB_E_INVALID_ARGUMENT = 1,
  URNLAB_E_DOMAIN = 2,
  URNLAB_E_SAMPLE_SIZE = 3,
  URNLAB_E_INVALID_SIZE = 4,
  URNLAB_E_REINFORCEMENT_RANGE = 5,
  URNLAB_E_CAPABILITY = 6,
  URNLAB_E_COST_GUARD = 7,
  URNLAB_E_CONVERGENCE = 8,
  URNLAB_E_CASE = 9,
  URNLAB_E_HYPOTHESIS = 10,
  URNLAB_E_INTEGRATION = 11,
  URNLAB_E_CONFIG = 12,
  URNLAB_E_IO = 13,
  URNLAB_E_INTERNAL = 14
} urnlab_status;

typedef enum urnlab_scheme {
  URNLAB_WITH_REPLACEMENT = 0,
  URNLAB_WITHOUT_REPLACEMENT = 1
} urnlab_scheme;

typedef enum urnlab_regime {
  URNLAB_REGIME_CRITICAL = 0,
  URNLAB_REGIME_SUPERDIFFUSIVE = 1,
  URNLAB_REGIME_GAUSSIAN = 2,
  URNLAB_REGIME_GAUSSIAN_DEGENERATE = 3,
  URNLAB_REGIME_GAUSSIAN_JORDAN = 4
} urnlab_regime;

typedef enum urnlab_lemma {
  URNLAB_LEMMA_HOLDER = 0,
  URNLAB_LEMMA_MODULUS = 1,
  URNLAB_LEMMA_HESSIAN = 2
} urnlab_lemma;

typedef struct urnlab_params {
  double p;
  double q;
  double q1;
  double q2;
  int64_t N;
} urnlab_params;

typedef struct urnlab_fixed_point {
  double x_star, y_star, z_star;
  double alpha_star, beta_star, kappa, rho;
  double residual;
  double contraction_margin;
  int64_t iterations;
  int smoothed_map; /* 1 for fixed laws, 0 for epoch-indexed laws */
} urnlab_fixed_point;

typedef struct urnlab_asymptotics {
  urnlab_fixed_point fixed_point;
  urnlab_regime regime;
  int has_sigma;
  double sigma[9];     /* row-major, when has_sigma */
  double direction[3]; /* superdiffusive regime only */
  double gamma[9];
} urnlab_asymptotics;

typedef struct urnlab_spec urnlab_spec;
typedef struct urnlab_law urnlab_law;
typedef struct urnlab_text urnlab_text;
typedef struct urnlab_experiment urnlab_experiment;

URNLAB_API const char* urnlab_version(void);
URNLAB_API const char* urnlab_last_error(void);
URNLAB_API const char* urnlab_status_name(int status);

URNLAB_API const char* urnlab_text_data(const urnlab_text* text);
URNLAB_API void urnlab_text_free(urnlab_text* text);

/* "kind=affine a=0.45", "kind=logistic s=3" ... see urnlab_catalog. */
URNLAB_API urnlab_status urnlab_spec_parse(const char* descriptor, urnlab_spec** out);
URNLAB_API void urnlab_spec_free(urnlab_spec* spec);
URNLAB_API urnlab_status urnlab_spec_eval(const urnlab_spec* spec, double x, double y, double* out);
URNLAB_API urnlab_status urnlab_spec_descriptor(const urnlab_spec* spec, urnlab_text** out);

/* "kind=fixed k=5", "kind=uniform", "kind=binomial c=1 alpha=0.3" ... */
URNLAB_API urnlab_status urnlab_law_parse(const char* descriptor, urnlab_law** out);
URNLAB_API void urnlab_law_free(urnlab_law* law);
URNLAB_API urnlab_status urnlab_law_pmf(const urnlab_law* law, int64_t n, int64_t k, double* out);
URNLAB_API urnlab_status urnlab_law_inverse_moment(const urnlab_law* law, int64_t n, double power,
                                                   double* out);

/* Smoothed expectation of g under the law at epoch n (with replacement) and
   its hypergeometric counterpart at the lattice point (r1, r2) of n. */
URNLAB_API urnlab_status urnlab_hn_eval(const urnlab_spec* spec, const urnlab_law* law,
                                        const urnlab_params* params, int64_t n, double x, double y,
                                        double* out);
URNLAB_API urnlab_status urnlab_en_eval(const urnlab_spec* spec, const urnlab_law* law,
                                        const urnlab_params* params, int64_t n, int64_t r1,
                                        int64_t r2, double* out);
URNLAB_API urnlab_status urnlab_gap_bound(const urnlab_spec* spec, const urnlab_law* law,
                                          const urnlab_params* params, int64_t n,
                                          urnlab_lemma lemma, double* out);

URNLAB_API urnlab_status urnlab_solve_fixed_point(const urnlab_spec* spec, const urnlab_law* law,
                                                  const urnlab_params* params,
                                                  urnlab_fixed_point* out);
URNLAB_API urnlab_status urnlab_analyze(const urnlab_spec* spec, const urnlab_law* law,
                                        const urnlab_params* params, urnlab_asymptotics* out);

/* Final counts (a, b, c, d) of one replication run to n_max. */
URNLAB_API urnlab_status urnlab_simulate(const urnlab_spec* spec, const urnlab_law* law,
                                         const urnlab_params* params, urnlab_scheme scheme,
                                         int64_t n_max, uint64_t seed, uint64_t replication,
                                         int64_t counts[4]);

/* Runs a config file. output_dir may be NULL to use the config's output.dir;
   threads 0 keeps the config's value. */
URNLAB_API urnlab_status urnlab_experiment_run(const char* config_path, const char* output_dir,
                                               unsigned threads, urnlab_experiment** out);
URNLAB_API urnlab_status urnlab_report_load(const char* dir, urnlab_experiment** out);
URNLAB_API int urnlab_experiment_exit_code(const urnlab_experiment* exp);
URNLAB_API const char* urnlab_experiment_summary(const urnlab_experiment* exp);
URNLAB_API const char* urnlab_experiment_report_json(const urnlab_experiment* exp);
URNLAB_API const char* urnlab_experiment_output_dir(const urnlab_experiment* exp);
URNLAB_API void urnlab_experiment_free(urnlab_experiment* exp);

URNLAB_API urnlab_status urnlab_catalog(urnlab_text** out);

#ifdef __cplusplus
}
#endif

#endif
