/* ppreg: probability-plot regression for log-logistic, Weibull and logistic
 * samples.  Rank-residual moment tables (exact, asymptotic, Monte Carlo),
 * weighted/generalized least-squares and maximum-likelihood fitting,
 * bootstrap standard errors and replicated bias/MSE studies.
 *
 * All entry points are thread-safe as long as each handle is used from one
 * thread at a time.  Randomized routines are deterministic: the same
 * arguments and seed reproduce results bit for bit.
 */

#ifndef PPREG_H
#define PPREG_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(PPREG_BUILD)
#define PPREG_API __attribute__((visibility("default")))
#else
#define PPREG_API
#endif

typedef enum ppreg_status {
  PPREG_OK = 0,
  PPREG_ERR_INVALID_ARGUMENT = 1,
  PPREG_ERR_DOMAIN = 2,
  PPREG_ERR_DEGENERATE_DATA = 3,
  PPREG_ERR_NONPOSITIVE_SLOPE = 4,
  PPREG_ERR_SINGULAR_COVARIANCE = 5,
  PPREG_ERR_NO_CONVERGENCE = 6,
  PPREG_ERR_BOOTSTRAP_FAILED = 7,
  PPREG_ERR_UNSUPPORTED = 8,
  PPREG_ERR_NUMERICAL = 9,
  PPREG_ERR_INTERNAL = 10
} ppreg_status;

typedef enum ppreg_dist {
  PPREG_DIST_LOGLOGISTIC = 0,
  PPREG_DIST_WEIBULL = 1,
  PPREG_DIST_LOGISTIC = 2
} ppreg_dist;

typedef enum ppreg_scheme {
  PPREG_SCHEME_STANDARD = 0, /* r/(n+1) */
  PPREG_SCHEME_BERNARD = 1   /* (r-0.3)/(n+0.4) */
} ppreg_scheme;

typedef enum ppreg_table_method {
  PPREG_TABLE_EXACT = 0,
  PPREG_TABLE_ASYMPTOTIC = 1,
  PPREG_TABLE_MONTE_CARLO = 2
} ppreg_table_method;

typedef enum ppreg_fit_method {
  PPREG_FIT_WLS_EXACT = 0,
  PPREG_FIT_WLS_ASYMPTOTIC = 1,
  PPREG_FIT_WLS_MC = 2,
  PPREG_FIT_GLS_FULL = 3,
  PPREG_FIT_ML = 4
} ppreg_fit_method;

/* Stable name for a status code. */
PPREG_API const char* ppreg_status_name(ppreg_status status);

/* Message for the most recent failure on the calling thread; valid until the
 * thread's next ppreg call. */
PPREG_API const char* ppreg_last_error(void);

/* Frees strings returned through char** out-parameters. */
PPREG_API void ppreg_string_free(char* s);

/* ---- special functions ---- */

PPREG_API ppreg_status ppreg_digamma(double x, double* out);
PPREG_API ppreg_status ppreg_trigamma(double x, double* out);
PPREG_API ppreg_status ppreg_log_gamma(double x, double* out);

/* ---- order-statistic residual moments (ranks are 1-based) ---- */

PPREG_API ppreg_status ppreg_loglogistic_residual_mean(int r, int n, double* out);
PPREG_API ppreg_status ppreg_loglogistic_residual_var(int r, int n, double* out);
PPREG_API ppreg_status ppreg_weibull_residual_mean(int r, int n, double* out);
PPREG_API ppreg_status ppreg_weibull_residual_second_moment(int r, int n, double* out);
PPREG_API ppreg_status ppreg_weibull_residual_var(int r, int n, double* out);
PPREG_API ppreg_status ppreg_plotting_position(int r, int n, ppreg_scheme scheme, double* out);
PPREG_API ppreg_status ppreg_asymptotic_residual_var(int r, int n, ppreg_scheme scheme, double* out);
/* Requires r <= s; at r == s this coincides with the variance above. */
PPREG_API ppreg_status ppreg_asymptotic_residual_cov(int r, int s, int n, ppreg_scheme scheme, double* out);

/* ---- moment tables ---- */

typedef struct ppreg_table ppreg_table;

/* mc_m and seed are consumed only when method is MONTE_CARLO (mc_m >= 100). */
PPREG_API ppreg_status ppreg_table_create(ppreg_dist dist, int n,
                                          ppreg_table_method method,
                                          ppreg_scheme scheme, long long mc_m,
                                          uint64_t seed, ppreg_table** out);
PPREG_API void ppreg_table_free(ppreg_table* table);
PPREG_API int ppreg_table_size(const ppreg_table* table);
PPREG_API ppreg_status ppreg_table_row(const ppreg_table* table, int r,
                                       double* mean, double* variance,
                                       double* weight);
/* CSV with header rank,mean,variance,weight. */
PPREG_API ppreg_status ppreg_table_to_csv(const ppreg_table* table, char** out);

/* ---- Monte Carlo residual covariance ---- */

typedef struct ppreg_cov ppreg_cov;

PPREG_API ppreg_status ppreg_cov_create(ppreg_dist dist, int n, long long m,
                                        uint64_t seed, ppreg_cov** out);
PPREG_API void ppreg_cov_free(ppreg_cov* cov);
PPREG_API int ppreg_cov_size(const ppreg_cov* cov);
PPREG_API ppreg_status ppreg_cov_entry(const ppreg_cov* cov, int r, int s, double* out);
PPREG_API ppreg_status ppreg_cov_log_det(const ppreg_cov* cov, double* out);
PPREG_API ppreg_status ppreg_cov_min_eigenvalue(const ppreg_cov* cov, double* out);
PPREG_API ppreg_status ppreg_cov_max_eigenvalue(const ppreg_cov* cov, double* out);
/* Raw n x n matrix CSV, no header. */
PPREG_API ppreg_status ppreg_cov_to_csv(const ppreg_cov* cov, char** out);

/* ---- sampling (inverse CDF; out must hold n doubles) ---- */

PPREG_API ppreg_status ppreg_sample_loglogistic(double alpha, double beta,
                                                int n, uint64_t seed,
                                                double* out);
PPREG_API ppreg_status ppreg_sample_weibull(double alpha, double beta, int n,
                                            uint64_t seed, double* out);
PPREG_API ppreg_status ppreg_sample_logistic(double mu, double sigma, int n,
                                             uint64_t seed, double* out);

/* ---- fitting ---- */

typedef struct ppreg_fit ppreg_fit;

PPREG_API ppreg_status ppreg_fit_wls(ppreg_dist dist, const double* data,
                                     int n, const ppreg_table* table,
                                     ppreg_fit** out);
PPREG_API ppreg_status ppreg_fit_gls_full(ppreg_dist dist, const double* data,
                                          int n, const ppreg_cov* cov,
                                          ppreg_fit** out);
/* init may be NULL: the exact-weights WLS fit is used as starting point. */
PPREG_API ppreg_status ppreg_fit_ml(ppreg_dist dist, const double* data, int n,
                                    const ppreg_fit* init, ppreg_fit** out);
PPREG_API void ppreg_fit_free(ppreg_fit* fit);

/* For the logistic family alpha is the location and beta the scale. */
PPREG_API double ppreg_fit_alpha(const ppreg_fit* fit);
PPREG_API double ppreg_fit_beta(const ppreg_fit* fit);
PPREG_API double ppreg_fit_theta1(const ppreg_fit* fit);
PPREG_API double ppreg_fit_theta2(const ppreg_fit* fit);
PPREG_API int ppreg_fit_converged(const ppreg_fit* fit);
PPREG_API int ppreg_fit_iterations(const ppreg_fit* fit);
PPREG_API double ppreg_fit_condition_number(const ppreg_fit* fit);
/* Returns 0 and leaves *out untouched when no likelihood is attached. */
PPREG_API int ppreg_fit_log_likelihood(const ppreg_fit* fit, double* out);
PPREG_API int ppreg_fit_warning_count(const ppreg_fit* fit);
PPREG_API const char* ppreg_fit_warning(const ppreg_fit* fit, int index);
/* Flat JSON record: dist, method, alpha, beta, theta1, theta2, converged,
 * iterations, condition_number, log_likelihood, warnings. */
PPREG_API ppreg_status ppreg_fit_to_json(const ppreg_fit* fit, char** out);

/* ---- large-sample ML moments ---- */

typedef struct ppreg_ml_asymptotics {
  double var_alpha;
  double var_beta;
  double bias_alpha; /* meaningful only when has_bias != 0 */
  double bias_beta;
  int has_bias;
} ppreg_ml_asymptotics;

/* Log-logistic and Weibull only; the Weibull result carries no biases. */
PPREG_API ppreg_status ppreg_ml_asymptotics_eval(ppreg_dist dist, double alpha,
                                                 double beta, int n,
                                                 ppreg_ml_asymptotics* out);

/* var_ml / var_other. */
PPREG_API ppreg_status ppreg_efficiency(double var_ml, double var_other,
                                        double* out);

/* ---- bootstrap standard errors ---- */

PPREG_API ppreg_status ppreg_bootstrap_se(ppreg_dist dist, const double* data,
                                          int n, ppreg_fit_method method,
                                          int reps, uint64_t seed,
                                          double* se_alpha, double* se_beta,
                                          int* failed, int* degenerate);

/* ---- replicated bias/MSE studies ---- */

typedef struct ppreg_study ppreg_study;

typedef struct ppreg_study_config {
  ppreg_dist dist;
  double alpha;          /* true scale */
  const double* betas;   /* true shapes; NULL selects the default grid */
  int n_betas;
  const int* ns;         /* sample sizes; NULL selects {15, 25, 50, 100} */
  int n_ns;
  int reps;
  uint64_t seed;
  int use_wls_exact; /* nonzero to include the method */
  int use_ml;
} ppreg_study_config;

PPREG_API ppreg_status ppreg_study_run(const ppreg_study_config* config,
                                       ppreg_study** out);
PPREG_API void ppreg_study_free(ppreg_study* study);
/* parameter: 0 = alpha, 1 = beta. */
PPREG_API ppreg_status ppreg_study_cell(const ppreg_study* study, int n,
                                        double beta_true,
                                        ppreg_fit_method method, int parameter,
                                        double* bias, double* mse,
                                        long long* failures);
/* CSV with header dist,n,beta_true,method,parameter,bias,mse,failures. */
PPREG_API ppreg_status ppreg_study_to_csv(const ppreg_study* study, char** out);

/* ---- per-rank variance comparison (exact / Monte Carlo / asymptotic) ---- */

typedef struct ppreg_figure ppreg_figure;

PPREG_API ppreg_status ppreg_figure_create(ppreg_dist dist, int n,
                                           long long mc_m, uint64_t seed,
                                           ppreg_scheme scheme,
                                           ppreg_figure** out);
PPREG_API void ppreg_figure_free(ppreg_figure* figure);
PPREG_API ppreg_status ppreg_figure_row(const ppreg_figure* figure, int r,
                                        double* exact_var, double* mc_var,
                                        double* asymptotic_var);
/* CSV with header rank,exact,mc,asymptotic. */
PPREG_API ppreg_status ppreg_figure_to_csv(const ppreg_figure* figure,
                                           char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PPREG_H */
