// C binding.  Every entry point traps exceptions at the language boundary,
// stows the message in a thread-local slot for ppreg_last_error and returns a
// status code; no exception may cross into the caller.

#include "ppreg/ppreg.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fitcore.hpp"
#include "resweights.hpp"
#include "sampling.hpp"
#include "simstudy.hpp"
#include "specfun.hpp"

struct ppreg_table {
  ppreg::ResidualMomentTable value;
};

struct ppreg_cov {
  ppreg::CovarianceEstimate value;
};

struct ppreg_fit {
  ppreg::FitResult value;
};

struct ppreg_study {
  ppreg::StudyReport value;
};

struct ppreg_figure {
  ppreg::FigureData value;
};

namespace {

thread_local std::string g_last_error;

ppreg_status status_from(ppreg::ErrorCode code) {
  using ppreg::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument:
      return PPREG_ERR_INVALID_ARGUMENT;
    case ErrorCode::Domain:
      return PPREG_ERR_DOMAIN;
    case ErrorCode::DegenerateData:
      return PPREG_ERR_DEGENERATE_DATA;
    case ErrorCode::NonpositiveSlope:
      return PPREG_ERR_NONPOSITIVE_SLOPE;
    case ErrorCode::SingularCovariance:
      return PPREG_ERR_SINGULAR_COVARIANCE;
    case ErrorCode::NoConvergence:
      return PPREG_ERR_NO_CONVERGENCE;
    case ErrorCode::BootstrapFailed:
      return PPREG_ERR_BOOTSTRAP_FAILED;
    case ErrorCode::Unsupported:
      return PPREG_ERR_UNSUPPORTED;
    case ErrorCode::Numerical:
      return PPREG_ERR_NUMERICAL;
  }
  return PPREG_ERR_INTERNAL;
}

template <typename Fn>
ppreg_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PPREG_OK;
  } catch (const ppreg::Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PPREG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unidentified failure";
    return PPREG_ERR_INTERNAL;
  }
}

ppreg_status fail_invalid(const char* message) {
  g_last_error = message;
  return PPREG_ERR_INVALID_ARGUMENT;
}

bool to_kind(ppreg_dist dist, ppreg::DistributionKind* out) {
  switch (dist) {
    case PPREG_DIST_LOGLOGISTIC:
      *out = ppreg::DistributionKind::LogLogistic;
      return true;
    case PPREG_DIST_WEIBULL:
      *out = ppreg::DistributionKind::Weibull;
      return true;
    case PPREG_DIST_LOGISTIC:
      *out = ppreg::DistributionKind::Logistic;
      return true;
  }
  return false;
}

bool to_scheme(ppreg_scheme scheme, ppreg::PlottingScheme* out) {
  switch (scheme) {
    case PPREG_SCHEME_STANDARD:
      *out = ppreg::PlottingScheme::Standard;
      return true;
    case PPREG_SCHEME_BERNARD:
      *out = ppreg::PlottingScheme::Bernard;
      return true;
  }
  return false;
}

bool to_table_method(ppreg_table_method method, ppreg::MomentMethod* out) {
  switch (method) {
    case PPREG_TABLE_EXACT:
      *out = ppreg::MomentMethod::Exact;
      return true;
    case PPREG_TABLE_ASYMPTOTIC:
      *out = ppreg::MomentMethod::Asymptotic;
      return true;
    case PPREG_TABLE_MONTE_CARLO:
      *out = ppreg::MomentMethod::MonteCarlo;
      return true;
  }
  return false;
}

bool to_fit_method(ppreg_fit_method method, ppreg::FitMethod* out) {
  switch (method) {
    case PPREG_FIT_WLS_EXACT:
      *out = ppreg::FitMethod::WlsExact;
      return true;
    case PPREG_FIT_WLS_ASYMPTOTIC:
      *out = ppreg::FitMethod::WlsAsymptotic;
      return true;
    case PPREG_FIT_WLS_MC:
      *out = ppreg::FitMethod::WlsMc;
      return true;
    case PPREG_FIT_GLS_FULL:
      *out = ppreg::FitMethod::GlsFull;
      return true;
    case PPREG_FIT_ML:
      *out = ppreg::FitMethod::Ml;
      return true;
  }
  return false;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ppreg_status export_string(const std::string& s, char** out) {
  *out = dup_string(s);
  if (*out == nullptr) {
    g_last_error = "out of memory";
    return PPREG_ERR_INTERNAL;
  }
  return PPREG_OK;
}

std::vector<double> copy_data(const double* data, int n) {
  if (data == nullptr) ppreg::fail(ppreg::ErrorCode::InvalidArgument, "data must not be null");
  if (n < 0) ppreg::fail(ppreg::ErrorCode::InvalidArgument, "n must be nonnegative");
  return std::vector<double>(data, data + n);
}

template <typename Fn>
ppreg_status eval_scalar(double* out, Fn&& fn) {
  if (out == nullptr) return fail_invalid("out must not be null");
  return guarded([&] { *out = fn(); });
}

}  // namespace

extern "C" {

const char* ppreg_status_name(ppreg_status status) {
  switch (status) {
    case PPREG_OK:
      return "ok";
    case PPREG_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case PPREG_ERR_DOMAIN:
      return "domain";
    case PPREG_ERR_DEGENERATE_DATA:
      return "degenerate_data";
    case PPREG_ERR_NONPOSITIVE_SLOPE:
      return "nonpositive_slope";
    case PPREG_ERR_SINGULAR_COVARIANCE:
      return "singular_covariance";
    case PPREG_ERR_NO_CONVERGENCE:
      return "no_convergence";
    case PPREG_ERR_BOOTSTRAP_FAILED:
      return "bootstrap_failed";
    case PPREG_ERR_UNSUPPORTED:
      return "unsupported";
    case PPREG_ERR_NUMERICAL:
      return "numerical";
    case PPREG_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* ppreg_last_error(void) { return g_last_error.c_str(); }

void ppreg_string_free(char* s) { std::free(s); }

ppreg_status ppreg_digamma(double x, double* out) {
  return eval_scalar(out, [&] { return ppreg::digamma(x); });
}

ppreg_status ppreg_trigamma(double x, double* out) {
  return eval_scalar(out, [&] { return ppreg::trigamma(x); });
}

ppreg_status ppreg_log_gamma(double x, double* out) {
  return eval_scalar(out, [&] { return ppreg::log_gamma(x); });
}

ppreg_status ppreg_loglogistic_residual_mean(int r, int n, double* out) {
  return eval_scalar(out, [&] { return ppreg::loglogistic_residual_mean(r, n); });
}

ppreg_status ppreg_loglogistic_residual_var(int r, int n, double* out) {
  return eval_scalar(out, [&] { return ppreg::loglogistic_residual_var(r, n); });
}

ppreg_status ppreg_weibull_residual_mean(int r, int n, double* out) {
  return eval_scalar(out, [&] { return ppreg::weibull_residual_mean(r, n); });
}

ppreg_status ppreg_weibull_residual_second_moment(int r, int n, double* out) {
  return eval_scalar(out, [&] { return ppreg::weibull_residual_second_moment(r, n); });
}

ppreg_status ppreg_weibull_residual_var(int r, int n, double* out) {
  return eval_scalar(out, [&] { return ppreg::weibull_residual_var(r, n); });
}

ppreg_status ppreg_plotting_position(int r, int n, ppreg_scheme scheme, double* out) {
  ppreg::PlottingScheme s;
  if (!to_scheme(scheme, &s)) return fail_invalid("unknown plotting scheme");
  return eval_scalar(out, [&] { return ppreg::plotting_position(r, n, s); });
}

ppreg_status ppreg_asymptotic_residual_var(int r, int n, ppreg_scheme scheme, double* out) {
  ppreg::PlottingScheme s;
  if (!to_scheme(scheme, &s)) return fail_invalid("unknown plotting scheme");
  return eval_scalar(out, [&] { return ppreg::asymptotic_residual_var(r, n, s); });
}

ppreg_status ppreg_asymptotic_residual_cov(int r, int s, int n, ppreg_scheme scheme,
                                           double* out) {
  ppreg::PlottingScheme sc;
  if (!to_scheme(scheme, &sc)) return fail_invalid("unknown plotting scheme");
  return eval_scalar(out, [&] { return ppreg::asymptotic_residual_cov(r, s, n, sc); });
}

ppreg_status ppreg_table_create(ppreg_dist dist, int n, ppreg_table_method method,
                                ppreg_scheme scheme, long long mc_m, uint64_t seed,
                                ppreg_table** out) {
  if (out == nullptr) return fail_invalid("out must not be null");
  *out = nullptr;
  ppreg::DistributionKind kind;
  ppreg::MomentMethod mm;
  ppreg::PlottingScheme sc;
  if (!to_kind(dist, &kind)) return fail_invalid("unknown distribution");
  if (!to_table_method(method, &mm)) return fail_invalid("unknown table method");
  if (!to_scheme(scheme, &sc)) return fail_invalid("unknown plotting scheme");
  return guarded([&] {
    auto table = ppreg::moment_table(kind, n, mm, sc, mc_m, seed);
    *out = new ppreg_table{std::move(table)};
  });
}

void ppreg_table_free(ppreg_table* table) { delete table; }

int ppreg_table_size(const ppreg_table* table) {
  return table == nullptr ? 0 : table->value.n;
}

ppreg_status ppreg_table_row(const ppreg_table* table, int r, double* mean,
                             double* variance, double* weight) {
  if (table == nullptr) return fail_invalid("table must not be null");
  if (r < 1 || r > table->value.n) return fail_invalid("rank out of range");
  const auto i = static_cast<std::size_t>(r - 1);
  if (mean != nullptr) *mean = table->value.means[i];
  if (variance != nullptr) *variance = table->value.variances[i];
  if (weight != nullptr) *weight = table->value.weights[i];
  return PPREG_OK;
}

ppreg_status ppreg_table_to_csv(const ppreg_table* table, char** out) {
  if (table == nullptr || out == nullptr) return fail_invalid("null argument");
  return export_string(ppreg::to_csv(table->value), out);
}

ppreg_status ppreg_cov_create(ppreg_dist dist, int n, long long m, uint64_t seed,
                              ppreg_cov** out) {
  if (out == nullptr) return fail_invalid("out must not be null");
  *out = nullptr;
  ppreg::DistributionKind kind;
  if (!to_kind(dist, &kind)) return fail_invalid("unknown distribution");
  return guarded([&] {
    auto cov = ppreg::mc_covariance(kind, n, m, seed);
    *out = new ppreg_cov{std::move(cov)};
  });
}

void ppreg_cov_free(ppreg_cov* cov) { delete cov; }

int ppreg_cov_size(const ppreg_cov* cov) { return cov == nullptr ? 0 : cov->value.n; }

ppreg_status ppreg_cov_entry(const ppreg_cov* cov, int r, int s, double* out) {
  if (cov == nullptr) return fail_invalid("cov must not be null");
  return eval_scalar(out, [&] { return cov->value.entry(r, s); });
}

ppreg_status ppreg_cov_log_det(const ppreg_cov* cov, double* out) {
  if (cov == nullptr) return fail_invalid("cov must not be null");
  return eval_scalar(out, [&] { return cov->value.log_det; });
}

ppreg_status ppreg_cov_min_eigenvalue(const ppreg_cov* cov, double* out) {
  if (cov == nullptr) return fail_invalid("cov must not be null");
  return eval_scalar(out, [&] { return cov->value.min_eigenvalue; });
}

ppreg_status ppreg_cov_max_eigenvalue(const ppreg_cov* cov, double* out) {
  if (cov == nullptr) return fail_invalid("cov must not be null");
  return eval_scalar(out, [&] { return cov->value.max_eigenvalue; });
}

ppreg_status ppreg_cov_to_csv(const ppreg_cov* cov, char** out) {
  if (cov == nullptr || out == nullptr) return fail_invalid("null argument");
  return export_string(ppreg::to_csv(cov->value), out);
}

ppreg_status ppreg_sample_loglogistic(double alpha, double beta, int n, uint64_t seed,
                                      double* out) {
  if (out == nullptr) return fail_invalid("out must not be null");
  return guarded([&] {
    auto x = ppreg::sample_loglogistic({alpha, beta}, n, seed);
    std::memcpy(out, x.data(), x.size() * sizeof(double));
  });
}

ppreg_status ppreg_sample_weibull(double alpha, double beta, int n, uint64_t seed,
                                  double* out) {
  if (out == nullptr) return fail_invalid("out must not be null");
  return guarded([&] {
    auto x = ppreg::sample_weibull({alpha, beta}, n, seed);
    std::memcpy(out, x.data(), x.size() * sizeof(double));
  });
}

ppreg_status ppreg_sample_logistic(double mu, double sigma, int n, uint64_t seed,
                                   double* out) {
  if (out == nullptr) return fail_invalid("out must not be null");
  return guarded([&] {
    auto x = ppreg::sample_logistic({mu, sigma}, n, seed);
    std::memcpy(out, x.data(), x.size() * sizeof(double));
  });
}

ppreg_status ppreg_fit_wls(ppreg_dist dist, const double* data, int n,
                           const ppreg_table* table, ppreg_fit** out) {
  if (out == nullptr) return fail_invalid("out must not be null");
  *out = nullptr;
  if (table == nullptr) return fail_invalid("table must not be null");
  ppreg::DistributionKind kind;
  if (!to_kind(dist, &kind)) return fail_invalid("unknown distribution");
  return guarded([&] {
    auto fit = ppreg::fit_wls(kind, copy_data(data, n), table->value);
    *out = new ppreg_fit{std::move(fit)};
  });
}

ppreg_status ppreg_fit_gls_full(ppreg_dist dist, const double* data, int n,
                                const ppreg_cov* cov, ppreg_fit** out) {
  if (out == nullptr) return fail_invalid("out must not be null");
  *out = nullptr;
  if (cov == nullptr) return fail_invalid("cov must not be null");
  ppreg::DistributionKind kind;
  if (!to_kind(dist, &kind)) return fail_invalid("unknown distribution");
  return guarded([&] {
    auto fit = ppreg::fit_gls_full(kind, copy_data(data, n), cov->value);
    *out = new ppreg_fit{std::move(fit)};
  });
}

ppreg_status ppreg_fit_ml(ppreg_dist dist, const double* data, int n,
                          const ppreg_fit* init, ppreg_fit** out) {
  if (out == nullptr) return fail_invalid("out must not be null");
  *out = nullptr;
  ppreg::DistributionKind kind;
  if (!to_kind(dist, &kind)) return fail_invalid("unknown distribution");
  return guarded([&] {
    const ppreg::FitResult* start = init == nullptr ? nullptr : &init->value;
    auto fit = ppreg::fit_ml(kind, copy_data(data, n), start);
    *out = new ppreg_fit{std::move(fit)};
  });
}

void ppreg_fit_free(ppreg_fit* fit) { delete fit; }

double ppreg_fit_alpha(const ppreg_fit* fit) {
  return fit == nullptr ? 0.0 : fit->value.alpha;
}

double ppreg_fit_beta(const ppreg_fit* fit) {
  return fit == nullptr ? 0.0 : fit->value.beta;
}

double ppreg_fit_theta1(const ppreg_fit* fit) {
  return fit == nullptr ? 0.0 : fit->value.theta1;
}

double ppreg_fit_theta2(const ppreg_fit* fit) {
  return fit == nullptr ? 0.0 : fit->value.theta2;
}

int ppreg_fit_converged(const ppreg_fit* fit) {
  return fit != nullptr && fit->value.diagnostics.converged ? 1 : 0;
}

int ppreg_fit_iterations(const ppreg_fit* fit) {
  return fit == nullptr ? 0 : fit->value.diagnostics.iterations;
}

double ppreg_fit_condition_number(const ppreg_fit* fit) {
  return fit == nullptr ? 0.0 : fit->value.diagnostics.condition_number;
}

int ppreg_fit_log_likelihood(const ppreg_fit* fit, double* out) {
  if (fit == nullptr || !fit->value.diagnostics.log_likelihood.has_value()) return 0;
  if (out != nullptr) *out = *fit->value.diagnostics.log_likelihood;
  return 1;
}

int ppreg_fit_warning_count(const ppreg_fit* fit) {
  return fit == nullptr ? 0 : static_cast<int>(fit->value.diagnostics.warnings.size());
}

const char* ppreg_fit_warning(const ppreg_fit* fit, int index) {
  if (fit == nullptr || index < 0 ||
      index >= static_cast<int>(fit->value.diagnostics.warnings.size())) {
    return nullptr;
  }
  return fit->value.diagnostics.warnings[static_cast<std::size_t>(index)].c_str();
}

ppreg_status ppreg_fit_to_json(const ppreg_fit* fit, char** out) {
  if (fit == nullptr || out == nullptr) return fail_invalid("null argument");
  return export_string(ppreg::to_json(fit->value), out);
}

ppreg_status ppreg_ml_asymptotics_eval(ppreg_dist dist, double alpha, double beta,
                                       int n, ppreg_ml_asymptotics* out) {
  if (out == nullptr) return fail_invalid("out must not be null");
  ppreg::DistributionKind kind;
  if (!to_kind(dist, &kind)) return fail_invalid("unknown distribution");
  return guarded([&] {
    auto a = ppreg::ml_asymptotics(kind, {alpha, beta}, n);
    out->var_alpha = a.var_alpha;
    out->var_beta = a.var_beta;
    out->has_bias = a.bias_alpha.has_value() ? 1 : 0;
    out->bias_alpha = a.bias_alpha.value_or(0.0);
    out->bias_beta = a.bias_beta.value_or(0.0);
  });
}

ppreg_status ppreg_efficiency(double var_ml, double var_other, double* out) {
  return eval_scalar(out, [&] { return ppreg::efficiency(var_ml, var_other); });
}

ppreg_status ppreg_bootstrap_se(ppreg_dist dist, const double* data, int n,
                                ppreg_fit_method method, int reps, uint64_t seed,
                                double* se_alpha, double* se_beta, int* failed,
                                int* degenerate) {
  ppreg::DistributionKind kind;
  ppreg::FitMethod fm;
  if (!to_kind(dist, &kind)) return fail_invalid("unknown distribution");
  if (!to_fit_method(method, &fm)) return fail_invalid("unknown fit method");
  return guarded([&] {
    auto boot = ppreg::bootstrap_se(kind, copy_data(data, n), fm, reps, seed);
    if (se_alpha != nullptr) *se_alpha = boot.se_alpha;
    if (se_beta != nullptr) *se_beta = boot.se_beta;
    if (failed != nullptr) *failed = boot.failed;
    if (degenerate != nullptr) *degenerate = boot.degenerate;
  });
}

ppreg_status ppreg_study_run(const ppreg_study_config* config, ppreg_study** out) {
  if (out == nullptr) return fail_invalid("out must not be null");
  *out = nullptr;
  if (config == nullptr) return fail_invalid("config must not be null");
  ppreg::DistributionKind kind;
  if (!to_kind(config->dist, &kind)) return fail_invalid("unknown distribution");
  if (config->betas == nullptr && config->n_betas != 0)
    return fail_invalid("betas is null but n_betas is nonzero");
  if (config->ns == nullptr && config->n_ns != 0)
    return fail_invalid("ns is null but n_ns is nonzero");
  return guarded([&] {
    ppreg::StudyConfig cfg;
    cfg.dist = kind;
    cfg.alpha = config->alpha;
    cfg.beta_grid = config->betas == nullptr
                        ? ppreg::default_beta_grid(kind)
                        : std::vector<double>(config->betas,
                                              config->betas + config->n_betas);
    cfg.n_grid = config->ns == nullptr
                     ? ppreg::default_n_grid()
                     : std::vector<int>(config->ns, config->ns + config->n_ns);
    cfg.reps = config->reps;
    cfg.seed = config->seed;
    cfg.methods.clear();
    if (config->use_wls_exact != 0) cfg.methods.push_back(ppreg::FitMethod::WlsExact);
    if (config->use_ml != 0) cfg.methods.push_back(ppreg::FitMethod::Ml);
    auto report = ppreg::run_study(cfg);
    *out = new ppreg_study{std::move(report)};
  });
}

void ppreg_study_free(ppreg_study* study) { delete study; }

ppreg_status ppreg_study_cell(const ppreg_study* study, int n, double beta_true,
                              ppreg_fit_method method, int parameter, double* bias,
                              double* mse, long long* failures) {
  if (study == nullptr) return fail_invalid("study must not be null");
  ppreg::FitMethod fm;
  if (!to_fit_method(method, &fm)) return fail_invalid("unknown fit method");
  if (parameter != 0 && parameter != 1) return fail_invalid("parameter must be 0 or 1");
  const ppreg::StudyCell* cell = study->value.find(n, beta_true, fm, parameter);
  if (cell == nullptr) return fail_invalid("no such study cell");
  if (bias != nullptr) *bias = cell->bias;
  if (mse != nullptr) *mse = cell->mse;
  if (failures != nullptr) *failures = cell->failures;
  return PPREG_OK;
}

ppreg_status ppreg_study_to_csv(const ppreg_study* study, char** out) {
  if (study == nullptr || out == nullptr) return fail_invalid("null argument");
  return export_string(ppreg::to_csv(study->value), out);
}

ppreg_status ppreg_figure_create(ppreg_dist dist, int n, long long mc_m, uint64_t seed,
                                 ppreg_scheme scheme, ppreg_figure** out) {
  if (out == nullptr) return fail_invalid("out must not be null");
  *out = nullptr;
  ppreg::DistributionKind kind;
  ppreg::PlottingScheme sc;
  if (!to_kind(dist, &kind)) return fail_invalid("unknown distribution");
  if (!to_scheme(scheme, &sc)) return fail_invalid("unknown plotting scheme");
  return guarded([&] {
    auto figure = ppreg::figure_data(kind, n, mc_m, seed, sc);
    *out = new ppreg_figure{std::move(figure)};
  });
}

void ppreg_figure_free(ppreg_figure* figure) { delete figure; }

ppreg_status ppreg_figure_row(const ppreg_figure* figure, int r, double* exact_var,
                              double* mc_var, double* asymptotic_var) {
  if (figure == nullptr) return fail_invalid("figure must not be null");
  if (r < 1 || r > figure->value.n) return fail_invalid("rank out of range");
  const auto& row = figure->value.rows[static_cast<std::size_t>(r - 1)];
  if (exact_var != nullptr) *exact_var = row.exact_var;
  if (mc_var != nullptr) *mc_var = row.mc_var;
  if (asymptotic_var != nullptr) *asymptotic_var = row.asymptotic_var;
  return PPREG_OK;
}

ppreg_status ppreg_figure_to_csv(const ppreg_figure* figure, char** out) {
  if (figure == nullptr || out == nullptr) return fail_invalid("null argument");
  return export_string(ppreg::to_csv(figure->value), out);
}

}  // extern "C"
