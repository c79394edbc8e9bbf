#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resweights.hpp"
#include "sampling.hpp"

namespace ppreg {

enum class FitMethod { WlsExact, WlsAsymptotic, WlsMc, GlsFull, Ml };

const char* to_string(FitMethod m);

struct FitDiagnostics {
  double condition_number = 0.0;  // of the (whitened) design
  int iterations = 0;
  bool converged = false;
  std::optional<double> log_likelihood;  // set by ML only
  std::vector<std::string> warnings;
};

// Regression parameterization: response = theta1 + theta2 * regressor, with
// regressor log(x) for LogLogistic/Weibull (theta1 = -beta log alpha,
// theta2 = beta) and raw x for Logistic (theta1 = mu/sigma,
// theta2 = -1/sigma).  For the Logistic family, alpha holds the location and
// beta the scale so that one record shape serves all three families.
struct FitResult {
  DistributionKind dist = DistributionKind::LogLogistic;
  FitMethod method = FitMethod::WlsExact;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  FitDiagnostics diagnostics;
};

// Weighted least squares against a per-rank moment table.  Data are sorted
// internally; the table must have been built for the same n and family.
// Fails on nonpositive observations (log families), fewer than two distinct
// values, or a nonpositive fitted shape.
FitResult fit_wls(DistributionKind dist, std::vector<double> data,
                  const ResidualMomentTable& table);

// Generalized least squares under a full residual covariance.  The
// covariance is whitened through its eigendecomposition; numerically
// singular matrices are rejected, ill-conditioned or near-singular ones are
// flagged in diagnostics.warnings.
FitResult fit_gls_full(DistributionKind dist, std::vector<double> data,
                       const CovarianceEstimate& cov);

// Maximum likelihood by damped Newton iteration on the score equations with
// backtracking, run in log-parameter space so positivity is structural.
// Starting point comes from init when given, otherwise from fit_wls with
// exact weights.  Budget: 100 iterations, 30 step halvings; convergence is
// score norm below 1e-9 relative to max(1, |log likelihood|).
FitResult fit_ml(DistributionKind dist, std::vector<double> data,
                 const FitResult* init = nullptr);

// Large-sample ML moments.  LogLogistic: biases 1.5 alpha/(n beta^2) and
// 1.2764 beta/n with variances 3 alpha^2/(n beta^2), 0.6993 beta^2/n
// (Shoukri, Mian & Tracy 1988).  Weibull: Cramer-Rao variances
// 1.109 (alpha/beta)^2/n and 0.608 beta^2/n; no usable bias expressions.
// Logistic is not covered and is rejected.
struct MlAsymptotics {
  DistributionKind dist = DistributionKind::LogLogistic;
  double var_alpha = 0.0;
  double var_beta = 0.0;
  std::optional<double> bias_alpha;
  std::optional<double> bias_beta;
};

MlAsymptotics ml_asymptotics(DistributionKind dist,
                             const DistributionParams& params, int n);

// Ratio var_ml / var_other; the classical efficiency of the competing
// estimator when var_other is its variance.
double efficiency(double var_ml, double var_other);

// Nonparametric bootstrap of fitted-parameter standard errors.  Resample j
// draws its indices from substream (seed, kStreamBootstrap | j).  Degenerate
// resamples (a single distinct value) are dropped and counted separately;
// genuine fit failures are dropped and counted, and more than 20% of them is
// an error.  se_alpha/se_beta are location/scale for the Logistic family.
struct BootstrapResult {
  double se_alpha = 0.0;
  double se_beta = 0.0;
  int failed = 0;
  int degenerate = 0;
  int used = 0;
};

BootstrapResult bootstrap_se(DistributionKind dist,
                             const std::vector<double>& data, FitMethod method,
                             int reps, std::uint64_t seed,
                             PlottingScheme scheme = PlottingScheme::Standard,
                             long long mc_m = 5000);

// Profile ML scale for a fixed Weibull shape: ((1/n) sum x_i^beta)^(1/beta).
double weibull_ml_scale_given_shape(const std::vector<double>& data,
                                    double beta);

// Flat JSON record with keys dist, method, alpha, beta, theta1, theta2,
// converged, iterations, condition_number, log_likelihood, warnings.
std::string to_json(const FitResult& fit);

}  // namespace ppreg
