#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sampling.hpp"

namespace ppreg {

enum class DistributionKind { LogLogistic, Weibull, Logistic };
enum class PlottingScheme { Standard, Bernard };
enum class MomentMethod { Exact, Asymptotic, MonteCarlo };

const char* to_string(DistributionKind k);
const char* to_string(PlottingScheme s);
const char* to_string(MomentMethod m);

// Moments of the r-th order-statistic residual on the linearized scale.
//
// Log-logistic (and logistic) residuals are logit-transformed uniform order
// statistics: mean psi(r) - psi(n-r+1), variance psi'(r) + psi'(n-r+1).
//
// Weibull residuals are log(-log(1-u))-transformed: closed binomial sums for
// the mean and second moment.  The sums alternate in sign; when the running
// cancellation estimate exceeds ~3e-11 of the result, or n > 60 (binomials no
// longer integer-exact in doubles), the implementation switches to adaptive
// Gauss-Legendre quadrature of the order-statistic density written in log
// form, so the result stays accurate to ~1e-12 relative at any n.
double loglogistic_residual_mean(int r, int n);
double loglogistic_residual_var(int r, int n);
double weibull_residual_mean(int r, int n);
double weibull_residual_second_moment(int r, int n);
double weibull_residual_var(int r, int n);

// r/(n+1), or (r-0.3)/(n+0.4) under the Bernard scheme.
double plotting_position(int r, int n, PlottingScheme scheme);

// Large-sample approximations built from the plotting position p:
// variance 1/(n p (1-p)); covariance 1/(n p_s (1-p_r)) for r <= s.
double asymptotic_residual_var(int r, int n, PlottingScheme scheme);
double asymptotic_residual_cov(int r, int s, int n, PlottingScheme scheme);

struct ResidualMomentTable {
  DistributionKind dist;
  int n = 0;
  MomentMethod method = MomentMethod::Exact;
  std::vector<double> means;
  std::vector<double> variances;
  std::vector<double> weights;  // 1/variance per rank
};

struct CovarianceEstimate {
  DistributionKind dist;
  int n = 0;
  long long m = 0;  // replications used
  std::uint64_t seed = 0;
  std::vector<double> matrix;  // row-major n x n, symmetric
  double log_det = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;

  double entry(int r, int s) const;  // 1-based ranks
};

// Monte Carlo estimate of the covariance of transformed uniform order
// statistics: m replications of n sorted uniforms pushed through the family
// transform (logit for LogLogistic/Logistic, log(-log) for Weibull).
// Replication j draws from substream (seed, kStreamCovariance | j), and the
// accumulation order is fixed, so results are reproducible bit for bit.
CovarianceEstimate mc_covariance(DistributionKind dist, int n, long long m,
                                 std::uint64_t seed);

// Assembles per-rank means, variances and reciprocal-variance weights.
// Means are always the exact formulas except under Asymptotic, which uses the
// linearized plotting position.  The Logistic family shares the log-logistic
// variances and negates the means (its regression response is
// log((1-F)/F)).  mc_m and seed are consumed only by MonteCarlo.
ResidualMomentTable moment_table(DistributionKind dist, int n,
                                 MomentMethod method,
                                 PlottingScheme scheme = PlottingScheme::Standard,
                                 long long mc_m = 0, std::uint64_t seed = 0);

// CSV with header rank,mean,variance,weight; numbers in shortest
// round-trip form.
std::string to_csv(const ResidualMomentTable& table);

// Raw n x n matrix, one row per line, no header.
std::string to_csv(const CovarianceEstimate& cov);

}  // namespace ppreg
