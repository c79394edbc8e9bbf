#include "sampling.hpp"

#include <cmath>

#include "errors.hpp"
#include "textio.hpp"

namespace ppreg {

void validate(const DistributionParams& p) {
  if (!std::isfinite(p.alpha) || p.alpha <= 0.0) {
    fail(ErrorCode::Domain, "scale alpha must be finite and > 0, got " +
                                format_double(p.alpha));
  }
  if (!std::isfinite(p.beta) || p.beta <= 0.0) {
    fail(ErrorCode::Domain,
         "shape beta must be finite and > 0, got " + format_double(p.beta));
  }
}

void validate(const LocScaleParams& p) {
  if (!std::isfinite(p.mu)) {
    fail(ErrorCode::Domain, "location mu must be finite");
  }
  if (!std::isfinite(p.sigma) || p.sigma <= 0.0) {
    fail(ErrorCode::Domain,
         "scale sigma must be finite and > 0, got " + format_double(p.sigma));
  }
}

namespace {

void check_open_unit(double u) {
  if (!(u > 0.0) || !(u < 1.0)) {
    fail(ErrorCode::Domain, "u must lie in the open interval (0,1), got " +
                                format_double(u));
  }
}

void check_count(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "sample size must be >= 1");
}

}  // namespace

double loglogistic_quantile(const DistributionParams& p, double u) {
  validate(p);
  check_open_unit(u);
  return p.alpha * std::pow(u / (1.0 - u), 1.0 / p.beta);
}

double weibull_quantile(const DistributionParams& p, double u) {
  validate(p);
  check_open_unit(u);
  // -log(1-u) via log1p keeps precision for small u.
  return p.alpha * std::pow(-std::log1p(-u), 1.0 / p.beta);
}

double logistic_quantile(const LocScaleParams& p, double u) {
  validate(p);
  check_open_unit(u);
  return p.mu + p.sigma * (std::log(u) - std::log1p(-u));
}

std::vector<double> sample_loglogistic(const DistributionParams& p, int n,
                                       SplitMix64& rng) {
  validate(p);
  check_count(n);
  std::vector<double> out(static_cast<std::size_t>(n));
  const double inv_beta = 1.0 / p.beta;
  for (double& x : out) {
    const double u = rng.uniform_open01();
    x = p.alpha * std::pow(u / (1.0 - u), inv_beta);
  }
  return out;
}

std::vector<double> sample_weibull(const DistributionParams& p, int n,
                                   SplitMix64& rng) {
  validate(p);
  check_count(n);
  std::vector<double> out(static_cast<std::size_t>(n));
  const double inv_beta = 1.0 / p.beta;
  for (double& x : out) {
    const double u = rng.uniform_open01();
    x = p.alpha * std::pow(-std::log1p(-u), inv_beta);
  }
  return out;
}

std::vector<double> sample_logistic(const LocScaleParams& p, int n,
                                    SplitMix64& rng) {
  validate(p);
  check_count(n);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (double& x : out) {
    const double u = rng.uniform_open01();
    x = p.mu + p.sigma * (std::log(u) - std::log1p(-u));
  }
  return out;
}

std::vector<double> sample_loglogistic(const DistributionParams& p, int n,
                                       std::uint64_t seed) {
  SplitMix64 rng = substream(seed, kStreamSample);
  return sample_loglogistic(p, n, rng);
}

std::vector<double> sample_weibull(const DistributionParams& p, int n,
                                   std::uint64_t seed) {
  SplitMix64 rng = substream(seed, kStreamSample);
  return sample_weibull(p, n, rng);
}

std::vector<double> sample_logistic(const LocScaleParams& p, int n,
                                    std::uint64_t seed) {
  SplitMix64 rng = substream(seed, kStreamSample);
  return sample_logistic(p, n, rng);
}

}  // namespace ppreg
