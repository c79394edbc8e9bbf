#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"
#include "resweights.hpp"
#include "textio.hpp"

using namespace ppreg;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  REQUIRE(false);
  return ErrorCode::InvalidArgument;
}

constexpr double kPiSq6 = oracle::kPi * oracle::kPi / 6.0;

}  // namespace

TEST_CASE("log-logistic residual moments match integer partial sums") {
  for (int n = 2; n <= 40; ++n) {
    for (int r = 1; r <= n; ++r) {
      CHECK(loglogistic_residual_mean(r, n) ==
            doctest::Approx(oracle::loglogistic_mean_ref(r, n)).epsilon(1e-12));
      CHECK(loglogistic_residual_var(r, n) ==
            doctest::Approx(oracle::loglogistic_var_ref(r, n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("log-logistic residual symmetry") {
  for (int n : {2, 7, 24, 81}) {
    for (int r = 1; r <= n; ++r) {
      CHECK(loglogistic_residual_mean(r, n) ==
            doctest::Approx(-loglogistic_residual_mean(n - r + 1, n)).epsilon(1e-13));
      CHECK(loglogistic_residual_var(r, n) ==
            doctest::Approx(loglogistic_residual_var(n - r + 1, n)).epsilon(1e-13));
    }
  }
}

TEST_CASE("weibull rank-1 closed forms") {
  for (int n = 2; n <= 100; ++n) {
    const double c = oracle::kGamma + std::log(static_cast<double>(n));
    CHECK(weibull_residual_mean(1, n) == doctest::Approx(-c).epsilon(1e-13));
    CHECK(weibull_residual_second_moment(1, n) ==
          doctest::Approx(kPiSq6 + c * c).epsilon(1e-13));
    // The smallest-order-statistic residual has variance pi^2/6 at every n.
    CHECK(std::fabs(weibull_residual_var(1, n) - kPiSq6) < 1e-12);
  }
}

TEST_CASE("weibull moments match the log-axis Romberg oracle") {
  for (int n : {2, 3, 5, 10, 17, 30}) {
    for (int r = 1; r <= n; ++r) {
      const double m1 = oracle::weibull_log_moment_ref(r, n, 1);
      const double m2 = oracle::weibull_log_moment_ref(r, n, 2);
      CHECK(weibull_residual_mean(r, n) ==
            doctest::Approx(m1).epsilon(1e-9));
      CHECK(weibull_residual_second_moment(r, n) ==
            doctest::Approx(m2).epsilon(1e-9));
    }
  }
}

TEST_CASE("weibull quadrature path agrees with the oracle") {
  // n > 60 always routes through adaptive Gauss-Legendre internally.
  for (int n : {61, 75, 120}) {
    for (int r : {1, 2, n / 3, n / 2, n - 1, n}) {
      const double m1 = oracle::weibull_log_moment_ref(r, n, 1);
      const double m2 = oracle::weibull_log_moment_ref(r, n, 2);
      CHECK(weibull_residual_mean(r, n) == doctest::Approx(m1).epsilon(1e-9));
      CHECK(weibull_residual_second_moment(r, n) ==
            doctest::Approx(m2).epsilon(1e-9));
    }
  }
}

TEST_CASE("weibull moments are continuous across the path switch") {
  // Ranks near the cancellation threshold evaluate through either route;
  // both must land on the oracle.
  for (int n : {59, 60}) {
    for (int r = 1; r <= n; ++r) {
      CHECK(weibull_residual_mean(r, n) ==
            doctest::Approx(oracle::weibull_log_moment_ref(r, n, 1)).epsilon(1e-9));
    }
  }
}

TEST_CASE("weibull variance positivity") {
  for (int n : {2, 10, 45, 90}) {
    for (int r = 1; r <= n; ++r) CHECK(weibull_residual_var(r, n) > 0.0);
  }
}

TEST_CASE("rank validation") {
  CHECK(code_of([] { loglogistic_residual_mean(0, 5); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { loglogistic_residual_mean(6, 5); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { weibull_residual_var(3, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("plotting positions") {
  CHECK(plotting_position(1, 9, PlottingScheme::Standard) ==
        doctest::Approx(0.1).epsilon(1e-15));
  CHECK(plotting_position(5, 9, PlottingScheme::Standard) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(plotting_position(3, 10, PlottingScheme::Bernard) ==
        doctest::Approx(2.7 / 10.4).epsilon(1e-15));
  CHECK(code_of([] { plotting_position(0, 4, PlottingScheme::Standard); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("asymptotic variance and covariance formulas") {
  for (int n : {5, 20, 60}) {
    for (int r = 1; r <= n; ++r) {
      const double p = static_cast<double>(r) / (n + 1);
      CHECK(asymptotic_residual_var(r, n, PlottingScheme::Standard) ==
            doctest::Approx(1.0 / (n * p * (1.0 - p))).epsilon(1e-13));
    }
  }
  const double p2 = 2.0 / 11.0;
  const double p7 = 7.0 / 11.0;
  CHECK(asymptotic_residual_cov(2, 7, 10, PlottingScheme::Standard) ==
        doctest::Approx(1.0 / (10.0 * p7 * (1.0 - p2))).epsilon(1e-13));
  // Diagonal of the covariance coincides with the variance.
  CHECK(asymptotic_residual_cov(4, 4, 12, PlottingScheme::Standard) ==
        doctest::Approx(asymptotic_residual_var(4, 12, PlottingScheme::Standard))
            .epsilon(1e-14));
  CHECK(code_of([] {
          asymptotic_residual_cov(7, 2, 10, PlottingScheme::Standard);
        }) == ErrorCode::InvalidArgument);
}

TEST_CASE("exact moment tables wire the per-rank functions") {
  const auto ll = moment_table(DistributionKind::LogLogistic, 12, MomentMethod::Exact);
  const auto wb = moment_table(DistributionKind::Weibull, 12, MomentMethod::Exact);
  const auto lg = moment_table(DistributionKind::Logistic, 12, MomentMethod::Exact);
  REQUIRE(ll.n == 12);
  for (int r = 1; r <= 12; ++r) {
    const auto i = static_cast<std::size_t>(r - 1);
    CHECK(ll.means[i] == loglogistic_residual_mean(r, 12));
    CHECK(ll.variances[i] == loglogistic_residual_var(r, 12));
    CHECK(ll.weights[i] == doctest::Approx(1.0 / ll.variances[i]).epsilon(1e-15));
    CHECK(wb.means[i] == weibull_residual_mean(r, 12));
    CHECK(wb.variances[i] == weibull_residual_var(r, 12));
    // The logistic response runs in the opposite direction, same spread.
    CHECK(lg.means[i] == doctest::Approx(-ll.means[i]).epsilon(1e-15));
    CHECK(lg.variances[i] == ll.variances[i]);
  }
}

TEST_CASE("asymptotic tables use transformed plotting positions") {
  const int n = 9;
  const auto ll =
      moment_table(DistributionKind::LogLogistic, n, MomentMethod::Asymptotic);
  const auto wb =
      moment_table(DistributionKind::Weibull, n, MomentMethod::Asymptotic);
  const auto lg =
      moment_table(DistributionKind::Logistic, n, MomentMethod::Asymptotic);
  for (int r = 1; r <= n; ++r) {
    const auto i = static_cast<std::size_t>(r - 1);
    const double p = static_cast<double>(r) / (n + 1);
    CHECK(ll.means[i] == doctest::Approx(std::log(p / (1 - p))).epsilon(1e-13));
    CHECK(wb.means[i] ==
          doctest::Approx(std::log(-std::log1p(-p))).epsilon(1e-13));
    CHECK(lg.means[i] == doctest::Approx(-std::log(p / (1 - p))).epsilon(1e-13));
    CHECK(ll.variances[i] ==
          doctest::Approx(asymptotic_residual_var(r, n, PlottingScheme::Standard))
              .epsilon(1e-14));
  }
}

TEST_CASE("monte carlo tables keep exact means") {
  const auto mc = moment_table(DistributionKind::LogLogistic, 8,
                               MomentMethod::MonteCarlo,
                               PlottingScheme::Standard, 2000, 99u);
  const auto exact =
      moment_table(DistributionKind::LogLogistic, 8, MomentMethod::Exact);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(mc.means[i] == exact.means[i]);
    CHECK(mc.variances[i] > 0.0);
    CHECK(mc.weights[i] == doctest::Approx(1.0 / mc.variances[i]).epsilon(1e-15));
  }
  CHECK(code_of([] {
          moment_table(DistributionKind::Weibull, 8, MomentMethod::MonteCarlo,
                       PlottingScheme::Standard, 99, 1u);
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          moment_table(DistributionKind::Weibull, 1, MomentMethod::Exact);
        }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mc covariance basics") {
  const auto cov = mc_covariance(DistributionKind::Weibull, 10, 4000, 7u);
  CHECK(cov.n == 10);
  CHECK(cov.m == 4000);
  // Symmetry is exact by construction.
  for (int r = 1; r <= 10; ++r) {
    for (int s = r; s <= 10; ++s) {
      CHECK(cov.entry(r, s) == cov.entry(s, r));
    }
  }
  CHECK(cov.max_eigenvalue >= cov.min_eigenvalue);
  CHECK(cov.min_eigenvalue > -1e-8 * cov.max_eigenvalue);
  const auto again = mc_covariance(DistributionKind::Weibull, 10, 4000, 7u);
  CHECK(cov.matrix == again.matrix);
  const auto other = mc_covariance(DistributionKind::Weibull, 10, 4000, 8u);
  CHECK(cov.matrix != other.matrix);
}

TEST_CASE("mc covariance diagonal approaches exact variances") {
  const int n = 10;
  const auto cov = mc_covariance(DistributionKind::LogLogistic, n, 60000, 11u);
  for (int r = 1; r <= n; ++r) {
    CHECK(cov.entry(r, r) ==
          doctest::Approx(loglogistic_residual_var(r, n)).epsilon(0.06));
  }
}

TEST_CASE("mc covariance near-singularity at moderate n") {
  const auto ll = mc_covariance(DistributionKind::LogLogistic, 25, 5000, 3u);
  CHECK(ll.log_det < std::log(1e-20));
  CHECK(ll.min_eigenvalue > 0.0);
  const auto wb = mc_covariance(DistributionKind::Weibull, 10, 5000, 3u);
  CHECK(wb.log_det < std::log(1e-6));
  CHECK(wb.min_eigenvalue > 0.0);
}

TEST_CASE("mc covariance argument validation") {
  CHECK(code_of([] { mc_covariance(DistributionKind::Weibull, 1, 500, 1u); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { mc_covariance(DistributionKind::Weibull, 5, 99, 1u); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          mc_covariance(DistributionKind::Weibull, 1000, 1000000, 1u);
        }) == ErrorCode::InvalidArgument);
}

TEST_CASE("table csv is canonical and stable") {
  const auto table = moment_table(DistributionKind::Weibull, 10, MomentMethod::Exact);
  const std::string csv = to_csv(table);
  const std::string again = to_csv(table);
  CHECK(csv == again);

  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "rank,mean,variance,weight");
  std::string line;
  int rows = 0;
  double rank1_variance = 0.0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    CHECK(cell == format_int(rows));
    // Every numeric cell re-emits byte-identically once parsed back.
    for (int c = 0; c < 3; ++c) {
      REQUIRE(std::getline(cells, cell, ','));
      double value = 0.0;
      REQUIRE(parse_double(cell, value));
      CHECK(format_double(value) == cell);
      if (rows == 1 && c == 1) rank1_variance = value;
    }
  }
  CHECK(rows == 10);
  // Rank 1 variance is pi^2/6 for the Weibull family.
  CHECK(rank1_variance == doctest::Approx(kPiSq6).epsilon(1e-12));
}

TEST_CASE("covariance csv shape") {
  const auto cov = mc_covariance(DistributionKind::LogLogistic, 6, 300, 5u);
  const std::string csv = to_csv(cov);
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
  }
  CHECK(rows == 6);
}
