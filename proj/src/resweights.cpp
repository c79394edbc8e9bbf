#include "resweights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "accumulate.hpp"
#include "errors.hpp"
#include "specfun.hpp"
#include "textio.hpp"

namespace ppreg {

const char* to_string(DistributionKind k) {
  switch (k) {
    case DistributionKind::LogLogistic: return "loglogistic";
    case DistributionKind::Weibull: return "weibull";
    case DistributionKind::Logistic: return "logistic";
  }
  return "?";
}

const char* to_string(PlottingScheme s) {
  switch (s) {
    case PlottingScheme::Standard: return "standard";
    case PlottingScheme::Bernard: return "bernard";
  }
  return "?";
}

const char* to_string(MomentMethod m) {
  switch (m) {
    case MomentMethod::Exact: return "exact";
    case MomentMethod::Asymptotic: return "asymptotic";
    case MomentMethod::MonteCarlo: return "mc";
  }
  return "?";
}

namespace {

void check_rank(int r, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "sample size n must be >= 1");
  if (r < 1 || r > n) {
    fail(ErrorCode::InvalidArgument,
         "rank r must satisfy 1 <= r <= n, got r=" + format_int(r) +
             ", n=" + format_int(n));
  }
}

// ---- Gauss-Legendre machinery for the Weibull fallback path ----

struct Gauss15 {
  double node[15];
  double weight[15];
};

// Nodes/weights computed once by Newton iteration on P_15; avoids a typed-in
// table and is exact to machine precision.
const Gauss15& gauss15() {
  static const Gauss15 g = [] {
    Gauss15 out{};
    constexpr int n = 15;
    for (int k = 0; k < n; ++k) {
      double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-15) break;
      }
      out.node[k] = x;
      out.weight[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return out;
  }();
  return g;
}

template <class F>
double gl15(const F& f, double a, double b) {
  const Gauss15& g = gauss15();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 15; ++k) {
    s += g.weight[k] * f(c + h * g.node[k]);
  }
  return s * h;
}

template <class F>
double adaptive_gl(const F& f, double a, double b, double tol, int depth) {
  const double whole = gl15(f, a, b);
  const double mid = 0.5 * (a + b);
  const double left = gl15(f, a, mid);
  const double right = gl15(f, mid, b);
  const double split = left + right;
  const double err = std::fabs(whole - split);
  // tol is a per-panel bound, not split across children: a panel's rounding
  // error scales with its width, so a fixed bound is always reached and the
  // recursion cannot chase noise to the depth cap.  The total error is
  // bounded by the panel count times tol, which stays far below the 1e-9
  // guarantees made for the moments.
  if (err <= tol || err <= 1e-15 * std::fabs(split) || depth >= 40) {
    return split;
  }
  return adaptive_gl(f, a, mid, tol, depth + 1) +
         adaptive_gl(f, mid, b, tol, depth + 1);
}

// Weibull residual moments as integrals over s = log t, t = -log(1-z), with
// z the Beta(r, n-r+1) order statistic:
//   E(u_r^p) = \int s^p exp(g(s)) ds,
//   g(s) = log(1/B(r, q)) + (r-1) log(1-e^{-t}) - q t + s,   q = n - r + 1.
// The beta prefactor is folded into the exponent so exp(g) stays a
// well-scaled probability density no matter how large the binomial factor
// gets.  g is strictly concave in s (its derivative t((r-1)/(e^t-1) - q) + 1
// is decreasing), so stepping out from s = log log(n/q) until g has dropped
// 60 below that point brackets all but ~e^{-60} of the mass, and the
// integrand has O(1)-width features on the whole window.  Requires r >= 2
// (rank 1 has closed forms).
double weibull_moment_quadrature(int r, int n, int p) {
  const double q = static_cast<double>(n - r + 1);
  const double log_inv_beta =
      log_gamma(n + 1.0) - log_gamma(static_cast<double>(r)) - log_gamma(q);
  const auto g = [=](double s) -> double {
    const double t = std::exp(s);
    return log_inv_beta + (r - 1) * std::log(-std::expm1(-t)) - q * t + s;
  };
  const double s_star = std::log(std::log(static_cast<double>(n) / q));
  const double cut = g(s_star) - 60.0;

  double lo = s_star - 1.0;
  for (int i = 0; i < 1000 && g(lo) > cut; ++i) lo -= 1.0;
  double hi = s_star + 1.0;
  for (int i = 0; i < 1000 && g(hi) > cut; ++i) hi += 1.0;

  const auto density = [&](double s) -> double { return std::exp(g(s)); };
  const auto weighted = [&](double s) -> double {
    return (p == 1 ? s : s * s) * std::exp(g(s));
  };

  const double mass = adaptive_gl(density, lo, hi, 1e-14, 0);
  if (std::fabs(mass - 1.0) > 1e-9) {
    fail(ErrorCode::Numerical,
         "Weibull moment quadrature lost the density mass for r=" +
             format_int(r) + ", n=" + format_int(n));
  }
  // Dividing by the quadrature's own mass cancels the shared truncation bias.
  return adaptive_gl(weighted, lo, hi, 1e-13, 0) / mass;
}

// Pascal-row binomial coefficients C(k,0..k); integer-exact in doubles for
// every value below 2^53.
std::vector<double> pascal_row(int k) {
  std::vector<double> row(static_cast<std::size_t>(k) + 1, 1.0);
  for (int i = 1; i <= k; ++i) {
    for (int j = i - 1; j >= 1; --j) row[j] += row[j - 1];
  }
  return row;
}

// Alternating binomial sum for the p-th log-moment.  Returns false when the
// compensated sum's cancellation estimate is too large to trust.
bool weibull_moment_sum(int r, int n, int p, double& out) {
  const std::vector<double> binom = pascal_row(r - 1);
  NeumaierSum sum;
  double abs_sum = 0.0;
  for (int j = 0; j <= r - 1; ++j) {
    const double q = static_cast<double>(n - r + 1 + j);
    const double gl = kEulerGamma + std::log(q);
    // \int_0^\infty log(t)^p e^{-qt} dt up to the 1/q factor:
    //   p=1: -(gamma + log q)/q     p=2: (pi^2/6 + (gamma+log q)^2)/q
    const double base =
        (p == 1) ? -gl / q : (kPiSqOver6 + gl * gl) / q;
    const double term = ((j & 1) ? -1.0 : 1.0) * binom[static_cast<std::size_t>(j)] * base;
    sum.add(term);
    abs_sum += std::fabs(term);
  }
  const double value = sum.value();
  const double est_err = abs_sum * 8.0 * std::numeric_limits<double>::epsilon();
  const double log_inv_beta = log_gamma(n + 1.0) -
                              log_gamma(static_cast<double>(r)) -
                              log_gamma(static_cast<double>(n - r + 1));
  const double inv_beta = std::exp(log_inv_beta);
  if (est_err > 3e-11 * std::fabs(value) || inv_beta * est_err > 1e-12) {
    return false;
  }
  out = inv_beta * value;
  return true;
}

double weibull_moment(int r, int n, int p) {
  check_rank(r, n);
  if (r == 1) {
    // Minimum: closed forms -(gamma + log n) and pi^2/6 + (gamma + log n)^2.
    const double gl = kEulerGamma + std::log(static_cast<double>(n));
    return (p == 1) ? -gl : kPiSqOver6 + gl * gl;
  }
  double value;
  if (n <= 60 && weibull_moment_sum(r, n, p, value)) return value;
  value = weibull_moment_quadrature(r, n, p);
  if (!std::isfinite(value)) {
    fail(ErrorCode::Numerical, "Weibull residual moment did not evaluate "
                               "finitely for r=" + format_int(r) +
                                   ", n=" + format_int(n));
  }
  return value;
}

double logit(double x) { return std::log(x) - std::log1p(-x); }

}  // namespace

double loglogistic_residual_mean(int r, int n) {
  check_rank(r, n);
  return digamma(static_cast<double>(r)) -
         digamma(static_cast<double>(n - r + 1));
}

double loglogistic_residual_var(int r, int n) {
  check_rank(r, n);
  return trigamma(static_cast<double>(r)) +
         trigamma(static_cast<double>(n - r + 1));
}

double weibull_residual_mean(int r, int n) { return weibull_moment(r, n, 1); }

double weibull_residual_second_moment(int r, int n) {
  return weibull_moment(r, n, 2);
}

double weibull_residual_var(int r, int n) {
  const double m1 = weibull_moment(r, n, 1);
  const double m2 = weibull_moment(r, n, 2);
  const double var = m2 - m1 * m1;
  if (!(var > 0.0)) {
    fail(ErrorCode::Numerical,
         "Weibull residual variance not positive for r=" + format_int(r) +
             ", n=" + format_int(n));
  }
  return var;
}

double plotting_position(int r, int n, PlottingScheme scheme) {
  check_rank(r, n);
  if (scheme == PlottingScheme::Bernard) return (r - 0.3) / (n + 0.4);
  return static_cast<double>(r) / (n + 1.0);
}

double asymptotic_residual_var(int r, int n, PlottingScheme scheme) {
  const double p = plotting_position(r, n, scheme);
  return 1.0 / (n * p * (1.0 - p));
}

double asymptotic_residual_cov(int r, int s, int n, PlottingScheme scheme) {
  if (r > s) {
    fail(ErrorCode::InvalidArgument,
         "rank order violated: need r <= s, got r=" + format_int(r) +
             ", s=" + format_int(s));
  }
  const double pr = plotting_position(r, n, scheme);
  const double ps = plotting_position(s, n, scheme);
  return 1.0 / (n * ps * (1.0 - pr));
}

double CovarianceEstimate::entry(int r, int s) const {
  check_rank(r, n);
  check_rank(s, n);
  return matrix[static_cast<std::size_t>(r - 1) * n + (s - 1)];
}

CovarianceEstimate mc_covariance(DistributionKind dist, int n, long long m,
                                 std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "covariance needs n >= 2");
  if (m < 100) {
    fail(ErrorCode::InvalidArgument,
         "need at least 100 replications, got " + format_int(m));
  }
  if (m > (1ll << 31) || m * n > 200000000ll) {
    fail(ErrorCode::InvalidArgument, "replication count too large");
  }

  const bool weib = dist == DistributionKind::Weibull;
  const std::size_t un = static_cast<std::size_t>(n);
  const std::size_t um = static_cast<std::size_t>(m);

  std::vector<double> z(um * un);
  std::vector<double> u(un);
  for (std::size_t j = 0; j < um; ++j) {
    SplitMix64 rng = substream(seed, kStreamCovariance | j);
    for (double& v : u) v = rng.uniform_open01();
    std::sort(u.begin(), u.end());
    double* row = z.data() + j * un;
    for (std::size_t i = 0; i < un; ++i) {
      row[i] = weib ? std::log(-std::log1p(-u[i]))
                    : std::log(u[i]) - std::log1p(-u[i]);
    }
  }

  std::vector<double> mean(un);
  for (std::size_t i = 0; i < un; ++i) {
    NeumaierSum s;
    for (std::size_t j = 0; j < um; ++j) s.add(z[j * un + i]);
    mean[i] = s.value() / static_cast<double>(m);
  }

  CovarianceEstimate cov;
  cov.dist = dist;
  cov.n = n;
  cov.m = m;
  cov.seed = seed;
  cov.matrix.assign(un * un, 0.0);
  for (std::size_t j = 0; j < um; ++j) {
    const double* row = z.data() + j * un;
    for (std::size_t a = 0; a < un; ++a) {
      const double da = row[a] - mean[a];
      double* out = cov.matrix.data() + a * un;
      for (std::size_t b = a; b < un; ++b) {
        out[b] += da * (row[b] - mean[b]);
      }
    }
  }
  const double norm = 1.0 / static_cast<double>(m - 1);
  for (std::size_t a = 0; a < un; ++a) {
    for (std::size_t b = a; b < un; ++b) {
      const double v = cov.matrix[a * un + b] * norm;
      cov.matrix[a * un + b] = v;
      cov.matrix[b * un + a] = v;
    }
  }

  Eigen::Map<const Eigen::MatrixXd> S(cov.matrix.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const auto& ev = es.eigenvalues();
  cov.min_eigenvalue = ev(0);
  cov.max_eigenvalue = ev(n - 1);
  if (ev(0) > 0.0) {
    NeumaierSum ld;
    for (int i = 0; i < n; ++i) ld.add(std::log(ev(i)));
    cov.log_det = ld.value();
  } else {
    cov.log_det = -std::numeric_limits<double>::infinity();
  }
  return cov;
}

ResidualMomentTable moment_table(DistributionKind dist, int n,
                                 MomentMethod method, PlottingScheme scheme,
                                 long long mc_m, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "moment table needs n >= 2");

  ResidualMomentTable t;
  t.dist = dist;
  t.n = n;
  t.method = method;
  t.means.resize(static_cast<std::size_t>(n));
  t.variances.resize(static_cast<std::size_t>(n));
  t.weights.resize(static_cast<std::size_t>(n));

  for (int r = 1; r <= n; ++r) {
    const std::size_t i = static_cast<std::size_t>(r - 1);
    if (method == MomentMethod::Asymptotic) {
      const double p = plotting_position(r, n, scheme);
      switch (dist) {
        case DistributionKind::LogLogistic: t.means[i] = logit(p); break;
        case DistributionKind::Weibull:
          t.means[i] = std::log(-std::log1p(-p));
          break;
        case DistributionKind::Logistic: t.means[i] = -logit(p); break;
      }
      t.variances[i] = asymptotic_residual_var(r, n, scheme);
    } else {
      switch (dist) {
        case DistributionKind::LogLogistic:
          t.means[i] = loglogistic_residual_mean(r, n);
          t.variances[i] = loglogistic_residual_var(r, n);
          break;
        case DistributionKind::Weibull:
          t.means[i] = weibull_residual_mean(r, n);
          t.variances[i] = weibull_residual_var(r, n);
          break;
        case DistributionKind::Logistic:
          t.means[i] = -loglogistic_residual_mean(r, n);
          t.variances[i] = loglogistic_residual_var(r, n);
          break;
      }
    }
  }

  if (method == MomentMethod::MonteCarlo) {
    if (mc_m < 100) {
      fail(ErrorCode::InvalidArgument,
           "MonteCarlo tables need mc_m >= 100, got " + format_int(mc_m));
    }
    const CovarianceEstimate cov = mc_covariance(dist, n, mc_m, seed);
    for (int r = 1; r <= n; ++r) {
      t.variances[static_cast<std::size_t>(r - 1)] = cov.entry(r, r);
    }
  }

  for (std::size_t i = 0; i < t.variances.size(); ++i) {
    if (!(t.variances[i] > 0.0)) {
      fail(ErrorCode::Numerical, "nonpositive variance at rank " +
                                     format_int(static_cast<long long>(i) + 1));
    }
    t.weights[i] = 1.0 / t.variances[i];
  }
  return t;
}

std::string to_csv(const ResidualMomentTable& table) {
  std::string out = "rank,mean,variance,weight\n";
  for (int r = 1; r <= table.n; ++r) {
    const std::size_t i = static_cast<std::size_t>(r - 1);
    out += format_int(r);
    out += ',';
    out += format_double(table.means[i]);
    out += ',';
    out += format_double(table.variances[i]);
    out += ',';
    out += format_double(table.weights[i]);
    out += '\n';
  }
  return out;
}

std::string to_csv(const CovarianceEstimate& cov) {
  std::string out;
  for (int r = 0; r < cov.n; ++r) {
    for (int s = 0; s < cov.n; ++s) {
      if (s) out += ',';
      out += format_double(cov.matrix[static_cast<std::size_t>(r) * cov.n + s]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace ppreg
