#include "fitcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <json.hpp>

#include "accumulate.hpp"
#include "errors.hpp"
#include "textio.hpp"

namespace ppreg {

const char* to_string(FitMethod m) {
  switch (m) {
    case FitMethod::WlsExact: return "wls-exact";
    case FitMethod::WlsAsymptotic: return "wls-asymptotic";
    case FitMethod::WlsMc: return "wls-mc";
    case FitMethod::GlsFull: return "gls-full";
    case FitMethod::Ml: return "ml";
  }
  return "?";
}

namespace {

bool log_scale_family(DistributionKind dist) {
  return dist != DistributionKind::Logistic;
}

void check_observations(DistributionKind dist, const std::vector<double>& x,
                        std::size_t min_size) {
  if (x.size() < min_size) {
    fail(ErrorCode::InvalidArgument,
         "need at least " + format_int(static_cast<long long>(min_size)) +
             " observations, got " + format_int(static_cast<long long>(x.size())));
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::Domain, "observations must be finite");
    }
    if (log_scale_family(dist) && v <= 0.0) {
      fail(ErrorCode::Domain,
           "observations must be > 0 for the " + std::string(to_string(dist)) +
               " family, got " + format_double(v));
    }
  }
}

void check_distinct(const std::vector<double>& sorted) {
  if (sorted.front() == sorted.back()) {
    fail(ErrorCode::DegenerateData,
         "all observations are equal; no line can be identified");
  }
}

// theta -> family parameters.  A slope with the wrong sign cannot come from
// any admissible parameter pair, so it is an error rather than a clamp.
void params_from_theta(DistributionKind dist, double theta1, double theta2,
                       double& alpha, double& beta) {
  if (dist == DistributionKind::Logistic) {
    if (!(theta2 < 0.0)) {
      fail(ErrorCode::NonpositiveSlope,
           "fitted slope is " + format_double(theta2) +
               "; a positive logistic scale needs a negative slope");
    }
    beta = -1.0 / theta2;         // sigma
    alpha = -theta1 / theta2;     // mu
  } else {
    if (!(theta2 > 0.0)) {
      fail(ErrorCode::NonpositiveSlope,
           "fitted shape is " + format_double(theta2) + "; must be positive");
    }
    beta = theta2;
    alpha = std::exp(-theta1 / theta2);
  }
}

// Least squares through a QR factorization of the (already weighted or
// whitened) design.  Condition number from the 2x2 normal matrix.
void solve_design(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  double& theta1, double& theta2, double& cond) {
  const Eigen::Matrix2d M = A.transpose() * A;
  const double tr = M(0, 0) + M(1, 1);
  const double gap = std::sqrt(0.25 * (M(0, 0) - M(1, 1)) * (M(0, 0) - M(1, 1)) +
                               M(0, 1) * M(0, 1));
  const double lo = 0.5 * tr - gap;
  const double hi = 0.5 * tr + gap;
  if (!(lo > 0.0)) {
    fail(ErrorCode::DegenerateData, "design matrix is rank deficient");
  }
  cond = std::sqrt(hi / lo);
  const Eigen::Vector2d theta = A.householderQr().solve(b);
  theta1 = theta(0);
  theta2 = theta(1);
}

Eigen::MatrixXd design_matrix(DistributionKind dist,
                              const std::vector<double>& sorted) {
  const int n = static_cast<int>(sorted.size());
  Eigen::MatrixXd A(n, 2);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = log_scale_family(dist) ? std::log(sorted[static_cast<std::size_t>(i)])
                                     : sorted[static_cast<std::size_t>(i)];
  }
  return A;
}

}  // namespace

FitResult fit_wls(DistributionKind dist, std::vector<double> data,
                  const ResidualMomentTable& table) {
  check_observations(dist, data, 2);
  if (static_cast<int>(data.size()) != table.n) {
    fail(ErrorCode::InvalidArgument,
         "data length " + format_int(static_cast<long long>(data.size())) +
             " does not match table size " + format_int(table.n));
  }
  if (table.dist != dist) {
    fail(ErrorCode::InvalidArgument, "moment table was built for the " +
                                         std::string(to_string(table.dist)) +
                                         " family");
  }
  std::sort(data.begin(), data.end());
  check_distinct(data);

  const int n = table.n;
  Eigen::MatrixXd A = design_matrix(dist, data);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    const double w = table.weights[static_cast<std::size_t>(i)];
    if (!(w > 0.0) || !std::isfinite(w)) {
      fail(ErrorCode::InvalidArgument, "table weights must be positive");
    }
    const double sw = std::sqrt(w);
    A(i, 0) *= sw;
    A(i, 1) *= sw;
    b(i) = sw * table.means[static_cast<std::size_t>(i)];
  }

  FitResult fit;
  fit.dist = dist;
  switch (table.method) {
    case MomentMethod::Exact: fit.method = FitMethod::WlsExact; break;
    case MomentMethod::Asymptotic: fit.method = FitMethod::WlsAsymptotic; break;
    case MomentMethod::MonteCarlo: fit.method = FitMethod::WlsMc; break;
  }
  solve_design(A, b, fit.theta1, fit.theta2, fit.diagnostics.condition_number);
  params_from_theta(dist, fit.theta1, fit.theta2, fit.alpha, fit.beta);
  fit.diagnostics.converged = true;
  return fit;
}

FitResult fit_gls_full(DistributionKind dist, std::vector<double> data,
                       const CovarianceEstimate& cov) {
  check_observations(dist, data, 2);
  if (static_cast<int>(data.size()) != cov.n) {
    fail(ErrorCode::InvalidArgument,
         "data length does not match covariance size " + format_int(cov.n));
  }
  std::sort(data.begin(), data.end());
  check_distinct(data);

  const int n = cov.n;
  Eigen::Map<const Eigen::MatrixXd> S(cov.matrix.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double lo = ev(0);
  const double hi = ev(n - 1);
  if (!(hi > 0.0) || lo <= hi * n * 1e-14) {
    fail(ErrorCode::SingularCovariance,
         "covariance is numerically singular; fit with diagonal weights "
         "(fit_wls) instead");
  }

  FitResult fit;
  fit.dist = dist;
  fit.method = FitMethod::GlsFull;
  if (hi / lo > 1e12) {
    fit.diagnostics.warnings.push_back(
        "covariance condition number exceeds 1e12; estimates may be "
        "unstable, consider diagonal weights");
  }
  NeumaierSum ld;
  for (int i = 0; i < n; ++i) ld.add(std::log(ev(i)));
  if (ld.value() < std::log(1e-12)) {
    fit.diagnostics.warnings.push_back(
        "covariance determinant is below 1e-12 (log-det " +
        format_double(ld.value()) +
        "); near-singular weighting, consider diagonal weights");
  }

  // Whiten with S^(-1/2) and solve the plain least-squares problem.
  const Eigen::MatrixXd W = es.eigenvectors() *
                            ev.array().rsqrt().matrix().asDiagonal() *
                            es.eigenvectors().transpose();
  Eigen::MatrixXd A = design_matrix(dist, data);
  Eigen::VectorXd y(n);
  const ResidualMomentTable means = moment_table(dist, n, MomentMethod::Exact);
  for (int i = 0; i < n; ++i) y(i) = means.means[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd Aw = W * A;
  const Eigen::VectorXd yw = W * y;
  solve_design(Aw, yw, fit.theta1, fit.theta2,
               fit.diagnostics.condition_number);
  params_from_theta(dist, fit.theta1, fit.theta2, fit.alpha, fit.beta);
  fit.diagnostics.converged = true;
  return fit;
}

namespace {

struct MlEval {
  double ll = -std::numeric_limits<double>::infinity();
  double g1 = 0, g2 = 0;
  double h11 = 0, h12 = 0, h22 = 0;
  bool ok = false;
};

double softplus(double w) {
  return w > 0.0 ? w + std::log1p(std::exp(-w)) : std::log1p(std::exp(w));
}

double sigmoid(double w) {
  if (w >= 0.0) return 1.0 / (1.0 + std::exp(-w));
  const double e = std::exp(w);
  return e / (1.0 + e);
}

double score_norm(const MlEval& e) {
  return std::max(std::fabs(e.g1), std::fabs(e.g2));
}

bool score_converged(const MlEval& e) {
  return score_norm(e) <= 1e-9 * std::max(1.0, std::fabs(e.ll));
}

// Polish target: near the optimum Newton converges quadratically, so pushing
// the score to machine level costs one or two extra steps and buys exact-level
// parameter reproducibility (scale equivariance checks at 1e-9 relative).
bool score_tight(const MlEval& e) {
  return score_norm(e) <= 1e-13 * std::max(1.0, std::fabs(e.ll));
}

// Damped Newton ascent with backtracking.  The Hessian is shifted to be
// negative definite whenever it is not, so every direction is an ascent
// direction; steps are capped in the log-parameter space.
template <class Eval>
MlEval newton_maximize(const Eval& eval, double& u1, double& u2,
                       FitDiagnostics& diag) {
  MlEval e = eval(u1, u2);
  if (!e.ok) {
    fail(ErrorCode::NoConvergence,
         "log-likelihood is not finite at the starting point");
  }
  int iter = 0;
  while (!score_tight(e) && iter < 100) {
    ++iter;
    double h11 = e.h11, h12 = e.h12, h22 = e.h22;
    const double tr = h11 + h22;
    const double gap =
        std::sqrt(0.25 * (h11 - h22) * (h11 - h22) + h12 * h12);
    const double lam_max = 0.5 * tr + gap;
    if (lam_max > -1e-12 * std::max(1.0, std::fabs(tr))) {
      const double shift = lam_max + std::max(1e-6, 1e-6 * std::fabs(tr));
      h11 -= shift;
      h22 -= shift;
    }
    const double det = h11 * h22 - h12 * h12;
    double d1 = -(h22 * e.g1 - h12 * e.g2) / det;
    double d2 = -(h11 * e.g2 - h12 * e.g1) / det;
    const double mx = std::max(std::fabs(d1), std::fabs(d2));
    if (mx > 10.0) {
      d1 *= 10.0 / mx;
      d2 *= 10.0 / mx;
    }
    if (d1 * e.g1 + d2 * e.g2 <= 0.0) {
      const double gn = std::hypot(e.g1, e.g2);
      d1 = e.g1 / gn;
      d2 = e.g2 / gn;
    }
    double step = 1.0;
    MlEval next;
    bool accepted = false;
    // Near the optimum the quadratic gain drops below the rounding noise of
    // the log-likelihood sum, so a strict ll increase becomes unattainable;
    // a step that contracts the score while holding ll to noise level is
    // still guaranteed progress on a locally concave surface.
    const double ll_noise = 1e-10 * std::max(1.0, std::fabs(e.ll));
    for (int halving = 0; halving <= 30; ++halving) {
      next = eval(u1 + step * d1, u2 + step * d2);
      if (next.ok &&
          (next.ll > e.ll || (score_norm(next) < 0.9 * score_norm(e) &&
                              next.ll >= e.ll - ll_noise))) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    if (score_converged(e) && score_norm(next) >= score_norm(e)) break;
    u1 += step * d1;
    u2 += step * d2;
    e = next;
  }
  const bool conv = score_converged(e);
  diag.iterations = iter;
  diag.converged = conv;
  diag.log_likelihood = e.ll;
  if (!conv) {
    fail(ErrorCode::NoConvergence,
         "ML iteration stalled or budget exhausted; score norm still " +
             format_double(score_norm(e)));
  }
  const double det = e.h11 * e.h22 - e.h12 * e.h12;
  if (!(e.h11 < 0.0 && det > 0.0)) {
    fail(ErrorCode::NoConvergence,
         "Hessian is not negative definite at the reported optimum");
  }
  // Curvature conditioning of -H.
  const double tr = -e.h11 - e.h22;
  const double gap = std::sqrt(0.25 * (e.h11 - e.h22) * (e.h11 - e.h22) +
                               e.h12 * e.h12);
  diag.condition_number = (0.5 * tr + gap) / (0.5 * tr - gap);
  return e;
}

}  // namespace

FitResult fit_ml(DistributionKind dist, std::vector<double> data,
                 const FitResult* init) {
  check_observations(dist, data, 3);
  std::sort(data.begin(), data.end());
  check_distinct(data);
  if (init && init->dist != dist) {
    fail(ErrorCode::InvalidArgument,
         "starting fit is for the " + std::string(to_string(init->dist)) +
             " family");
  }

  const int n = static_cast<int>(data.size());
  FitResult start;
  if (!init) {
    start = fit_wls(dist, data, moment_table(dist, n, MomentMethod::Exact));
    init = &start;
  }

  FitResult fit;
  fit.dist = dist;
  fit.method = FitMethod::Ml;

  if (dist == DistributionKind::Logistic) {
    double u1 = init->alpha;             // mu
    double u2 = std::log(init->beta);    // log sigma
    const std::vector<double>& x = data;
    const auto eval = [&x, n](double mu, double c) {
      MlEval e;
      if (!std::isfinite(mu) || !std::isfinite(c) || c > 700.0 || c < -700.0)
        return e;
      const double sigma = std::exp(c);
      double ll = 0, s21 = 0, ws21 = 0, ss = 0, wss = 0, wwss = 0;
      for (double xi : x) {
        const double w = (xi - mu) / sigma;
        const double s = sigmoid(w);
        ll += -c - w - 2.0 * softplus(-w);
        const double d = 2.0 * s - 1.0;
        s21 += d;
        ws21 += w * d;
        const double v = s * (1.0 - s);
        ss += v;
        wss += w * v;
        wwss += w * w * v;
      }
      if (!std::isfinite(ll)) return e;
      e.ll = ll;
      e.g1 = s21 / sigma;
      e.g2 = -n + ws21;
      e.h11 = -2.0 * ss / (sigma * sigma);
      e.h12 = -s21 / sigma - 2.0 * wss / sigma;
      e.h22 = -ws21 - 2.0 * wwss;
      e.ok = true;
      return e;
    };
    newton_maximize(eval, u1, u2, fit.diagnostics);
    fit.alpha = u1;
    fit.beta = std::exp(u2);
    fit.theta1 = fit.alpha / fit.beta;
    fit.theta2 = -1.0 / fit.beta;
    return fit;
  }

  std::vector<double> lx(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) lx[i] = std::log(data[i]);
  double sum_lx = 0;
  for (double v : lx) sum_lx += v;

  double u1 = std::log(init->alpha);  // log alpha
  double u2 = std::log(init->beta);   // log beta
  if (!std::isfinite(u1) || !std::isfinite(u2)) {
    fail(ErrorCode::InvalidArgument, "starting parameters must be positive");
  }

  const bool weib = dist == DistributionKind::Weibull;
  const auto eval = [&lx, sum_lx, n, weib](double a, double b) {
    MlEval e;
    if (!std::isfinite(a) || !std::isfinite(b) || b > 700.0 || b < -700.0)
      return e;
    const double beta = std::exp(b);
    if (weib) {
      double st = 0, slt = 0, sllt = 0, sl = 0;
      for (double lxi : lx) {
        const double L = lxi - a;
        const double w = beta * L;
        if (w > 690.0) return e;  // likelihood underflow; reject the step
        const double t = std::exp(w);
        sl += L;
        st += t;
        slt += L * t;
        sllt += L * L * t;
      }
      e.ll = n * b + beta * sl - sum_lx - st;
      if (!std::isfinite(e.ll)) return e;
      e.g1 = beta * (st - n);
      e.g2 = n + beta * (sl - slt);
      e.h11 = -beta * beta * st;
      e.h12 = beta * ((st - n) + beta * slt);
      e.h22 = beta * (sl - slt) - beta * beta * sllt;
      e.ok = true;
    } else {
      double sp = 0, sf = 0, slf = 0, sff = 0, slff = 0, sllff = 0, sl = 0;
      for (double lxi : lx) {
        const double L = lxi - a;
        const double w = beta * L;
        const double F = sigmoid(w);
        sp += softplus(w);
        sl += L;
        sf += 2.0 * F - 1.0;
        slf += L * (1.0 - 2.0 * F);
        const double v = F * (1.0 - F);
        sff += v;
        slff += L * v;
        sllff += L * L * v;
      }
      e.ll = n * b + beta * sl - sum_lx - 2.0 * sp;
      if (!std::isfinite(e.ll)) return e;
      e.g1 = beta * sf;
      e.g2 = n + beta * slf;
      e.h11 = -2.0 * beta * beta * sff;
      e.h12 = beta * (sf + 2.0 * beta * slff);
      e.h22 = beta * slf - 2.0 * beta * beta * sllff;
      e.ok = true;
    }
    return e;
  };
  newton_maximize(eval, u1, u2, fit.diagnostics);
  fit.alpha = std::exp(u1);
  fit.beta = std::exp(u2);
  fit.theta2 = fit.beta;
  fit.theta1 = -fit.beta * u1;
  return fit;
}

MlAsymptotics ml_asymptotics(DistributionKind dist,
                             const DistributionParams& params, int n) {
  if (dist == DistributionKind::Logistic) {
    fail(ErrorCode::Unsupported,
         "ML asymptotics are available for the log-logistic and Weibull "
         "families only");
  }
  validate(params);
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");

  const double a = params.alpha;
  const double b = params.beta;
  MlAsymptotics out;
  out.dist = dist;
  if (dist == DistributionKind::LogLogistic) {
    out.var_alpha = 3.0 * a * a / (n * b * b);
    out.var_beta = 0.6993 * b * b / n;
    out.bias_alpha = 1.5 * a / (n * b * b);
    out.bias_beta = 1.2764 * b / n;
  } else {
    out.var_alpha = 1.109 * (a / b) * (a / b) / n;
    out.var_beta = 0.608 * b * b / n;
  }
  return out;
}

double efficiency(double var_ml, double var_other) {
  if (!(var_ml > 0.0) || !(var_other > 0.0) || !std::isfinite(var_ml) ||
      !std::isfinite(var_other)) {
    fail(ErrorCode::Domain, "variances must be finite and > 0");
  }
  return var_ml / var_other;
}

double weibull_ml_scale_given_shape(const std::vector<double>& data,
                                    double beta) {
  check_observations(DistributionKind::Weibull, data, 1);
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    fail(ErrorCode::Domain, "shape must be finite and > 0");
  }
  NeumaierSum s;
  for (double x : data) s.add(std::pow(x, beta));
  return std::pow(s.value() / static_cast<double>(data.size()), 1.0 / beta);
}

BootstrapResult bootstrap_se(DistributionKind dist,
                             const std::vector<double>& data, FitMethod method,
                             int reps, std::uint64_t seed,
                             PlottingScheme scheme, long long mc_m) {
  if (reps < 100) {
    fail(ErrorCode::InvalidArgument,
         "bootstrap needs reps >= 100, got " + format_int(reps));
  }
  check_observations(dist, data, 2);
  const int n = static_cast<int>(data.size());

  // Weights depend only on (dist, n, method, scheme), so one table or
  // covariance serves every resample.
  ResidualMomentTable table;
  CovarianceEstimate cov;
  switch (method) {
    case FitMethod::WlsExact:
    case FitMethod::Ml:
      table = moment_table(dist, n, MomentMethod::Exact);
      break;
    case FitMethod::WlsAsymptotic:
      table = moment_table(dist, n, MomentMethod::Asymptotic, scheme);
      break;
    case FitMethod::WlsMc:
      table = moment_table(dist, n, MomentMethod::MonteCarlo, scheme, mc_m,
                           mix64(seed ^ kStreamBootstrap));
      break;
    case FitMethod::GlsFull:
      cov = mc_covariance(dist, n, mc_m, mix64(seed ^ kStreamBootstrap));
      break;
  }

  std::vector<double> alphas, betas, resample(data.size());
  alphas.reserve(static_cast<std::size_t>(reps));
  betas.reserve(static_cast<std::size_t>(reps));
  BootstrapResult out;

  for (int j = 0; j < reps; ++j) {
    SplitMix64 rng = substream(seed, kStreamBootstrap | static_cast<std::uint64_t>(j));
    for (double& v : resample) {
      v = data[static_cast<std::size_t>(rng.uniform01() * n)];
    }
    const auto [mn, mx] = std::minmax_element(resample.begin(), resample.end());
    if (*mn == *mx) {
      ++out.degenerate;
      continue;
    }
    try {
      FitResult fit;
      if (method == FitMethod::Ml) {
        FitResult start = fit_wls(dist, resample, table);
        fit = fit_ml(dist, resample, &start);
      } else if (method == FitMethod::GlsFull) {
        fit = fit_gls_full(dist, resample, cov);
      } else {
        fit = fit_wls(dist, resample, table);
      }
      alphas.push_back(fit.alpha);
      betas.push_back(fit.beta);
    } catch (const Error&) {
      ++out.failed;
    }
  }

  if (out.failed * 5 > reps) {
    fail(ErrorCode::BootstrapFailed,
         format_int(out.failed) + " of " + format_int(reps) +
             " bootstrap replications failed to fit (more than 20%)");
  }
  out.used = static_cast<int>(alphas.size());
  if (out.used < 2) {
    fail(ErrorCode::BootstrapFailed,
         "fewer than two usable bootstrap replications");
  }

  const auto sd = [](const std::vector<double>& v) {
    NeumaierSum s;
    for (double x : v) s.add(x);
    const double mean = s.value() / static_cast<double>(v.size());
    NeumaierSum q;
    for (double x : v) q.add((x - mean) * (x - mean));
    return std::sqrt(q.value() / (static_cast<double>(v.size()) - 1.0));
  };
  out.se_alpha = sd(alphas);
  out.se_beta = sd(betas);
  return out;
}

std::string to_json(const FitResult& fit) {
  nlohmann::ordered_json j;
  j["dist"] = to_string(fit.dist);
  j["method"] = to_string(fit.method);
  j["alpha"] = fit.alpha;
  j["beta"] = fit.beta;
  j["theta1"] = fit.theta1;
  j["theta2"] = fit.theta2;
  j["converged"] = fit.diagnostics.converged;
  j["iterations"] = fit.diagnostics.iterations;
  j["condition_number"] = fit.diagnostics.condition_number;
  if (fit.diagnostics.log_likelihood) {
    j["log_likelihood"] = *fit.diagnostics.log_likelihood;
  } else {
    j["log_likelihood"] = nullptr;
  }
  j["warnings"] = fit.diagnostics.warnings;
  return j.dump(2) + "\n";
}

}  // namespace ppreg
