// Command-line front end over the public C interface: flag parsing, file
// ingestion, dispatch, CSV/JSON emission.  Exit 0 on success, 2 on usage
// errors, 1 when a computation or input file is rejected.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "ppreg/ppreg.h"

namespace {

constexpr std::uint64_t kDefaultSeed = 12345;

// Rejected input data or a failed computation; exits with status 1.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad invocation discovered after flag parsing; exits with status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StringDeleter {
  void operator()(char* s) const { ppreg_string_free(s); }
};
struct TableDeleter {
  void operator()(ppreg_table* t) const { ppreg_table_free(t); }
};
struct CovDeleter {
  void operator()(ppreg_cov* c) const { ppreg_cov_free(c); }
};
struct FitDeleter {
  void operator()(ppreg_fit* f) const { ppreg_fit_free(f); }
};
struct StudyDeleter {
  void operator()(ppreg_study* s) const { ppreg_study_free(s); }
};
struct FigureDeleter {
  void operator()(ppreg_figure* f) const { ppreg_figure_free(f); }
};

using CString = std::unique_ptr<char, StringDeleter>;
using TablePtr = std::unique_ptr<ppreg_table, TableDeleter>;
using CovPtr = std::unique_ptr<ppreg_cov, CovDeleter>;
using FitPtr = std::unique_ptr<ppreg_fit, FitDeleter>;
using StudyPtr = std::unique_ptr<ppreg_study, StudyDeleter>;
using FigurePtr = std::unique_ptr<ppreg_figure, FigureDeleter>;

void check(ppreg_status status) {
  if (status != PPREG_OK) throw DataError(ppreg_last_error());
}

ppreg_dist parse_dist(const std::string& name) {
  if (name == "loglogistic") return PPREG_DIST_LOGLOGISTIC;
  if (name == "weibull") return PPREG_DIST_WEIBULL;
  return PPREG_DIST_LOGISTIC;
}

ppreg_scheme parse_scheme(const std::string& name) {
  return name == "bernard" ? PPREG_SCHEME_BERNARD : PPREG_SCHEME_STANDARD;
}

ppreg_table_method parse_table_method(const std::string& name) {
  if (name == "exact") return PPREG_TABLE_EXACT;
  if (name == "asymptotic") return PPREG_TABLE_ASYMPTOTIC;
  return PPREG_TABLE_MONTE_CARLO;
}

// Shortest decimal form that parses back to the same value, matching the
// library's CSV/JSON serialization.
std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Observations {
  std::vector<double> values;
  std::vector<int> rows;  // 1-based source line of each value
};

Observations read_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  Observations obs;
  std::string line;
  int lineno = 0;
  bool allow_header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t");
    const std::string token = line.substr(begin, end - begin + 1);
    if (allow_header && token == "x") {
      allow_header = false;
      continue;
    }
    allow_header = false;
    double v = 0.0;
    const char* first = token.c_str();
    const char* last = first + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      throw DataError(path + ": row " + std::to_string(lineno) +
                      ": not a number: \"" + token + "\"");
    }
    obs.values.push_back(v);
    obs.rows.push_back(lineno);
  }
  if (obs.values.empty()) throw DataError(path + ": no observations");
  return obs;
}

void validate_observations(const Observations& obs, const std::string& path,
                           const std::string& dist) {
  const bool positive_support = dist != "logistic";
  for (std::size_t i = 0; i < obs.values.size(); ++i) {
    const double v = obs.values[i];
    const std::string row = std::to_string(obs.rows[i]);
    if (!std::isfinite(v))
      throw DataError(path + ": row " + row + ": non-finite observation");
    if (positive_support && !(v > 0.0)) {
      throw DataError(path + ": row " + row + ": nonpositive observation " +
                      format_double(v) + " (the " + dist +
                      " family requires x > 0)");
    }
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fputs(content.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out.good()) throw DataError("cannot write " + path);
}

std::uint64_t resolve_seed(bool flag_given, std::uint64_t flag_value) {
  if (flag_given) return flag_value;
  if (const char* env = std::getenv("PPREG_SEED")) {
    std::uint64_t v = 0;
    const char* last = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, last, v);
    if (ec != std::errc{} || ptr != last || ptr == env) {
      throw UsageError(std::string("PPREG_SEED is not an unsigned integer: \"") +
                       env + "\"");
    }
    return v;
  }
  return kDefaultSeed;
}

void print_seed(std::uint64_t seed) {
  std::fprintf(stderr, "# seed: %llu\n", static_cast<unsigned long long>(seed));
}

struct FitOpts {
  std::string dist;
  std::string method = "wls-exact";
  std::string scheme = "standard";
  std::string input;
  std::string output;
  long long mc_m = 5000;
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
};

int run_fit(const FitOpts& o) {
  const ppreg_dist dist = parse_dist(o.dist);
  const Observations obs = read_observations(o.input);
  validate_observations(obs, o.input, o.dist);
  const int n = static_cast<int>(obs.values.size());

  FitPtr fit;
  ppreg_fit* fit_raw = nullptr;
  if (o.method == "ml") {
    check(ppreg_fit_ml(dist, obs.values.data(), n, nullptr, &fit_raw));
    fit.reset(fit_raw);
  } else if (o.method == "gls-full") {
    const std::uint64_t seed = resolve_seed(o.seed_given, o.seed);
    print_seed(seed);
    ppreg_cov* cov_raw = nullptr;
    check(ppreg_cov_create(dist, n, o.mc_m, seed, &cov_raw));
    const CovPtr cov(cov_raw);
    check(ppreg_fit_gls_full(dist, obs.values.data(), n, cov.get(), &fit_raw));
    fit.reset(fit_raw);
  } else {
    std::uint64_t seed = 0;
    if (o.method == "wls-mc") {
      seed = resolve_seed(o.seed_given, o.seed);
      print_seed(seed);
    }
    const std::string table_method = o.method.substr(std::strlen("wls-"));
    ppreg_table* table_raw = nullptr;
    check(ppreg_table_create(dist, n, parse_table_method(table_method),
                             parse_scheme(o.scheme), o.mc_m, seed, &table_raw));
    const TablePtr table(table_raw);
    check(ppreg_fit_wls(dist, obs.values.data(), n, table.get(), &fit_raw));
    fit.reset(fit_raw);
  }

  char* json = nullptr;
  check(ppreg_fit_to_json(fit.get(), &json));
  const CString text(json);
  write_output(o.output, text.get());
  return 0;
}

struct WeightsOpts {
  std::string dist;
  std::string method = "exact";
  std::string scheme = "standard";
  std::string output;
  int n = 0;
  long long mc_m = 5000;
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
};

int run_weights(const WeightsOpts& o) {
  std::uint64_t seed = 0;
  if (o.method == "mc") {
    seed = resolve_seed(o.seed_given, o.seed);
    print_seed(seed);
  }
  ppreg_table* table_raw = nullptr;
  check(ppreg_table_create(parse_dist(o.dist), o.n, parse_table_method(o.method),
                           parse_scheme(o.scheme), o.mc_m, seed, &table_raw));
  const TablePtr table(table_raw);
  char* csv = nullptr;
  check(ppreg_table_to_csv(table.get(), &csv));
  const CString text(csv);
  write_output(o.output, text.get());
  return 0;
}

struct CovOpts {
  std::string dist;
  std::string output;
  int n = 0;
  long long m = 5000;
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
};

int run_cov(const CovOpts& o) {
  const std::uint64_t seed = resolve_seed(o.seed_given, o.seed);
  print_seed(seed);
  ppreg_cov* cov_raw = nullptr;
  check(ppreg_cov_create(parse_dist(o.dist), o.n, o.m, seed, &cov_raw));
  const CovPtr cov(cov_raw);
  double log_det = 0.0;
  check(ppreg_cov_log_det(cov.get(), &log_det));
  std::fprintf(stderr, "# log_det: %s\n# det: %s\n", format_double(log_det).c_str(),
               format_double(std::exp(log_det)).c_str());
  char* csv = nullptr;
  check(ppreg_cov_to_csv(cov.get(), &csv));
  const CString text(csv);
  write_output(o.output, text.get());
  return 0;
}

struct SampleOpts {
  std::string dist;
  std::string format = "plain";
  std::string output;
  int n = 0;
  double alpha = 1.0;
  double beta = 1.0;
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
};

int run_sample(const SampleOpts& o) {
  const std::uint64_t seed = resolve_seed(o.seed_given, o.seed);
  print_seed(seed);
  std::vector<double> values(static_cast<std::size_t>(std::max(o.n, 1)));
  const ppreg_dist dist = parse_dist(o.dist);
  switch (dist) {
    case PPREG_DIST_LOGLOGISTIC:
      check(ppreg_sample_loglogistic(o.alpha, o.beta, o.n, seed, values.data()));
      break;
    case PPREG_DIST_WEIBULL:
      check(ppreg_sample_weibull(o.alpha, o.beta, o.n, seed, values.data()));
      break;
    case PPREG_DIST_LOGISTIC:
      check(ppreg_sample_logistic(o.alpha, o.beta, o.n, seed, values.data()));
      break;
  }
  std::string out;
  if (o.format == "csv") out += "x\n";
  for (int i = 0; i < o.n; ++i) {
    out += format_double(values[static_cast<std::size_t>(i)]);
    out += '\n';
  }
  write_output(o.output, out);
  return 0;
}

struct StudyOpts {
  std::string dist;
  std::string output;
  double alpha = 1.0;
  std::vector<double> betas;
  std::vector<int> ns;
  int reps = 1000;
  std::vector<std::string> methods;
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
};

int run_simstudy(const StudyOpts& o) {
  const std::uint64_t seed = resolve_seed(o.seed_given, o.seed);
  print_seed(seed);
  ppreg_study_config config{};
  config.dist = parse_dist(o.dist);
  config.alpha = o.alpha;
  config.betas = o.betas.empty() ? nullptr : o.betas.data();
  config.n_betas = static_cast<int>(o.betas.size());
  config.ns = o.ns.empty() ? nullptr : o.ns.data();
  config.n_ns = static_cast<int>(o.ns.size());
  config.reps = o.reps;
  config.seed = seed;
  const auto wants = [&](const char* name) {
    return o.methods.empty() ||
           std::find(o.methods.begin(), o.methods.end(), name) != o.methods.end();
  };
  config.use_wls_exact = wants("wls-exact") ? 1 : 0;
  config.use_ml = wants("ml") ? 1 : 0;
  ppreg_study* study_raw = nullptr;
  check(ppreg_study_run(&config, &study_raw));
  const StudyPtr study(study_raw);
  char* csv = nullptr;
  check(ppreg_study_to_csv(study.get(), &csv));
  const CString text(csv);
  write_output(o.output, text.get());
  return 0;
}

struct FigureOpts {
  std::string dist;
  std::string scheme = "standard";
  std::string output;
  int n = 0;
  long long m = 5000;
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
};

int run_figure(const FigureOpts& o) {
  const std::uint64_t seed = resolve_seed(o.seed_given, o.seed);
  print_seed(seed);
  ppreg_figure* figure_raw = nullptr;
  check(ppreg_figure_create(parse_dist(o.dist), o.n, o.m, seed,
                            parse_scheme(o.scheme), &figure_raw));
  const FigurePtr figure(figure_raw);
  char* csv = nullptr;
  check(ppreg_figure_to_csv(figure.get(), &csv));
  const CString text(csv);
  write_output(o.output, text.get());
  return 0;
}

const std::vector<std::string> kDists = {"loglogistic", "weibull", "logistic"};
const std::vector<std::string> kSchemes = {"standard", "bernard"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ppreg: order-statistic regression and maximum-likelihood fitting for\n"
      "log-logistic, Weibull and logistic samples."};
  app.require_subcommand(1);
  app.footer(
      "Numbers are serialized in the shortest decimal form that parses back to\n"
      "the same value (at most 17 significant digits), in JSON and CSV alike.\n"
      "Randomized subcommands print '# seed: N' on the error stream; pass\n"
      "--seed to pin it, or set PPREG_SEED (the flag wins).  Rerunning with\n"
      "the printed seed reproduces output byte for byte.");

  FitOpts fit_opts;
  auto* fit_cmd = app.add_subcommand(
      "fit", "Fit a distribution to observations; emits a JSON record");
  fit_cmd->add_option("--dist", fit_opts.dist, "Distribution family")
      ->required()
      ->check(CLI::IsMember(kDists));
  fit_cmd
      ->add_option("--method", fit_opts.method,
                   "Estimator: wls-exact (default), wls-asymptotic, wls-mc, "
                   "gls-full or ml")
      ->check(CLI::IsMember(
          {"wls-exact", "wls-asymptotic", "wls-mc", "gls-full", "ml"}));
  fit_cmd
      ->add_option("--input", fit_opts.input,
                   "Observations: one value per line, or a single-column CSV "
                   "with optional header 'x'")
      ->required();
  fit_cmd
      ->add_option("--scheme", fit_opts.scheme,
                   "Plotting-position scheme for asymptotic weights")
      ->check(CLI::IsMember(kSchemes));
  fit_cmd->add_option("--mc-m", fit_opts.mc_m,
                      "Monte Carlo replications for wls-mc and gls-full");
  auto* fit_seed =
      fit_cmd->add_option("--seed", fit_opts.seed, "Seed for wls-mc and gls-full");
  fit_cmd->add_option("--output", fit_opts.output,
                      "Output path (default: standard output)");

  WeightsOpts weights_opts;
  auto* weights_cmd = app.add_subcommand(
      "weights",
      "Per-rank residual means, variances and weights as CSV");
  weights_cmd->add_option("--dist", weights_opts.dist, "Distribution family")
      ->required()
      ->check(CLI::IsMember(kDists));
  weights_cmd->add_option("--n", weights_opts.n, "Sample size")->required();
  weights_cmd
      ->add_option("--method", weights_opts.method,
                   "Moment source: exact (default), asymptotic or mc")
      ->check(CLI::IsMember({"exact", "asymptotic", "mc"}));
  weights_cmd
      ->add_option("--scheme", weights_opts.scheme,
                   "Plotting-position scheme for asymptotic moments")
      ->check(CLI::IsMember(kSchemes));
  weights_cmd->add_option("--mc-m", weights_opts.mc_m,
                          "Monte Carlo replications for --method mc");
  auto* weights_seed =
      weights_cmd->add_option("--seed", weights_opts.seed, "Seed for --method mc");
  weights_cmd->add_option("--output", weights_opts.output,
                          "Output path (default: standard output)");

  CovOpts cov_opts;
  auto* cov_cmd = app.add_subcommand(
      "cov",
      "Monte Carlo residual covariance matrix as CSV; log-det and det go to "
      "the error stream");
  cov_cmd->add_option("--dist", cov_opts.dist, "Distribution family")
      ->required()
      ->check(CLI::IsMember(kDists));
  cov_cmd->add_option("--n", cov_opts.n, "Sample size")->required();
  cov_cmd->add_option("--m", cov_opts.m, "Monte Carlo replications");
  auto* cov_seed = cov_cmd->add_option("--seed", cov_opts.seed, "Seed");
  cov_cmd->add_option("--output", cov_opts.output,
                      "Output path (default: standard output)");

  SampleOpts sample_opts;
  auto* sample_cmd =
      app.add_subcommand("sample", "Draw random variates by inverse transform");
  sample_cmd->add_option("--dist", sample_opts.dist, "Distribution family")
      ->required()
      ->check(CLI::IsMember(kDists));
  sample_cmd->add_option("--n", sample_opts.n, "Number of variates")->required();
  sample_cmd->add_option("--alpha", sample_opts.alpha,
                         "Scale (location for the logistic family)");
  sample_cmd->add_option("--beta", sample_opts.beta,
                         "Shape (scale for the logistic family)");
  auto* sample_seed = sample_cmd->add_option("--seed", sample_opts.seed, "Seed");
  sample_cmd
      ->add_option("--format", sample_opts.format,
                   "plain: one value per line (default); csv: adds header 'x'")
      ->check(CLI::IsMember({"plain", "csv"}));
  sample_cmd->add_option("--output", sample_opts.output,
                         "Output path (default: standard output)");

  StudyOpts study_opts;
  auto* study_cmd = app.add_subcommand(
      "simstudy",
      "Replicated bias/MSE study over an (n, beta) grid; emits CSV");
  study_cmd->add_option("--dist", study_opts.dist, "Distribution family")
      ->required()
      ->check(CLI::IsMember({"loglogistic", "weibull"}));
  study_cmd->add_option("--alpha", study_opts.alpha, "True scale");
  study_cmd
      ->add_option("--beta", study_opts.betas,
                   "True shape grid (repeatable; default grid when omitted)")
      ->delimiter(',');
  study_cmd
      ->add_option("--n", study_opts.ns,
                   "Sample-size grid (repeatable; default 15,25,50,100)")
      ->delimiter(',');
  study_cmd->add_option("--reps", study_opts.reps, "Replications per cell");
  study_cmd
      ->add_option("--method", study_opts.methods,
                   "Estimators to include (repeatable; default both)")
      ->check(CLI::IsMember({"wls-exact", "ml"}))
      ->delimiter(',');
  auto* study_seed = study_cmd->add_option("--seed", study_opts.seed, "Seed");
  study_cmd->add_option("--output", study_opts.output,
                        "Output path (default: standard output)");

  FigureOpts figure_opts;
  auto* figure_cmd = app.add_subcommand(
      "figure-data",
      "Per-rank exact, Monte Carlo and asymptotic residual variances as CSV");
  figure_cmd->add_option("--dist", figure_opts.dist, "Distribution family")
      ->required()
      ->check(CLI::IsMember(kDists));
  figure_cmd->add_option("--n", figure_opts.n, "Sample size")->required();
  figure_cmd->add_option("--m", figure_opts.m, "Monte Carlo replications");
  figure_cmd
      ->add_option("--scheme", figure_opts.scheme, "Plotting-position scheme")
      ->check(CLI::IsMember(kSchemes));
  auto* figure_seed = figure_cmd->add_option("--seed", figure_opts.seed, "Seed");
  figure_cmd->add_option("--output", figure_opts.output,
                         "Output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  fit_opts.seed_given = fit_seed->count() > 0;
  weights_opts.seed_given = weights_seed->count() > 0;
  cov_opts.seed_given = cov_seed->count() > 0;
  sample_opts.seed_given = sample_seed->count() > 0;
  study_opts.seed_given = study_seed->count() > 0;
  figure_opts.seed_given = figure_seed->count() > 0;

  try {
    if (fit_cmd->parsed()) return run_fit(fit_opts);
    if (weights_cmd->parsed()) return run_weights(weights_opts);
    if (cov_cmd->parsed()) return run_cov(cov_opts);
    if (sample_cmd->parsed()) return run_sample(sample_opts);
    if (study_cmd->parsed()) return run_simstudy(study_opts);
    if (figure_cmd->parsed()) return run_figure(figure_opts);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
