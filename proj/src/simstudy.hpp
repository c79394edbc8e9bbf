#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fitcore.hpp"

namespace ppreg {

// Replicated sampling experiment over an (n, beta) grid at fixed true scale.
// Each replication draws one sample and feeds the same sample to every
// requested method, so method columns are directly comparable.
struct StudyConfig {
  DistributionKind dist = DistributionKind::LogLogistic;
  double alpha = 1.0;
  std::vector<double> beta_grid;
  std::vector<int> n_grid;
  int reps = 1000;
  std::uint64_t seed = 0;
  std::vector<FitMethod> methods = {FitMethod::WlsExact, FitMethod::Ml};
};

// Default grids: shapes {1, 1.5, 2, 2.5} for the log-logistic family,
// {0.25, 1, 1.5} for the Weibull family, sizes {15, 25, 50, 100}.
std::vector<double> default_beta_grid(DistributionKind dist);
std::vector<int> default_n_grid();

struct StudyCell {
  double bias = 0.0;
  double mse = 0.0;
  // Monte Carlo standard errors of the two estimates above, computed from
  // the replication stream; useful for tolerance checks against published
  // tables.
  double bias_se = 0.0;
  double mse_se = 0.0;
  long long failures = 0;
  long long used = 0;
};

struct StudyReport {
  StudyConfig config;
  struct Row {
    int n;
    double beta_true;
    FitMethod method;
    int parameter;  // 0 = alpha, 1 = beta
    StudyCell cell;
  };
  std::vector<Row> rows;

  const StudyCell* find(int n, double beta_true, FitMethod method,
                        int parameter) const;
};

StudyReport run_study(const StudyConfig& config);

// Per-rank residual variances three ways, for variance-comparison plots.
struct FigureData {
  DistributionKind dist;
  int n = 0;
  struct Row {
    int rank;
    double exact_var;
    double mc_var;
    double asymptotic_var;
  };
  std::vector<Row> rows;
};

FigureData figure_data(DistributionKind dist, int n, long long mc_m,
                       std::uint64_t seed,
                       PlottingScheme scheme = PlottingScheme::Standard);

// CSV with header dist,n,beta_true,method,parameter,bias,mse,failures.
std::string to_csv(const StudyReport& report);

// CSV with header rank,exact,mc,asymptotic.
std::string to_csv(const FigureData& figure);

}  // namespace ppreg
