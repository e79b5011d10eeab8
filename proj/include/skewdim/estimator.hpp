#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace skewdim {

// Level sums a_0..a_n of a Poincare-type series at exponent p.
using LevelSumFn = std::function<std::vector<double>(double p)>;

struct EstimatorOptions {
  int window_lo = -1;  // default n_max / 2
  double tolerance = 1e-6;
  int max_iterations = 80;
  double derivative_step = 1e-3;
};

// Root of the log-growth slope gamma(p) of the level sums, fitted by least squares over the
// lattice of levels that carry mass inside [window_lo, n_max].
struct ExponentEstimate {
  double value = 0;
  double ci_width = 0;  // half-width
  int n_max = 0;
  int window_lo = 0;
  int window_hi = 0;
  int period = 1;
  int residue = 0;
  int points = 0;
  double slope_se = 0;     // standard error of gamma at the root
  double drift = 0;        // |gamma_lower_half - gamma_upper_half| / 2 at the root
  double derivative = 0;   // d gamma / dp at the root
  std::vector<std::pair<double, double>> evaluations;  // (p, gamma)
  std::vector<double> ratios;  // a_{m+period} / a_m at the root, over the window
};

struct SlopeFit {
  double slope = 0;
  double se = 0;
  int points = 0;
};
// Ordinary least squares of log a_m against m over the given levels.
SlopeFit fit_log_slope(const std::vector<double>& levels, const std::vector<int>& indices);

ExponentEstimate estimate_exponent(const LevelSumFn& level_sums, int n_max,
                                   std::pair<double, double> bracket,
                                   const EstimatorOptions& options = {});

// Two-sided 97.5% Student t quantile.
double t_quantile_975(int dof);

}  // namespace skewdim
