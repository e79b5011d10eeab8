#include "skewdim/estimator.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numeric>

#include "skewdim/errors.hpp"

namespace skewdim {

double t_quantile_975(int dof) {
  if (dof < 1) return 0.0;
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, 0.975);
}

SlopeFit fit_log_slope(const std::vector<double>& levels, const std::vector<int>& indices) {
  SlopeFit fit;
  fit.points = static_cast<int>(indices.size());
  if (fit.points < 2) return fit;
  double mx = 0, my = 0;
  std::vector<double> y(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    y[i] = std::log(levels[indices[i]]);
    mx += indices[i];
    my += y[i];
  }
  mx /= fit.points;
  my /= fit.points;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    sxx += (indices[i] - mx) * (indices[i] - mx);
    sxy += (indices[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  if (fit.points > 2) {
    double ssr = 0;
    for (std::size_t i = 0; i < indices.size(); ++i) {
      double r = y[i] - (my + fit.slope * (indices[i] - mx));
      ssr += r * r;
    }
    fit.se = std::sqrt(ssr / (fit.points - 2) / sxx);
  }
  return fit;
}

ExponentEstimate estimate_exponent(const LevelSumFn& level_sums, int n_max, std::pair<double, double> bracket,
                                   const EstimatorOptions& options) {
  if (n_max < 2) throw InputError("n_max", "must be at least 2");
  if (!(bracket.first < bracket.second)) throw InputError("p_bracket", "lower end must be below upper end");
  ExponentEstimate est;
  est.n_max = n_max;
  est.window_lo = options.window_lo >= 0 ? options.window_lo : n_max / 2;
  est.window_hi = n_max;

  std::vector<int> lattice;
  auto gamma = [&](double p) {
    std::vector<double> a = level_sums(p);
    if (static_cast<int>(a.size()) < n_max + 1) throw Error("level sums shorter than n_max");
    if (lattice.empty()) {
      for (int m = est.window_lo; m <= n_max; ++m)
        if (a[m] > 0 && std::isfinite(a[m])) lattice.push_back(m);
      if (lattice.size() < 2)
        throw NoDataError("fewer than two levels in [" + std::to_string(est.window_lo) + ", " +
                          std::to_string(n_max) + "] carry mass");
      int g = 0;
      for (int m : lattice) g = std::gcd(g, m - lattice.front());
      est.period = std::max(g, 1);
      est.residue = lattice.front() % est.period;
    }
    for (int m : lattice)
      if (!(a[m] > 0)) throw NoDataError("level " + std::to_string(m) + " underflowed at p = " + std::to_string(p));
    SlopeFit fit = fit_log_slope(a, lattice);
    est.evaluations.emplace_back(p, fit.slope);
    return fit.slope;
  };

  double lo = bracket.first, hi = bracket.second;
  double glo = gamma(lo), ghi = gamma(hi);
  if (!(glo > 0 && ghi < 0))
    throw InputError("p_bracket", "growth slope does not change sign on [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]: " + std::to_string(glo) + ", " +
                                      std::to_string(ghi));
  std::uintmax_t iters = static_cast<std::uintmax_t>(options.max_iterations);
  const double tol = options.tolerance;
  auto r = boost::math::tools::toms748_solve(gamma, lo, hi, glo, ghi,
                                             [tol](double a, double b) { return std::abs(b - a) < tol; }, iters);
  est.value = 0.5 * (r.first + r.second);

  std::vector<double> a = level_sums(est.value);
  SlopeFit full = fit_log_slope(a, lattice);
  est.points = full.points;
  est.slope_se = full.se;
  if (lattice.size() >= 3) {
    std::size_t half = (lattice.size() + 1) / 2;
    std::vector<int> lower(lattice.begin(), lattice.begin() + half);
    std::vector<int> upper(lattice.end() - half, lattice.end());
    est.drift = std::abs(fit_log_slope(a, lower).slope - fit_log_slope(a, upper).slope) / 2;
  }
  for (std::size_t i = 0; i + 1 < lattice.size(); ++i) est.ratios.push_back(a[lattice[i + 1]] / a[lattice[i]]);

  const double h = options.derivative_step;
  double gp = fit_log_slope(level_sums(est.value + h), lattice).slope;
  double gm = fit_log_slope(level_sums(est.value - h), lattice).slope;
  est.derivative = (gp - gm) / (2 * h);
  double spread = std::max(t_quantile_975(full.points - 2) * full.se, est.drift);
  est.ci_width = est.derivative != 0 ? spread / std::abs(est.derivative) : INFINITY;
  return est;
}

}  // namespace skewdim
