#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "skewdim/errors.hpp"
#include "skewdim/estimator.hpp"
#include "skewdim/extension.hpp"
#include "skewdim/freegroup.hpp"
#include "skewdim/symbolic.hpp"

namespace skewdim {

struct EngineLimits {
  std::size_t max_states = 40'000'000;  // per level
  std::size_t max_nodes = 60'000'000;   // distinct group elements
};

// Truncated restricted series Z_n(p|g) = sum over admissible w, |w| <= n, chi(w) = g, of
// exp(-p S(w)), kept as level sums a_m.
struct SeriesProfile {
  GroupElement target;
  double p = 0;
  int max_length = 0;
  std::vector<double> level_sums;

  double total() const;
  double partial(int n) const;  // Z_n
};

// Raised when a cap is hit; carries the levels completed so far.
class TruncationError : public ResourceError {
 public:
  TruncationError(const std::string& what, SeriesProfile partial)
      : ResourceError(what), partial_(std::move(partial)) {}
  const SeriesProfile& partial() const { return partial_; }

 private:
  SeriesProfile partial_;
};

SeriesProfile truncated_series(const SftSystem& system, const Projection& chi, const GroupElement& target,
                               double p, int n, const EngineLimits& limits = {});

// Exact counts of admissible words of each length 0..n with image `target`.
std::vector<std::uint64_t> fiber_counts(const SftSystem& system, const Projection& chi,
                                        const GroupElement& target, int n, const EngineLimits& limits = {});
std::vector<std::uint64_t> kernel_counts(const SftSystem& system, const Projection& chi, int n,
                                         const EngineLimits& limits = {});

// Level sums for every ray prefix x_0..x_{j-1}, j = 0..m_max: result[j][m].
std::vector<std::vector<double>> ray_level_sums(const SftSystem& system, const Projection& chi,
                                                const BoundaryPoint& x, double p, int m_max, int n,
                                                const EngineLimits& limits = {});
// Level sums for every element of the ball of the given radius.
std::map<GroupElement, std::vector<double>> ball_level_sums(const SftSystem& system, const Projection& chi,
                                                            int radius, double p, int n,
                                                            const EngineLimits& limits = {});
// Level sums over words whose image deviates from the ray x by at most r:
// |chi(w)| - |chi(w) ^ x| <= r.
std::vector<double> band_level_sums(const SftSystem& system, const Projection& chi, const BoundaryPoint& x,
                                    int r, double p, int n, const EngineLimits& limits = {});
// Level sums over all admissible words, ignoring the projection.
std::vector<double> unrestricted_level_sums(const SftSystem& system, double p, int n);

ExponentEstimate exponent_estimate(const SftSystem& system, const Projection& chi, const GroupElement& target,
                                   int n_max, std::pair<double, double> bracket,
                                   const EstimatorOptions& options = {}, const EngineLimits& limits = {});

struct SupermultiplicativityRow {
  int n = 0;
  int denominator_length = 0;
  double max_ratio = 0;
  GroupElement g, h;  // maximizing pair
  double running_max = 0;
};
struct SupermultiplicativityReport {
  double p = 0;
  int radius = 0;
  int joining_length = 0;  // longest connector
  std::vector<SupermultiplicativityRow> rows;
  // Relative change of the running maximum over the last three n values.
  double tail_change = 0;
};
// max over g, h in the ball of Z_n(g) Z_n(h) / Z_N(gh), N = min(2n + L, denominator_cap).
SupermultiplicativityReport supermultiplicativity_report(const SftSystem& system, const Projection& chi,
                                                         double p, int radius, const std::vector<int>& n_values,
                                                         int joining_length, int denominator_cap,
                                                         const EngineLimits& limits = {});

struct TermwiseRow {
  int m = 0;  // |g|, g = x_0..x_{m-1}
  int n = 0;
  double lhs = 0;    // Z_n(p'|g)
  double bound = 0;  // exp((p' - p) V + (p - p') m min u / lambda1) Z_n(p|g)
  bool holds = false;
};
struct TermwiseReport {
  double p = 0, p_prime = 0;
  int n = 0;
  std::vector<TermwiseRow> rows;
  bool all_hold = false;
  double max_violation = 0;  // max of lhs / bound - 1
  std::vector<double> ratios;       // Z_n(p'|x_m) / Z_n(p|x_m), m = 1..m_max
  std::vector<double> partial_sums;
  std::vector<double> increment_factors;  // ratios[m+1] / ratios[m]
  double decay_rate = 0;  // least squares slope of log ratios over the upper half of m
  double bound_rate = 0;  // (p - p') min u / lambda1
};
TermwiseReport termwise_decay_check(const SftSystem& system, const Projection& chi, const BoundaryPoint& x,
                                    double p, double p_prime, int m_max, int n,
                                    const EngineLimits& limits = {});

struct BoundarySeries {
  double p = 0;
  int n = 0;
  std::vector<double> terms;         // Z_n(p|x_0..x_{m-1}), m = 1..m_max
  std::vector<double> partial_sums;
  std::vector<double> running_sup;  // of Z_n over prefixes
};
BoundarySeries boundary_series(const SftSystem& system, const Projection& chi, const BoundaryPoint& x, double p,
                               int m_max, int n, const EngineLimits& limits = {});

}  // namespace skewdim
