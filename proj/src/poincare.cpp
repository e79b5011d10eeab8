#include "skewdim/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "fiber_dp.hpp"

namespace skewdim {

using detail::CayleyTrie;
using detail::DpSetup;
using detail::run_fiber_dp;

double SeriesProfile::total() const {
  double s = 0;
  for (double a : level_sums) s += a;
  return s;
}

double SeriesProfile::partial(int n) const {
  double s = 0;
  for (int m = 0; m <= n && m < static_cast<int>(level_sums.size()); ++m) s += level_sums[m];
  return s;
}

namespace {

std::vector<int> letters_of(const GroupElement& g) { return {g.letters().begin(), g.letters().end()}; }

// Adapts a node-level accumulator to the engine's policy interface.
template <class W, class F, class D>
struct NodePolicy {
  const CayleyTrie* trie;
  D dist;
  F on_visit;
  int completed = -1;
  int distance(const CayleyTrie& t, std::int32_t v) const { return dist(t, v); }
  void visit(int level, std::int32_t v, std::uint64_t, int, W value) {
    completed = level;
    on_visit(level, v, value);
  }
};

template <class W, class F, class D>
NodePolicy<W, F, D> make_policy(const CayleyTrie& trie, D dist, F on_visit) {
  return NodePolicy<W, F, D>{&trie, dist, on_visit};
}

void check_inputs(const SftSystem& system, const Projection& chi, double p, int n) {
  check_compatible(system, chi);
  if (n < 0) throw InputError("n", "must be nonnegative");
  if (!std::isfinite(p)) throw InputError("p", "must be finite");
}

}  // namespace

SeriesProfile truncated_series(const SftSystem& system, const Projection& chi, const GroupElement& target,
                               double p, int n, const EngineLimits& limits) {
  check_inputs(system, chi, p, n);
  if (target.max_generator() > chi.rank()) throw InputError("target", "uses a generator beyond the rank");
  SeriesProfile prof;
  prof.target = target;
  prof.p = p;
  prof.max_length = n;
  prof.level_sums.assign(n + 1, 0.0);
  CayleyTrie trie(chi.rank(), system.size(), letters_of(target), limits.max_nodes);
  const int len = static_cast<int>(target.length());
  auto policy = make_policy<double>(
      trie, [len](const CayleyTrie& t, std::int32_t v) { return t.depth(v) + len - 2 * t.lcp(v); },
      [&](int level, std::int32_t v, double value) {
        if (trie.depth(v) == len && trie.lcp(v) == len) prof.level_sums[level] += value;
      });
  DpSetup setup;
  setup.p = p;
  setup.max_length = n;
  setup.max_states = limits.max_states;
  try {
    run_fiber_dp<double>(system, chi, trie, setup, policy);
  } catch (const ResourceError& e) {
    SeriesProfile partial = prof;
    partial.max_length = std::max(policy.completed, 0);
    partial.level_sums.resize(partial.max_length + 1);
    throw TruncationError(e.what(), partial);
  }
  return prof;
}

std::vector<std::uint64_t> fiber_counts(const SftSystem& system, const Projection& chi,
                                        const GroupElement& target, int n, const EngineLimits& limits) {
  check_inputs(system, chi, 0.0, n);
  std::vector<std::uint64_t> counts(n + 1, 0);
  CayleyTrie trie(chi.rank(), system.size(), letters_of(target), limits.max_nodes);
  const int len = static_cast<int>(target.length());
  auto policy = make_policy<std::uint64_t>(
      trie, [len](const CayleyTrie& t, std::int32_t v) { return t.depth(v) + len - 2 * t.lcp(v); },
      [&](int level, std::int32_t v, std::uint64_t value) {
        if (trie.depth(v) == len && trie.lcp(v) == len) counts[level] += value;
      });
  DpSetup setup;
  setup.max_length = n;
  setup.max_states = limits.max_states;
  run_fiber_dp<std::uint64_t>(system, chi, trie, setup, policy);
  return counts;
}

std::vector<std::uint64_t> kernel_counts(const SftSystem& system, const Projection& chi, int n,
                                         const EngineLimits& limits) {
  return fiber_counts(system, chi, GroupElement{}, n, limits);
}

std::vector<std::vector<double>> ray_level_sums(const SftSystem& system, const Projection& chi,
                                                const BoundaryPoint& x, double p, int m_max, int n,
                                                const EngineLimits& limits) {
  check_inputs(system, chi, p, n);
  std::vector<std::vector<double>> sums(m_max + 1, std::vector<double>(n + 1, 0.0));
  CayleyTrie trie(chi.rank(), system.size(), letters_of(x.prefix(m_max)), limits.max_nodes);
  auto policy = make_policy<double>(
      trie, [](const CayleyTrie& t, std::int32_t v) { return t.depth(v) - t.lcp(v); },
      [&](int level, std::int32_t v, double value) {
        if (trie.depth(v) == trie.lcp(v)) sums[trie.depth(v)][level] += value;
      });
  DpSetup setup;
  setup.p = p;
  setup.max_length = n;
  setup.max_states = limits.max_states;
  run_fiber_dp<double>(system, chi, trie, setup, policy);
  return sums;
}

std::map<GroupElement, std::vector<double>> ball_level_sums(const SftSystem& system, const Projection& chi,
                                                            int radius, double p, int n,
                                                            const EngineLimits& limits) {
  check_inputs(system, chi, p, n);
  std::unordered_map<std::int32_t, std::vector<double>> by_node;
  CayleyTrie trie(chi.rank(), system.size(), {}, limits.max_nodes);
  auto policy = make_policy<double>(
      trie, [radius](const CayleyTrie& t, std::int32_t v) { return std::max(0, t.depth(v) - radius); },
      [&](int level, std::int32_t v, double value) {
        if (trie.depth(v) > radius) return;
        auto& row = by_node[v];
        if (row.empty()) row.assign(n + 1, 0.0);
        row[level] += value;
      });
  DpSetup setup;
  setup.p = p;
  setup.max_length = n;
  setup.max_states = limits.max_states;
  run_fiber_dp<double>(system, chi, trie, setup, policy);
  std::map<GroupElement, std::vector<double>> out;
  for (const auto& g : ball(chi.rank(), radius)) out[g].assign(n + 1, 0.0);
  for (auto& [v, row] : by_node) out[trie.element(v)] = std::move(row);
  return out;
}

std::vector<double> band_level_sums(const SftSystem& system, const Projection& chi, const BoundaryPoint& x,
                                    int r, double p, int n, const EngineLimits& limits) {
  check_inputs(system, chi, p, n);
  if (r < 0) throw InputError("r", "must be nonnegative");
  std::vector<double> sums(n + 1, 0.0);
  const std::size_t reach = static_cast<std::size_t>(chi.lambda1()) * n + 1;
  CayleyTrie trie(chi.rank(), system.size(), letters_of(x.prefix(reach)), limits.max_nodes);
  auto policy = make_policy<double>(
      trie, [r](const CayleyTrie& t, std::int32_t v) { return std::max(0, t.depth(v) - t.lcp(v) - r); },
      [&](int level, std::int32_t v, double value) {
        if (trie.depth(v) - trie.lcp(v) <= r) sums[level] += value;
      });
  DpSetup setup;
  setup.p = p;
  setup.max_length = n;
  setup.max_states = limits.max_states;
  run_fiber_dp<double>(system, chi, trie, setup, policy);
  return sums;
}

std::vector<double> unrestricted_level_sums(const SftSystem& system, double p, int n) {
  Projection trivial(1, std::vector<GroupElement>(system.size()));
  check_inputs(system, trivial, p, n);
  std::vector<double> sums(n + 1, 0.0);
  CayleyTrie trie(1, system.size(), {});
  auto policy = make_policy<double>(trie, [](const CayleyTrie&, std::int32_t) { return 0; },
                                    [&](int level, std::int32_t, double value) { sums[level] += value; });
  DpSetup setup;
  setup.p = p;
  setup.max_length = n;
  run_fiber_dp<double>(system, trivial, trie, setup, policy);
  return sums;
}

ExponentEstimate exponent_estimate(const SftSystem& system, const Projection& chi, const GroupElement& target,
                                   int n_max, std::pair<double, double> bracket, const EstimatorOptions& options,
                                   const EngineLimits& limits) {
  LevelSumFn fn = [&](double p) { return truncated_series(system, chi, target, p, n_max, limits).level_sums; };
  return estimate_exponent(fn, n_max, bracket, options);
}

SupermultiplicativityReport supermultiplicativity_report(const SftSystem& system, const Projection& chi,
                                                         double p, int radius, const std::vector<int>& n_values,
                                                         int joining_length, int denominator_cap,
                                                         const EngineLimits& limits) {
  if (n_values.empty()) throw InputError("n_values", "must be nonempty");
  SupermultiplicativityReport rep;
  rep.p = p;
  rep.radius = radius;
  rep.joining_length = joining_length;
  const int n_top = *std::max_element(n_values.begin(), n_values.end());
  const int den_top = std::min(2 * n_top + joining_length, denominator_cap);
  auto num = ball_level_sums(system, chi, radius, p, n_top, limits);
  auto den = ball_level_sums(system, chi, 2 * radius, p, den_top, limits);
  auto partial = [](const std::vector<double>& row, int n) {
    double s = 0;
    for (int m = 0; m <= n && m < static_cast<int>(row.size()); ++m) s += row[m];
    return s;
  };
  double running = 0;
  for (int n : n_values) {
    SupermultiplicativityRow row;
    row.n = n;
    row.denominator_length = std::min(2 * n + joining_length, denominator_cap);
    for (const auto& [g, rg] : num) {
      double zg = partial(rg, n);
      if (zg <= 0) continue;
      for (const auto& [h, rh] : num) {
        double zh = partial(rh, n);
        if (zh <= 0) continue;
        double zgh = partial(den.at(g * h), row.denominator_length);
        double ratio = zgh > 0 ? zg * zh / zgh : std::numeric_limits<double>::infinity();
        if (ratio > row.max_ratio) {
          row.max_ratio = ratio;
          row.g = g;
          row.h = h;
        }
      }
    }
    running = std::max(running, row.max_ratio);
    row.running_max = running;
    rep.rows.push_back(row);
  }
  if (rep.rows.size() >= 3) {
    double a = rep.rows[rep.rows.size() - 3].running_max, b = rep.rows.back().running_max;
    rep.tail_change = (b - a) / a;
  }
  return rep;
}

TermwiseReport termwise_decay_check(const SftSystem& system, const Projection& chi, const BoundaryPoint& x,
                                    double p, double p_prime, int m_max, int n, const EngineLimits& limits) {
  if (!(p_prime > p)) throw InputError("p_prime", "must exceed p");
  if (m_max < 1 || m_max > n) throw InputError("m_max", "must lie in [1, n]");
  TermwiseReport rep;
  rep.p = p;
  rep.p_prime = p_prime;
  rep.n = n;
  auto lo = ray_level_sums(system, chi, x, p, m_max, n, limits);
  auto hi = ray_level_sums(system, chi, x, p_prime, m_max, n, limits);
  const double min_u = system.min_value(), V = system.distortion();
  const double lambda = chi.lambda1();
  rep.bound_rate = (p - p_prime) * min_u / lambda;
  rep.all_hold = true;
  for (int m = 1; m <= m_max; ++m) {
    const double factor = std::exp((p_prime - p) * V + rep.bound_rate * m);
    double zlo = 0, zhi = 0;
    for (int k = 0; k <= n; ++k) {
      zlo += lo[m][k];
      zhi += hi[m][k];
      TermwiseRow row{m, k, zhi, factor * zlo, false};
      row.holds = row.lhs <= row.bound * (1 + 1e-12);
      if (row.bound > 0) rep.max_violation = std::max(rep.max_violation, row.lhs / row.bound - 1);
      rep.all_hold = rep.all_hold && row.holds;
      rep.rows.push_back(row);
    }
    rep.ratios.push_back(zlo > 0 ? zhi / zlo : 0.0);
  }
  double s = 0;
  for (double r : rep.ratios) rep.partial_sums.push_back(s += r);
  for (std::size_t i = 0; i + 1 < rep.ratios.size(); ++i)
    rep.increment_factors.push_back(rep.ratios[i] > 0 ? rep.ratios[i + 1] / rep.ratios[i] : 0.0);
  std::vector<double> padded(m_max + 1, 0.0);
  std::vector<int> idx;
  for (int m = 1; m <= m_max; ++m) {
    padded[m] = rep.ratios[m - 1];
    if (m >= (m_max + 1) / 2 && padded[m] > 0) idx.push_back(m);
  }
  rep.decay_rate = fit_log_slope(padded, idx).slope;
  return rep;
}

BoundarySeries boundary_series(const SftSystem& system, const Projection& chi, const BoundaryPoint& x, double p,
                               int m_max, int n, const EngineLimits& limits) {
  BoundarySeries out;
  out.p = p;
  out.n = n;
  auto sums = ray_level_sums(system, chi, x, p, m_max, n, limits);
  double total = 0, sup = 0;
  for (int m = 1; m <= m_max; ++m) {
    double z = 0;
    for (double a : sums[m]) z += a;
    out.terms.push_back(z);
    out.partial_sums.push_back(total += z);
    out.running_sup.push_back(sup = std::max(sup, z));
  }
  return out;
}

}  // namespace skewdim
