#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

std::vector<int> reduce(const std::vector<int>& letters) {
  std::vector<int> out;
  for (int l : letters) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Shift from_system(const skewdim::SftSystem& system, const skewdim::Projection& chi) {
  Shift s;
  s.k = static_cast<int>(system.size());
  s.allowed = system.incidence();
  for (int a = 0; a < s.k; ++a) {
    auto l = chi.image(static_cast<skewdim::Symbol>(a)).letters();
    s.images.emplace_back(l.begin(), l.end());
  }
  s.depth = system.depth();
  s.window = [&system](const std::vector<int>& w) {
    skewdim::Word word(w.begin(), w.end());
    return system.window_value(word);
  };
  return s;
}

namespace {

bool admissible(const Shift& s, const std::vector<int>& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!s.allowed[w[i - 1]][w[i]]) return false;
  return true;
}

void extend(const Shift& s, std::vector<int>& w, int remaining, const std::function<void(const std::vector<int>&)>& f) {
  if (remaining == 0) {
    f(w);
    return;
  }
  for (int a = 0; a < s.k; ++a) {
    if (!w.empty() && !s.allowed[w.back()][a]) continue;
    w.push_back(a);
    extend(s, w, remaining - 1, f);
    w.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> admissible_words(const Shift& s, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> w;
  extend(s, w, n, [&](const std::vector<int>& x) { out.push_back(x); });
  return out;
}

double sup_birkhoff(const Shift& s, const std::vector<int>& w) {
  const int n = static_cast<int>(w.size());
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> ext = w;
  extend(s, ext, s.depth - 1, [&](const std::vector<int>& x) {
    if (!admissible(s, x)) return;
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += s.window(std::vector<int>(x.begin() + i, x.begin() + i + s.depth));
    best = std::max(best, sum);
  });
  return best;
}

std::vector<int> image(const Shift& s, const std::vector<int>& w) {
  std::vector<int> letters;
  for (int a : w) letters.insert(letters.end(), s.images[a].begin(), s.images[a].end());
  return reduce(letters);
}

std::vector<std::uint64_t> fiber_counts(const Shift& s, const std::vector<int>& target, int n) {
  std::vector<std::uint64_t> out(n + 1, 0);
  if (target.empty()) out[0] = 1;
  for (int m = 1; m <= n; ++m)
    for (const auto& w : admissible_words(s, m)) out[m] += image(s, w) == target;
  return out;
}

std::vector<double> level_sums(const Shift& s, const std::vector<int>& target, double p, int n) {
  std::vector<double> out(n + 1, 0.0);
  if (target.empty()) out[0] = 1.0;
  for (int m = 1; m <= n; ++m)
    for (const auto& w : admissible_words(s, m))
      if (image(s, w) == target) out[m] += std::exp(-p * sup_birkhoff(s, w));
  return out;
}

namespace {

// Steps the birth-death chain on reduced length n times; calls f(m, dist) after each step.
void radial_chain(int rank, int n, const std::function<void(int, const std::vector<double>&)>& f) {
  // dist[k] = number of words of the current length whose reduced length is k.
  std::vector<double> dist(n + 2, 0.0), next(n + 2);
  dist[0] = 1;
  f(0, dist);
  for (int m = 1; m <= n; ++m) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int k = 0; k <= m - 1; ++k) {
      if (dist[k] == 0) continue;
      if (k == 0) {
        next[1] += 2.0 * rank * dist[0];
      } else {
        next[k + 1] += (2.0 * rank - 1) * dist[k];
        next[k - 1] += dist[k];
      }
    }
    dist.swap(next);
    f(m, dist);
  }
}

}  // namespace

std::vector<double> radial_return_counts(int rank, int n) {
  std::vector<double> out;
  radial_chain(rank, n, [&](int, const std::vector<double>& d) { out.push_back(d[0]); });
  return out;
}

double radial_growth_ratio(int rank, int n) {
  auto r = radial_return_counts(rank, n);
  if (n % 2) --n;
  auto ratio = [&](int m) { return r[m] / r[m - 2]; };
  // R_m = L + a/m + O(1/m^2): m R_m - (m - 2) R_{m-2} = 2 L + O(1/m^2).
  return (n * ratio(n) - (n - 2) * ratio(n - 2)) / 2.0;
}

Mat to_mat(const skewdim::Mobius& g) { return {g.a, g.b, g.c, g.d}; }

Mat mul(const Mat& x, const Mat& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

double distance_from_origin(const Mat& g) {
  // 2 atanh r with r = |g(0)| = |b / d|, rewritten via |d|^2 - |b|^2 = 1 to avoid 1 - r.
  const double r = std::abs(g[1] / g[3]);
  return 2.0 * std::log((1.0 + r) * std::abs(g[3]));
}

std::vector<double> schottky_level_sums(const skewdim::SchottkyGroup& g, double p, int n,
                                        const skewdim::Projection* chi) {
  std::vector<double> out(n + 1, 0.0);
  out[0] = 1.0;
  const int k = g.size();
  std::vector<int> word;
  std::vector<int> letters;
  std::function<void(const Mat&, int)> walk = [&](const Mat& m, int depth) {
    if (depth > 0) {
      bool keep = true;
      if (chi) {
        std::vector<int> l;
        for (int s : word) {
          auto im = chi->image(static_cast<skewdim::Symbol>(s)).letters();
          l.insert(l.end(), im.begin(), im.end());
        }
        keep = reduce(l).empty();
      }
      if (keep) out[depth] += std::exp(-p * distance_from_origin(m));
    }
    if (depth == n) return;
    for (int s = 0; s < k; ++s) {
      if (!word.empty() && g.partner(static_cast<skewdim::Symbol>(word.back())) == s) continue;
      word.push_back(s);
      walk(mul(m, to_mat(g.generator(static_cast<skewdim::Symbol>(s)))), depth + 1);
      word.pop_back();
    }
  };
  walk(Mat{1.0, 0.0, 0.0, 1.0}, 0);
  return out;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

std::uint64_t Rng::next() {
  // splitmix64
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<int> random_letters(Rng& rng, int rank, int max_len) {
  std::vector<int> out(rng.below(max_len + 1));
  for (int& l : out) l = (rng.below(rank) + 1) * (rng.below(2) ? 1 : -1);
  return out;
}

std::vector<int> random_admissible(Rng& rng, const Shift& s, int len) {
  for (;;) {
    std::vector<int> w;
    while (static_cast<int>(w.size()) < len) {
      std::vector<int> options;
      for (int a = 0; a < s.k; ++a)
        if (w.empty() || s.allowed[w.back()][a]) options.push_back(a);
      if (options.empty()) break;
      w.push_back(options[rng.below(static_cast<int>(options.size()))]);
    }
    if (static_cast<int>(w.size()) == len) return w;
  }
}

}  // namespace oracle
