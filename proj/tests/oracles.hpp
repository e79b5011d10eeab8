#pragma once

// Brute-force reference implementations used by the unit and acceptance tests. None of these
// call the library's counting or series engines; they only read input data (incidence, symbol
// images, window values, generator matrices).

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "skewdim/extension.hpp"
#include "skewdim/schottky.hpp"
#include "skewdim/symbolic.hpp"

namespace oracle {

// Free reduction of signed letters (+i is e_i, -i its inverse).
std::vector<int> reduce(const std::vector<int>& letters);

struct Shift {
  int k = 0;
  std::vector<std::vector<bool>> allowed;
  std::vector<std::vector<int>> images;  // signed letters per symbol
  int depth = 1;
  std::function<double(const std::vector<int>&)> window;  // value on a window of `depth` symbols
};
Shift from_system(const skewdim::SftSystem& system, const skewdim::Projection& chi);

std::vector<std::vector<int>> admissible_words(const Shift& s, int n);
// Sup over admissible one-sided extensions of the sum of the first |w| window values.
double sup_birkhoff(const Shift& s, const std::vector<int>& w);
std::vector<int> image(const Shift& s, const std::vector<int>& w);

std::vector<std::uint64_t> fiber_counts(const Shift& s, const std::vector<int>& target, int n);
std::vector<double> level_sums(const Shift& s, const std::vector<int>& target, double p, int n);

// Words of length m over the 2r symmetric letters of F_r reducing to the identity, via the
// birth-death chain on reduced length. Exact while below 2^53.
std::vector<double> radial_return_counts(int rank, int n);
// Limit of r_{m+2}/r_m extrapolated to first order in 1/m.
double radial_growth_ratio(int rank, int n);

// Complex 2x2 products for Schottky words, from the generator matrices only.
using Mat = std::array<std::complex<double>, 4>;
Mat to_mat(const skewdim::Mobius& g);
Mat mul(const Mat& x, const Mat& y);
// d_h(0, g 0) from |g(0)| and the matrix entry d, for g in SU(1,1).
double distance_from_origin(const Mat& g);
// Level sums over reduced words of each length of exp(-p d_h(0, w 0)), optionally kernel only.
std::vector<double> schottky_level_sums(const skewdim::SchottkyGroup& g, double p, int n,
                                        const skewdim::Projection* chi = nullptr);

// Least-squares slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

// Deterministic generator for property tests.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed * 0x9E3779B97F4A7C15ULL + 1) {}
  std::uint64_t next();
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
};

std::vector<int> random_letters(Rng& rng, int rank, int max_len);
std::vector<int> random_admissible(Rng& rng, const Shift& s, int len);

}  // namespace oracle
