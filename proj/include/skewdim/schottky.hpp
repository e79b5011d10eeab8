#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skewdim/escape.hpp"
#include "skewdim/estimator.hpp"
#include "skewdim/extension.hpp"
#include "skewdim/freegroup.hpp"
#include "skewdim/symbolic.hpp"

namespace skewdim {

using Complex = std::complex<double>;

// z -> (a z + b) / (c z + d), determinant 1.
struct Mobius {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  Complex operator()(Complex z) const { return (a * z + b) / (c * z + d); }
  Mobius operator*(const Mobius& o) const;
  Mobius inverse() const { return {d, -b, -c, a}; }
  Complex det() const { return a * d - b * c; }
  double derivative_abs(Complex z) const { return 1.0 / std::norm(c * z + d); }
  // Sum of squared entry moduli; equals 2 cosh d_h(0, g 0) for disk automorphisms.
  double frobenius2() const { return std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d); }
};

// d_h(0, g 0), stable for large displacements.
double displacement(const Mobius& g);
// Poincare disk metric. Throws InputError for points off the open disk.
double hyperbolic_distance(Complex z, Complex w);

struct Circle {
  Complex center;
  double radius = 0;
};

struct SchottkyConfig {
  std::vector<std::string> names;  // default s0, s1, ...
  std::vector<Circle> circles;
  std::vector<std::pair<int, int>> pairing;
  double tolerance = 1e-9;
};

// Counterclockwise arc of the unit circle from `start` to `end`.
struct Arc {
  Complex start, end;
  double length() const;
  bool contains(Complex z, double tol) const;
};

class SchottkyGroup {
 public:
  int size() const { return static_cast<int>(circles_.size()); }
  int rank() const { return size() / 2; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(Symbol s) const { return names_.at(s); }
  Symbol symbol(std::string_view name) const;
  Symbol partner(Symbol s) const { return partner_.at(s); }
  const Circle& circle(Symbol s) const { return circles_.at(s); }
  const Mobius& generator(Symbol s) const { return generators_.at(s); }
  const Arc& base_arc(Symbol s) const { return arcs_.at(s); }
  double tolerance() const { return tolerance_; }

  Mobius word_matrix(std::span<const Symbol> word) const;
  bool is_reduced(std::span<const Symbol> word) const;
  Word inverse_word(std::span<const Symbol> word) const;
  // Whitespace-separated symbol names.
  Word parse_word(std::string_view text) const;
  std::string format(std::span<const Symbol> word) const;

 private:
  friend SchottkyGroup build_schottky(const SchottkyConfig& config);
  std::vector<std::string> names_;
  std::vector<Circle> circles_;
  std::vector<Symbol> partner_;
  std::vector<Mobius> generators_;
  std::vector<Arc> arcs_;
  double tolerance_ = 1e-9;
};

// Throws InputError for bad counts or pairings and GeometryError for circles that are not
// orthogonal to the unit circle, overlap, or are not mapped onto each other.
SchottkyGroup build_schottky(const SchottkyConfig& config);

// 2 * pairs circles centred at angles pi j / pairs, all with the given arc half-width, circle j
// paired with j + pairs. Names a1..aN then A1..AN.
SchottkyConfig symmetric_config(int pairs = 3, double half_width_deg = 20.0);
// Radius of a circle orthogonal to the unit circle whose boundary arc has this half-width.
double orthogonal_radius(double half_width_rad);

// max over a of the distance of g_a g_abar to {I, -I}, entrywise.
double generator_pair_defect(const SchottkyGroup& group);

double orbital_birkhoff(const SchottkyGroup& group, std::span<const Symbol> word);
// Image under omega of the counterclockwise endpoint of the base arc of the partner of the
// last letter. An endpoint of the cylinder arc of omega.
Complex representative_point(const SchottkyGroup& group, std::span<const Symbol> word);
// log |(omega^{-1})'(z)|
double log_inverse_derivative(const SchottkyGroup& group, std::span<const Symbol> word, Complex z);
// log |(omega^{-1})'(z_omega)| at the representative point.
double geometric_birkhoff(const SchottkyGroup& group, std::span<const Symbol> word);
Arc cylinder_arc(const SchottkyGroup& group, std::span<const Symbol> word);

// Reduced sequences over the group's symbols, with the locally constant potential
// u(w) = log |(w_0^{-1})'(z_w)| on windows w of the given length.
SftSystem coding_system(const SchottkyGroup& group, int depth);
// a <-> abar with reversal: the group inverse on words.
Involution coding_involution(const SchottkyGroup& group);
// Symbol images by name. Checks chi(abar) = chi(a)^{-1}, that the images generate the target,
// and that the target has rank between 2 and rank(G) - 1.
Projection schottky_projection(const SchottkyGroup& group, int target_rank,
                               const std::map<std::string, GroupElement>& images);

// Per-level histogram of a real statistic: counts plus fixed-point sums of offsets inside each
// bin, so merging is exact and order-independent.
struct LevelHistogram {
  std::int64_t origin = 0;  // bin index of the first entry
  std::vector<std::uint64_t> count;
  std::vector<std::uint64_t> offset_sum;
  void add(double value, double width);
  void merge(const LevelHistogram& other);
  // sum over entries of exp(-p value), each bin represented by its mean.
  double laplace(double p, double width) const;
};

struct EnumerationOptions {
  double bin_width = 1e-3;
  int threads = 1;
};

struct OrbitEnumeration {
  int n = 0;
  bool kernel_only = false;
  double bin_width = 1e-3;
  std::vector<LevelHistogram> orbital;    // by word length
  std::vector<LevelHistogram> geometric;
  std::vector<double> max_gap;            // max |geometric - orbital| per length
  std::vector<std::uint64_t> words;       // per length
  std::uint64_t nodes = 0;
  std::vector<double> level_sums(double p, bool use_geometric = false) const;
};

// All reduced words of length <= n, or only those in ker chi when chi is given.
OrbitEnumeration enumerate_orbits(const SchottkyGroup& group, int n, const Projection* chi = nullptr,
                                  const EnumerationOptions& options = {});
// Number of reduced words of length <= n.
double reduced_word_count(const SchottkyGroup& group, int n);

struct SchottkyExponent {
  ExponentEstimate orbital;
  ExponentEstimate geometric;  // same words, geometric potential
  int n = 0;
  OrbitEnumeration enumeration;
};
// n is lowered until the enumeration fits in node_budget words.
SchottkyExponent delta_G_estimate(const SchottkyGroup& group, int n_max, double node_budget = 4e8,
                                  const EnumerationOptions& options = {});
SchottkyExponent delta_N_estimate(const SchottkyGroup& group, const Projection& chi, int n_max,
                                  const EnumerationOptions& options = {});

// {a w a^{-1} : a a generator, a not in {w_0^{-1}, w_last}} for a kernel word w, and for each
// ordered pair (b, c) the first element with b I c reduced.
struct KernelCertificate {
  Word omega;
  std::vector<Word> words;
  std::vector<std::vector<Word>> connectors;  // [b][c]
  bool valid = false;
  std::string failure;
};
KernelCertificate kernel_certificate(const SchottkyGroup& group, const Projection& chi, std::span<const Symbol> omega);

struct TheoremCOptions {
  int n_max = 14;
  double g_node_budget = 4e8;
  int gap_length = 12;
  int random_words = 1000;
  int random_max_length = 24;
  std::uint64_t seed = 1;
  int potential_depth = 4;
  int dp_n = 20;               // truncation for the locally constant cross-check
  int escape_depth = 2;         // window length of the potential used for escape and covering
  std::vector<double> escape_factors{0.9, 0.5};
  int measure_depth = 3;
  double cover_factor = 1.1;
  int cover_r = 2;
  int cover_n = 16;
  EnumerationOptions enumeration;
  EscapeOptions escape{.limits = {.max_states = 2'000'000}};
};

struct EscapeAttempt {
  double p = 0;
  bool constructed = false;  // threshold cleared
  bool tree_built = false;
  std::string message;
  int middle_length = 0;
  double threshold = 0;
  double margin = 0;
  std::vector<double> total_mass;
  std::vector<double> mass_ratio;
  std::vector<double> min_local_dimension;
};

struct TheoremCReport {
  double generator_defect = 0;
  double orbital_symmetry_gap = 0;  // max |d(0, w0) - d(0, w^{-1}0)| over random words
  std::vector<double> gap_by_length;  // index = length, 0..gap_length
  double gap_tail_change = 0;         // relative change over the last three lengths
  bool gap_stabilizes = false;
  bool dagger_is_inverse = false;     // reversal + pairing equals the group inverse on words
  double potential_symmetry_bound = 0;  // 2 * max gap + orbital symmetry gap
  KernelCertificate certificate;
  SchottkyExponent delta_G;
  SchottkyExponent delta_N;
  ExponentEstimate delta_G_dp;  // locally constant potential, pruned DP
  ExponentEstimate delta_N_dp;
  double lower_margin = 0;  // delta_N - delta_G / 2
  double upper_margin = 0;  // delta_G - delta_N
  double combined_ci = 0;
  bool ordering_holds = false;
  std::vector<EscapeAttempt> escape;
  std::optional<CoveringReport> covering;
  std::string covering_message;
};

TheoremCReport theorem_c_report(const SchottkyGroup& group, const Projection& chi, const BoundaryPoint& x,
                                const TheoremCOptions& options = {});

// Uniformly chosen reduced words with lengths uniform in [1, max_length].
std::vector<Word> random_reduced_words(const SchottkyGroup& group, int count, int max_length, std::uint64_t seed);

}  // namespace skewdim
