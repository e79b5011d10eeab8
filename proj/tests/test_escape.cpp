#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "skewdim/errors.hpp"
#include "skewdim/escape.hpp"
#include "skewdim/fixtures.hpp"

using namespace skewdim;

namespace {

struct Srw {
  SftSystem s = fixtures::f2_srw_system();
  Projection chi = fixtures::f2_srw_projection();
  BoundaryPoint x = BoundaryPoint::parse("", "e1");
};

}  // namespace

TEST_CASE("construction clears its threshold") {
  Srw f;
  EscapeConstruction c = build_escape_construction(f.s, f.chi, f.x, 0.6);
  CHECK(c.margin > 0);
  CHECK(c.log_middle_mass - c.threshold == doctest::Approx(c.margin));
  CHECK(c.middle_length % 2 == 0);
  // With u = 1 the middle level sum is r_l exp(-p l).
  auto r = oracle::radial_return_counts(2, c.middle_length);
  CHECK(c.log_middle_mass == doctest::Approx(std::log(r[c.middle_length]) - 0.6 * c.middle_length).epsilon(1e-12));
  CHECK(c.deviation_bound == c.max_block_length * f.chi.lambda1());
}

// On the full shift with u = 1 every word of the disjoint set fits at every junction, so a block
// is tau rho w rho' with rho, rho' free in the set and w any kernel word of length l. Every node
// mass is then prod_k exp(-p |block_k|) / Y with Y = r_l exp(-p (|tau| + l)) (sum_rho exp(-p |rho|))^2.
static double oracle_log_block_normaliser(const Srw& f, const EscapeConstruction& c) {
  const int l = c.middle_length;
  const double r_l = oracle::radial_return_counts(2, l)[l];
  double z = 0;
  for (const Word& rho : c.connectors.flat()) z += std::exp(-c.p * rho.size());
  const double tau = c.tau_for(f.x.letter(0)).size();
  return std::log(r_l) - c.p * (tau + l) + 2 * std::log(z);
}

TEST_CASE("measure tree on the F2 walk matches the block-product oracle") {
  Srw f;
  EscapeConstruction c = build_escape_construction(f.s, f.chi, f.x, 0.6);
  MeasureTree t = build_measure_tree(c, 3);
  REQUIRE(t.levels.size() == 3);
  const double log_y = oracle_log_block_normaliser(f, c);
  for (const TreeLevel& l : t.levels) {
    CHECK(std::abs(l.total_mass - 1) <= 1e-10);
    CHECK(l.consistency_error <= 1e-10);
    // u = 1 makes S the node length, so log mu + p S = -depth log Y on every class.
    for (const NodeClass& cl : l.classes)
      CHECK(cl.log_mass + c.p * cl.birkhoff == doctest::Approx(-l.depth * log_y).epsilon(1e-12));
  }
  auto prof = mass_ratio_profile(t);
  for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i] <= prof[i - 1] + 1e-10);
  for (const SupportSample& smp : sample_support(c, 3, 8, 3)) {
    double len = 0;
    for (const Word& b : smp.blocks) len += b.size();
    CHECK(smp.log_mass == doctest::Approx(-c.p * len - 3 * log_y).epsilon(1e-12));
  }
}

TEST_CASE("sampled nodes reproduce the tree masses and stay near the ray") {
  Srw f;
  EscapeConstruction c = build_escape_construction(f.s, f.chi, f.x, 0.6);
  MeasureTree t = build_measure_tree(c, 3);
  auto samples = sample_support(c, 3, 12, 99);
  REQUIRE(samples.size() == 12);
  for (const SupportSample& smp : samples) {
    CHECK(is_admissible(f.s, smp.word));
    CHECK(node_log_mass(c, smp.blocks) == smp.log_mass);
    bool found = false;
    for (const NodeClass& cl : t.levels.back().classes) found = found || cl.log_mass == smp.log_mass;
    CHECK(found);
    TrajectoryProfile tr = classify_trajectory(f.s, f.chi, smp.word, f.x);
    CHECK(tr.max_deviation <= c.deviation_bound);
    CHECK(tr.overlap.back() >= 3);
  }
  // Same seed, same samples.
  auto again = sample_support_words(c, 3, 12, 99);
  for (std::size_t i = 0; i < samples.size(); ++i) CHECK(again[i] == samples[i].word);
}

TEST_CASE("non-full shift with a depth-2 potential") {
  SftSystem s = fixtures::f2_constrained_system();
  Projection chi = fixtures::f2_srw_projection();
  BoundaryPoint x = BoundaryPoint::parse("", "e1");
  EscapeConstruction c = build_escape_construction(s, chi, x, 0.4);
  CHECK(c.margin > 0);
  MeasureTree t = build_measure_tree(c, 3);
  for (const TreeLevel& l : t.levels) CHECK(std::abs(l.total_mass - 1) <= 1e-10);
  for (const SupportSample& smp : sample_support(c, 3, 10, 5)) {
    CHECK(is_admissible(s, smp.word));
    CHECK(smp.birkhoff == doctest::Approx(birkhoff_sup(s, smp.word)).epsilon(1e-9));
  }
}

TEST_CASE("escape above the exponent is inconclusive") {
  Srw f;
  EscapeOptions o;
  o.length_cap = 12;
  CHECK_THROWS_AS(build_escape_construction(f.s, f.chi, f.x, 1.5, o), InconclusiveError);
}

TEST_CASE("covering sums bracket the exponent") {
  Srw f;
  CoveringReport hi = covering_sum(f.s, f.chi, f.x, 2, 1.5, 20, 8, 20);
  CoveringReport lo = covering_sum(f.s, f.chi, f.x, 2, 0.8, 20, 8, 20);
  CHECK(hi.slope < 0);
  CHECK(lo.slope > 0);
  // Oracle: refit the slope from the reported level sums.
  std::vector<double> m, y;
  for (int k = 8; k <= 20; ++k)
    if (hi.level_sums[k] > 0) {
      m.push_back(k);
      y.push_back(std::log(hi.level_sums[k]));
    }
  CHECK(hi.slope == doctest::Approx(oracle::ols_slope(m, y)).epsilon(1e-9));
  for (int k = 1; k <= 20; ++k) CHECK(hi.partial_sums[k] == doctest::Approx(hi.partial_sums[k - 1] + hi.level_sums[k]));
}

TEST_CASE("trajectory classification") {
  Srw f;
  Word w = f.s.parse_word("a a b B a");
  TrajectoryProfile t = classify_trajectory(f.s, f.chi, w, f.x);
  CHECK(t.length == std::vector<int>{1, 2, 3, 2, 3});
  CHECK(t.overlap == std::vector<int>{1, 2, 2, 2, 3});
  CHECK(t.max_deviation == 1);
}
