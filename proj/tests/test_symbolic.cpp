#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "skewdim/errors.hpp"
#include "skewdim/fixtures.hpp"
#include "skewdim/symbolic.hpp"

using namespace skewdim;

namespace {

std::vector<int> ints(const Word& w) { return {w.begin(), w.end()}; }
Word word(const std::vector<int>& w) { return {w.begin(), w.end()}; }

}  // namespace

TEST_CASE("fixture shapes") {
  SftSystem srw = fixtures::f2_srw_system();
  CHECK(srw.size() == 4);
  CHECK(srw.depth() == 1);
  CHECK(srw.sup_norm() == 1.0);
  CHECK(srw.distortion() == 0.0);
  SftSystem c = fixtures::f2_constrained_system();
  CHECK(c.depth() == 2);
  CHECK_FALSE(c.allowed(c.symbol("b"), c.symbol("b")));
  CHECK(c.allowed(c.symbol("a"), c.symbol("a")));
}

TEST_CASE("admissible words match the oracle enumeration") {
  SftSystem s = fixtures::f2_constrained_system();
  Projection chi = fixtures::f2_srw_projection();
  oracle::Shift sh = oracle::from_system(s, chi);
  for (int n = 1; n <= 6; ++n) {
    auto mine = enumerate_words(s, n);
    auto ref = oracle::admissible_words(sh, n);
    REQUIRE(mine.size() == ref.size());
    for (std::size_t i = 0; i < mine.size(); ++i) CHECK(ints(mine[i]) == ref[i]);
  }
  // Endpoint filters.
  for (const Word& w : enumerate_words(s, 4, Symbol{1}, Symbol{2})) {
    CHECK(w.front() == 1);
    CHECK(w.back() == 2);
  }
}

TEST_CASE("cylinder supremum matches brute-force extension") {
  SftSystem s = fixtures::f2_constrained_system();
  Projection chi = fixtures::f2_srw_projection();
  oracle::Shift sh = oracle::from_system(s, chi);
  for (int n = 1; n <= 5; ++n)
    for (const auto& w : oracle::admissible_words(sh, n))
      CHECK(birkhoff_sup(s, word(w)) == doctest::Approx(oracle::sup_birkhoff(sh, w)).epsilon(1e-14));
}

TEST_CASE("Birkhoff sums: ordering and distortion on random words") {
  SftSystem s = fixtures::f2_constrained_system();
  Projection chi = fixtures::f2_srw_projection();
  oracle::Shift sh = oracle::from_system(s, chi);
  oracle::Rng rng(3);
  for (int trial = 0; trial < 400; ++trial) {
    auto w = oracle::random_admissible(rng, sh, 1 + rng.below(30));
    Word ww = word(w);
    double sup = birkhoff_sup(s, ww), full = full_sum(s, ww);
    CHECK(sup >= full);
    // full_sum drops the depth - 1 windows that run past the end of the word.
    CHECK(sup - full <= (s.depth() - 1) * s.sup_norm() + 1e-12);
    CHECK(sup - full >= (s.depth() - 1) * s.min_value() - 1e-12);
    CHECK(sup <= s.sup_norm() * w.size() + 1e-12);
    CHECK(sup >= s.min_value() * w.size() - 1e-12);
    // Concatenation: S(uv) <= S(u) + S(v).
    auto cut = rng.below(static_cast<int>(w.size()) + 1);
    Word u(ww.begin(), ww.begin() + cut), v(ww.begin() + cut, ww.end());
    CHECK(sup <= birkhoff_sup(s, u) + birkhoff_sup(s, v) + 1e-12);
    auto [lo, hi] = cylinder_diameter_bracket(s, ww);
    CHECK(lo <= hi);
  }
}

TEST_CASE("constant potential sums are lengths") {
  SftSystem s = fixtures::f2_srw_system();
  oracle::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Word w(1 + rng.below(20));
    for (auto& x : w) x = static_cast<Symbol>(rng.below(4));
    CHECK(birkhoff_sup(s, w) == static_cast<double>(w.size()));
  }
}

TEST_CASE("parse and format") {
  SftSystem s = fixtures::f2_srw_system();
  Word w = s.parse_word("a b A B");
  CHECK(w.size() == 4);
  CHECK(s.parse_word(s.format(w)) == w);
  CHECK_THROWS_AS(s.parse_word("a z"), InputError);
  CHECK(is_admissible(s, w));
  SftSystem c = fixtures::f2_constrained_system();
  CHECK_FALSE(is_admissible(c, c.parse_word("a b b")));
}

TEST_CASE("prefix relation") {
  Word a{0, 1, 2}, b{0, 1}, c{0, 2};
  CHECK(prefix_related(a, b));
  CHECK(prefix_related(b, a));
  CHECK_FALSE(prefix_related(a, c));
  CHECK(prefix_related(a, a));
}

TEST_CASE("construction rejects bad systems") {
  std::vector<std::string> ab{"x", "y"};
  // Not transitive: y is never left.
  CHECK_THROWS_AS(SftSystem(ab, {{true, true}, {false, true}}, PotentialSpec::constant(1.0)), InputError);
  // Non-positive potential.
  CHECK_THROWS_AS(SftSystem(ab, {{true, true}, {true, true}}, PotentialSpec::constant(0.0)), InputError);
  // Missing window.
  PotentialSpec p;
  p.depth = 2;
  p.table[{0, 0}] = 1;
  p.table[{0, 1}] = 1;
  p.table[{1, 0}] = 1;
  CHECK_THROWS_AS(SftSystem(ab, {{true, true}, {true, true}}, p), InputError);
  // Duplicate names.
  CHECK_THROWS_AS(SftSystem({"x", "x"}, {{true, true}, {true, true}}, PotentialSpec::constant(1.0)), InputError);
}

TEST_CASE("scaling the potential scales the sums") {
  SftSystem c = fixtures::f2_constrained_system();
  SftSystem c2 = c.scaled(2.5);
  Word w = c.parse_word("a b a B A");
  CHECK(birkhoff_sup(c2, w) == doctest::Approx(2.5 * birkhoff_sup(c, w)).epsilon(1e-14));
  CHECK(c2.distortion() == doctest::Approx(2.5 * c.distortion()).epsilon(1e-14));
}
