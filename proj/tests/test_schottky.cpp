#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "skewdim/errors.hpp"
#include "skewdim/schottky.hpp"

using namespace skewdim;

namespace {

SchottkyGroup sym3() { return build_schottky(symmetric_config(3, 20.0)); }

std::map<std::string, GroupElement> sym3_images() {
  return {{"a1", GroupElement::parse("e1")}, {"a2", GroupElement::parse("e2")}, {"a3", GroupElement{}},
          {"A1", GroupElement::parse("E1")}, {"A2", GroupElement::parse("E2")}, {"A3", GroupElement{}}};
}

oracle::Mat product(const SchottkyGroup& g, const Word& w) {
  oracle::Mat m{1.0, 0.0, 0.0, 1.0};
  for (Symbol s : w) m = oracle::mul(m, oracle::to_mat(g.generator(s)));
  return m;
}

}  // namespace

TEST_CASE("symmetric configuration geometry") {
  SchottkyConfig cfg = symmetric_config(3, 20.0);
  REQUIRE(cfg.circles.size() == 6);
  const double phi = 20.0 * std::numbers::pi / 180.0;
  for (const Circle& c : cfg.circles) {
    // Orthogonality to the unit circle, and an arc of half-width phi seen from the origin.
    CHECK(std::norm(c.center) == doctest::Approx(1 + c.radius * c.radius).epsilon(1e-14));
    CHECK(c.radius == doctest::Approx(std::tan(phi)).epsilon(1e-14));
  }
  SchottkyGroup g = build_schottky(cfg);
  CHECK(g.name(0) == "a1");
  CHECK(g.name(3) == "A1");
  CHECK(g.partner(0) == 3);
  for (Symbol s = 0; s < 6; ++s) CHECK(g.base_arc(s).length() == doctest::Approx(2 * phi).epsilon(1e-12));
}

TEST_CASE("generators pair their circles") {
  SchottkyGroup g = sym3();
  CHECK(generator_pair_defect(g) <= 1e-10);
  for (Symbol s = 0; s < 6; ++s) {
    const Mobius& m = g.generator(s);
    CHECK(std::abs(m.det() - Complex(1.0)) <= 1e-12);
    // The generator of s carries the circle of its partner onto the circle of s.
    const Circle& from = g.circle(g.partner(s));
    const Circle& to = g.circle(s);
    for (int k = 0; k < 16; ++k) {
      Complex z = from.center + from.radius * std::polar(1.0, 2 * std::numbers::pi * k / 16);
      // Oracle for the pairing: the image lies on the partner circle.
      CHECK(std::abs(std::abs(m(z) - to.center) - to.radius) <= 1e-9);
    }
    CHECK(std::abs(m(0.0)) < 1.0);
  }
}

TEST_CASE("word matrices and distances by two routes") {
  SchottkyGroup g = sym3();
  for (const Word& w : random_reduced_words(g, 300, 18, 4)) {
    CHECK(g.is_reduced(w));
    Mobius m = g.word_matrix(w);
    oracle::Mat ref = product(g, w);
    CHECK(std::abs(m.a - ref[0]) <= 1e-9 * std::abs(ref[0]));
    const double d = displacement(m);
    // acosh(|M|^2 / 2) against 2 atanh |g(0)|.
    CHECK(d == doctest::Approx(oracle::distance_from_origin(ref)).epsilon(1e-9));
    CHECK(d == doctest::Approx(displacement(g.word_matrix(g.inverse_word(w)))).epsilon(1e-9));
    CHECK(orbital_birkhoff(g, w) == doctest::Approx(d).epsilon(1e-12));
    // The disk-coordinate route runs out of precision once |w(0)| rounds to 1.
    if (d < 25) CHECK(d == doctest::Approx(hyperbolic_distance(0.0, m(0.0))).epsilon(1e-6));
  }
  CHECK_THROWS_AS(hyperbolic_distance(0.0, Complex(1.5, 0)), InputError);
}

TEST_CASE("cylinder arcs nest and the geometric potential is a derivative") {
  SchottkyGroup g = sym3();
  for (const Word& w : random_reduced_words(g, 100, 10, 8)) {
    Arc a = cylinder_arc(g, w);
    Complex z = representative_point(g, w);
    CHECK(std::abs(std::abs(z) - 1) <= 1e-12);
    CHECK(a.contains(z, 1e-9));
    // |(w^{-1})'(w e)| = 1 / |w'(e)| = |c e + d|^2 for the base point e with w e = z.
    oracle::Mat fwd = product(g, w);
    const Arc& base = g.base_arc(g.partner(w.back()));
    Complex e = std::abs((fwd[0] * base.start + fwd[1]) / (fwd[2] * base.start + fwd[3]) - z) <
                        std::abs((fwd[0] * base.end + fwd[1]) / (fwd[2] * base.end + fwd[3]) - z)
                    ? base.start
                    : base.end;
    CHECK(geometric_birkhoff(g, w) == doctest::Approx(std::log(std::norm(fwd[2] * e + fwd[3]))).epsilon(1e-10));
    // Evaluating at z directly cancels catastrophically for long words, so only short ones.
    if (w.size() <= 5)
      CHECK(geometric_birkhoff(g, w) == doctest::Approx(log_inverse_derivative(g, w, z)).epsilon(1e-8));
    if (w.size() < 10) {
      Symbol next = static_cast<Symbol>((g.partner(w.back()) + 1) % g.size());
      Word longer = w;
      longer.push_back(next);
      Arc b = cylinder_arc(g, longer);
      CHECK(a.contains(b.start, 1e-9));
      CHECK(a.contains(b.end, 1e-9));
      CHECK(b.length() < a.length());
    }
  }
}

TEST_CASE("configuration errors") {
  SchottkyConfig cfg = symmetric_config(3, 20.0);
  SchottkyConfig odd = cfg;
  odd.circles.pop_back();
  CHECK_THROWS_AS(build_schottky(odd), InputError);
  SchottkyConfig tilted = cfg;
  tilted.circles[0].radius *= 1.01;
  CHECK_THROWS_AS(build_schottky(tilted), GeometryError);
  // Half-width 40 degrees on six circles makes neighbours overlap.
  CHECK_THROWS_AS(build_schottky(symmetric_config(3, 40.0)), GeometryError);
  SchottkyConfig bad_pair = cfg;
  bad_pair.pairing[0].second = bad_pair.pairing[0].first;
  CHECK_THROWS_AS(build_schottky(bad_pair), InputError);
}

TEST_CASE("coding system and projection") {
  SchottkyGroup g = sym3();
  SftSystem s = coding_system(g, 2);
  for (Symbol a = 0; a < 6; ++a)
    for (Symbol b = 0; b < 6; ++b) CHECK(s.allowed(a, b) == (b != g.partner(a)));
  CHECK(s.min_value() > 0);
  Projection chi = schottky_projection(g, 2, sym3_images());
  CHECK(chi.rank() == 2);
  auto broken = sym3_images();
  broken["A1"] = GroupElement::parse("e1");
  CHECK_THROWS_AS(schottky_projection(g, 2, broken), InputError);
  CHECK_THROWS_AS(schottky_projection(g, 3, sym3_images()), InputError);
  Involution inv = coding_involution(g);
  Word w = g.parse_word("a1 a2 A3");
  CHECK(inv.apply(w) == g.inverse_word(w));
}

TEST_CASE("histogram merges are exact and order independent") {
  oracle::Rng rng(31);
  std::vector<double> v(2000);
  for (double& x : v) x = 10 * rng.uniform();
  LevelHistogram all, left, right, a, b;
  for (std::size_t i = 0; i < v.size(); ++i) {
    all.add(v[i], 1e-3);
    (i % 3 ? left : right).add(v[i], 1e-3);
  }
  a = left;
  a.merge(right);
  b = right;
  b.merge(left);
  CHECK(a.count == b.count);
  CHECK(a.offset_sum == b.offset_sum);
  CHECK(a.count == all.count);
  CHECK(a.laplace(0.7, 1e-3) == all.laplace(0.7, 1e-3));
  double exact = 0;
  for (double x : v) exact += std::exp(-0.7 * x);
  CHECK(all.laplace(0.7, 1e-3) == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("orbit enumeration against a direct product walk") {
  SchottkyGroup g = sym3();
  Projection chi = schottky_projection(g, 2, sym3_images());
  OrbitEnumeration e = enumerate_orbits(g, 6);
  auto ref = oracle::schottky_level_sums(g, 0.6, 6);
  auto mine = e.level_sums(0.6);
  for (int m = 1; m <= 6; ++m) {
    CHECK(e.words[m] == static_cast<std::uint64_t>(6 * std::pow(5, m - 1)));
    CHECK(mine[m] == doctest::Approx(ref[m]).epsilon(1e-6));
  }
  CHECK(reduced_word_count(g, 6) == doctest::Approx(1 + 6 * (std::pow(5, 6) - 1) / 4));

  OrbitEnumeration k = enumerate_orbits(g, 6, &chi);
  auto kref = oracle::schottky_level_sums(g, 0.6, 6, &chi);
  auto kmine = k.level_sums(0.6);
  for (int m = 1; m <= 6; ++m) CHECK(kmine[m] == doctest::Approx(kref[m]).epsilon(1e-6));

  EnumerationOptions two;
  two.threads = 2;
  OrbitEnumeration k2 = enumerate_orbits(g, 6, &chi, two);
  for (int m = 0; m <= 6; ++m) {
    CHECK(k2.orbital[m].count == k.orbital[m].count);
    CHECK(k2.orbital[m].offset_sum == k.orbital[m].offset_sum);
  }
}

TEST_CASE("kernel certificate") {
  SchottkyGroup g = sym3();
  Projection chi = schottky_projection(g, 2, sym3_images());
  KernelCertificate c = kernel_certificate(g, chi, g.parse_word("a3"));
  CHECK(c.valid);
  SftSystem s = coding_system(g, 2);
  for (const Word& w : c.words) {
    CHECK(g.is_reduced(w));
    CHECK(project(s, chi, w).is_identity());
  }
  KernelCertificate bad = kernel_certificate(g, chi, g.parse_word("a1"));
  CHECK_FALSE(bad.valid);
}

TEST_CASE("small-n exponents agree across potentials") {
  SchottkyGroup g = sym3();
  SchottkyExponent e = delta_G_estimate(g, 9);
  CHECK(e.n == 9);
  CHECK(std::abs(e.orbital.value - e.geometric.value) <= 0.02);
  CHECK(e.orbital.value > 0.3);
  CHECK(e.orbital.value < 1.0);
}
