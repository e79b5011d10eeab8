#include "skewdim/fixtures.hpp"

namespace skewdim::fixtures {

namespace {
std::vector<std::string> f2_alphabet() { return {"a", "A", "b", "B"}; }
}  // namespace

SftSystem f2_srw_system() {
  return SftSystem(f2_alphabet(), std::vector<std::vector<bool>>(4, std::vector<bool>(4, true)),
                   PotentialSpec::constant(1.0));
}

Projection f2_srw_projection() {
  return Projection(2, {GroupElement::parse("e1"), GroupElement::parse("E1"), GroupElement::parse("e2"),
                        GroupElement::parse("E2")});
}

Involution f2_srw_involution() { return Involution({1, 0, 3, 2}); }

SftSystem f2_constrained_system() {
  std::vector<std::vector<bool>> allowed(4, std::vector<bool>(4, true));
  allowed[2][2] = false;  // bb
  allowed[3][3] = false;  // BB
  PotentialSpec pot;
  pot.depth = 2;
  for (Symbol x = 0; x < 4; ++x)
    for (Symbol y = 0; y < 4; ++y) {
      if (!allowed[x][y]) continue;
      pot.table[{x, y}] = 0.7 + 0.15 * x + 0.1 * y + (x == y ? 0.25 : 0.0);
    }
  return SftSystem(f2_alphabet(), allowed, pot);
}

}  // namespace skewdim::fixtures
