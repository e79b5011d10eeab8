#pragma once

#include "skewdim/extension.hpp"
#include "skewdim/symbolic.hpp"

namespace skewdim::fixtures {

// Full shift on {a, A, b, B} with u = 1, projected letter-by-letter onto F2 = <e1, e2>.
SftSystem f2_srw_system();
Projection f2_srw_projection();
// a <-> A, b <-> B with reversal.
Involution f2_srw_involution();

// Same alphabet, immediate repeats of b and B forbidden, and a depth-2 potential.
SftSystem f2_constrained_system();

}  // namespace skewdim::fixtures
