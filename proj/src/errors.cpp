#include "skewdim/errors.hpp"

namespace skewdim {

InputError::InputError(const std::string& where, const std::string& what)
    : Error(where.empty() ? what : where + ": " + what), where_(where), detail_(what) {}

SymmetryViolation::SymmetryViolation(const std::string& witness, double gap)
    : Error("symmetry violated at " + witness + " (gap " + std::to_string(gap) + ")"),
      witness_(witness),
      gap_(gap) {}

}  // namespace skewdim
