#pragma once

#include <vector>

#include "pid/errors.hpp"

namespace pid::lp {

enum class Rel { Le, Ge, Eq };

struct Constraint {
    std::vector<double> coeffs;
    Rel rel;
    double rhs;
};

struct Solution {
    std::vector<double> x;
    double objective;
};

// Minimizes c.x subject to the constraints and x >= 0, by a dense two-phase
// primal simplex with Bland's rule. Intended for the small, well-scaled
// programs this library generates (a few dozen variables). Throws LpFailure
// when the program is infeasible or unbounded.
Solution solve_min(const std::vector<double>& c, const std::vector<Constraint>& constraints);

}  // namespace pid::lp
