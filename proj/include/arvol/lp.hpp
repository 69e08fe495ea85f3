#pragma once

#include "arvol/numeric.hpp"

#include <vector>

namespace arvol {

struct LpResult {
    enum Status { Optimal, Infeasible, Unbounded } status = Infeasible;
    Rational value;
    RatVector x;
};

// Exact two-phase simplex with Bland's rule: minimize c.x subject to A x = b, x >= 0.
LpResult minimize_standard(const std::vector<RatVector>& A, const RatVector& b, const RatVector& c);

}  // namespace arvol
