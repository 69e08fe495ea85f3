#include "arvol/report.hpp"

#include <cmath>
#include <limits>

namespace arvol {

DiscrepancyReport one_sided(long m, double lhs, double rhs, double bound, std::optional<bool> exact) {
    DiscrepancyReport r;
    r.m = m;
    r.lhs = lhs;
    r.rhs = rhs;
    r.bound = bound;
    r.slack = rhs + bound - lhs;
    r.satisfied = exact ? *exact : r.slack >= 0;
    // Keep the sign of slack consistent with the exact verdict when rounding disagrees.
    if (r.satisfied && r.slack < 0) r.slack = 0;
    if (!r.satisfied && r.slack >= 0) r.slack = -std::numeric_limits<double>::denorm_min();
    return r;
}

DiscrepancyReport two_sided(long m, double lhs, double rhs, double bound) {
    DiscrepancyReport r;
    r.m = m;
    r.lhs = lhs;
    r.rhs = rhs;
    r.bound = bound;
    r.slack = bound - std::fabs(lhs - rhs);
    r.satisfied = r.slack >= 0;
    return r;
}

}  // namespace arvol
