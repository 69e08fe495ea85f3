#pragma once

#include <optional>
#include <string>

namespace arvol {

// Constants consumed by a check; unset entries serialize as null.
struct ConstantsUsed {
    std::optional<double> I, delta_upper, C, C_prime, C_tilde, S_slack, S_prime_slack;
    bool operator==(const ConstantsUsed&) const = default;
};

// One checked inequality at level m. Counting checks read "lhs <= rhs + bound";
// two-sided checks read "|lhs - rhs| <= bound". slack >= 0 exactly when satisfied.
struct DiscrepancyReport {
    long m = 0;
    double lhs = 0, rhs = 0, bound = 0, slack = 0;
    bool satisfied = false;
    ConstantsUsed constants_used;
    bool operator==(const DiscrepancyReport&) const = default;
};

// lhs <= rhs + bound; `exact` carries the exact verdict when the doubles could mislead.
DiscrepancyReport one_sided(long m, double lhs, double rhs, double bound, std::optional<bool> exact = std::nullopt);
DiscrepancyReport two_sided(long m, double lhs, double rhs, double bound);

}  // namespace arvol
