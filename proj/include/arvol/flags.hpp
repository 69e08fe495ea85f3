#pragma once

#include "arvol/numeric.hpp"

#include <map>
#include <string>
#include <vector>

namespace arvol {

// Full: X contains the closure of t = center, which contains its fibre over p.
// Restricted: the length-one flag on that closure.
enum class FlagVariant { Full, Restricted };
std::string to_string(FlagVariant v);
FlagVariant parse_flag_variant(const std::string& s);

struct FlagSpec {
    Rational center{0};
    Integer p{2};
    FlagVariant variant = FlagVariant::Full;
    bool operator==(const FlagSpec&) const = default;
};

struct FlagCondition {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct FlagReport {
    std::vector<FlagCondition> conditions;
    bool good = false;
};

FlagReport validate_good_flag(const FlagSpec& flag);
// Throws std::invalid_argument with the failing condition unless the flag is good.
void require_good_flag(const FlagSpec& flag);

using ValuationVector = std::vector<long>;

// Full variant: (order at the center, p-adic order of the leading Taylor coefficient).
// Restricted variant: p-adic order of that leading coefficient alone.
ValuationVector valuation(const FlagSpec& flag, const RatVector& poly);
ValuationVector valuation(const FlagSpec& flag, const IntVector& poly);
long restricted_valuation(const FlagSpec& flag, const Rational& value);

struct ValuationCloud {
    long m = 0;
    std::map<ValuationVector, long> multiplicity;
    size_t distinct() const { return multiplicity.size(); }
};

// Zero sections are skipped.
ValuationCloud valuation_cloud(const std::vector<IntVector>& sections, const FlagSpec& flag, long m);
// Rows m,w1[,w2],multiplicity.
std::string cloud_to_csv(const std::vector<ValuationCloud>& clouds);

}  // namespace arvol
