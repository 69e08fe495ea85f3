#include "arvol/flags.hpp"

#include <sstream>
#include <stdexcept>

namespace arvol {

std::string to_string(FlagVariant v) { return v == FlagVariant::Full ? "full" : "restricted"; }

FlagVariant parse_flag_variant(const std::string& s) {
    if (s == "full") return FlagVariant::Full;
    if (s == "restricted") return FlagVariant::Restricted;
    throw std::invalid_argument("unknown flag variant '" + s + "'");
}

FlagReport validate_good_flag(const FlagSpec& flag) {
    FlagReport r;
    bool prime = flag.p > 1 && is_prime(flag.p);
    bool reduces = prime && !mpz_divisible_p(flag.center.get_den_mpz_t(), flag.p.get_mpz_t());
    std::string p = flag.p.get_str();
    r.conditions.push_back({"p_prime", prime, prime ? p + " is prime" : p + " is not prime"});
    r.conditions.push_back({"center_reduces", reduces,
                            reduces ? "denominator of the center is a unit at " + p
                                    : "denominator of the center is divisible by " + p});
    // The closure of a rational point is a copy of Spec Z, so R = Z and the prime ideal is pZ.
    r.conditions.push_back({"local_ring_dvr", prime, "Z localized at " + p});
    r.conditions.push_back({"residue_field_prime", prime, "Z/" + p + " is the prime field"});
    r.conditions.push_back({"fibre_is_flag_point", reduces, "fibre of the closure over " + p});
    r.conditions.push_back({"point_regular_rational", reduces, "closed point of Spec Z over " + p});
    r.good = prime && reduces;
    return r;
}

void require_good_flag(const FlagSpec& flag) {
    FlagReport r = validate_good_flag(flag);
    if (r.good) return;
    for (const auto& c : r.conditions)
        if (!c.pass) throw std::invalid_argument("flag is not good: " + c.name + " (" + c.detail + ")");
}

namespace {

// Value at alpha; poly becomes the synthetic quotient by (t - alpha).
Rational divide_out(RatVector& poly, const Rational& alpha) {
    if (poly.empty()) return 0;
    size_t n = poly.size();
    RatVector q(n - 1);
    Rational carry = poly[n - 1];
    for (size_t k = n - 1; k > 0; --k) {
        q[k - 1] = carry;
        carry = poly[k - 1] + carry * alpha;
    }
    poly = std::move(q);
    return carry;
}

bool all_zero(const RatVector& v) {
    for (const auto& q : v)
        if (q != 0) return false;
    return true;
}

}  // namespace

long restricted_valuation(const FlagSpec& flag, const Rational& value) {
    if (value == 0) throw std::invalid_argument("valuation of zero");
    return ord_p(value, flag.p);
}

ValuationVector valuation(const FlagSpec& flag, const RatVector& poly) {
    if (all_zero(poly)) throw std::invalid_argument("valuation of the zero polynomial");
    RatVector work = poly;
    long order = 0;
    for (;;) {
        Rational value = divide_out(work, flag.center);
        if (value != 0) {
            if (flag.variant == FlagVariant::Restricted) return {ord_p(value, flag.p)};
            return {order, ord_p(value, flag.p)};
        }
        ++order;
    }
}

ValuationVector valuation(const FlagSpec& flag, const IntVector& poly) {
    RatVector q;
    for (const auto& c : poly) q.emplace_back(c);
    return valuation(flag, q);
}

ValuationCloud valuation_cloud(const std::vector<IntVector>& sections, const FlagSpec& flag, long m) {
    ValuationCloud cloud;
    cloud.m = m;
    for (const auto& s : sections) {
        bool zero = true;
        for (const auto& c : s)
            if (c != 0) zero = false;
        if (zero) continue;
        ++cloud.multiplicity[valuation(flag, s)];
    }
    return cloud;
}

std::string cloud_to_csv(const std::vector<ValuationCloud>& clouds) {
    std::ostringstream out;
    size_t width = 0;
    for (const auto& c : clouds)
        if (!c.multiplicity.empty()) width = c.multiplicity.begin()->first.size();
    out << "m";
    for (size_t i = 0; i < width; ++i) out << ",w" << (i + 1);
    out << ",multiplicity\n";
    for (const auto& c : clouds)
        for (const auto& [w, k] : c.multiplicity) {
            out << c.m;
            for (long x : w) out << "," << x;
            out << "," << k << "\n";
        }
    return out.str();
}

}  // namespace arvol
