#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace arvol {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

// Accepts "p", "-p", "p/q"; the result is canonicalized.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

double to_double(const Rational& q);
// Natural log of a positive integer, accurate for arbitrarily large values.
double log_of(const Integer& n);
double log_of(const Rational& q);

Integer ceil_of(const Rational& q);
Integer floor_of(const Rational& q);
Integer power(const Integer& base, unsigned long e);
Rational power(const Rational& base, unsigned long e);

// Exponent of p in a nonzero rational.
long ord_p(const Rational& q, const Integer& p);
long ord_p(const Integer& n, const Integer& p);
bool is_prime(const Integer& p);

// A real number of the form q + log(r) with q, r rational and r > 0.
// Archimedean scales such as lambda, log 2, log 6 or lambda + log 2 all live here,
// which keeps every strict/non-strict threshold decidable.
struct LogScale {
    Rational linear{0};
    Rational log_arg{1};

    static LogScale of(const Rational& q);
    static LogScale log(const Rational& r);
    static LogScale parse(const std::string& text);

    bool is_rational() const { return log_arg == 1; }
    double value() const;
    std::string str() const;

    LogScale operator+(const LogScale& o) const;
    LogScale operator-(const LogScale& o) const;
    LogScale operator-() const;
    LogScale times(long n) const;
    LogScale times(const Rational& n) const;  // requires is_rational() unless n is integral
    bool operator==(const LogScale& o) const { return linear == o.linear && log_arg == o.log_arg; }
    bool operator!=(const LogScale& o) const { return !(*this == o); }
};

// Sign of x - exp(s), decided exactly.
int compare_with_exp(const Rational& x, const LogScale& s);

// Largest integer M >= 0 with M < exp(s) (strict) or M <= exp(s).
Integer floor_exp(const LogScale& s, bool strict);

// Outward-rounded double enclosure of exp(s).
std::pair<double, double> exp_enclosure(const LogScale& s);

}  // namespace arvol
