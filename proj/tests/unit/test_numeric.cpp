#include "arvol/numeric.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace arvol;

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-4") == Rational(-4));
    CHECK(format_rational(Rational(6, 4)) == "3/2");
    CHECK(format_rational(Rational(-5)) == "-5");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("x"));
}

TEST_CASE("p-adic orders") {
    CHECK(ord_p(Integer(24), Integer(2)) == 3);
    CHECK(ord_p(Rational(9, 8), Integer(2)) == -3);
    CHECK(ord_p(Rational(9, 8), Integer(3)) == 2);
    CHECK(is_prime(Integer(101)));
    CHECK_FALSE(is_prime(Integer(91)));
}

TEST_CASE("log scales compare exactly with exponentials") {
    CHECK(compare_with_exp(Rational(2), LogScale::log(2)) == 0);
    CHECK(compare_with_exp(Rational(2), LogScale::of(1)) < 0);   // 2 < e
    CHECK(compare_with_exp(Rational(3), LogScale::of(1)) > 0);   // 3 > e
    CHECK(floor_exp(LogScale::log(2), true) == 1);
    CHECK(floor_exp(LogScale::log(2), false) == 2);
    CHECK(floor_exp(LogScale::of(1), true) == 2);
    CHECK(floor_exp(LogScale::of(40), true) == Integer("235385266837019985"));

    LogScale s = LogScale::parse("1/2+log(3)");
    CHECK(s.linear == Rational(1, 2));
    CHECK(s.log_arg == 3);
    CHECK(s.str() == "1/2+log(3)");
    CHECK(LogScale::parse(s.str()) == s);
    CHECK(LogScale::parse("-log(2)") == -LogScale::log(2));
    CHECK(s.times(2) == LogScale{1, 9});
    CHECK_THROWS(s.times(Rational(1, 2)));
    CHECK_THROWS(LogScale::parse("log(-1)"));
}

TEST_CASE("floor_exp agrees with floating point away from integers") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> num(0, 300), den(1, 12);
    for (int i = 0; i < 300; ++i) {
        Rational q(num(rng), den(rng));
        q.canonicalize();
        if (q > 30) continue;  // beyond this the double itself cannot resolve the floor
        double e = std::exp(to_double(q));
        if (std::fabs(e - std::round(e)) < 1e-6) continue;
        CHECK(floor_exp(LogScale::of(q), true).get_d() == std::floor(e));
    }
}

TEST_CASE("exp enclosure brackets the value") {
    auto [lo, hi] = exp_enclosure(LogScale::parse("1+log(2)"));
    CHECK(lo <= 2 * std::exp(1.0));
    CHECK(hi >= 2 * std::exp(1.0));
    CHECK(hi - lo < 1e-12);
}
