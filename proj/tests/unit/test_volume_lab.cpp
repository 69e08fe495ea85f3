#include "arvol/volume_lab.hpp"

#include "doctest.h"

#include <cmath>

using namespace arvol;

namespace {

const uint64_t kCap = 10000000;

PairSpec toy1() {
    PairSpec s;
    s.lambda = LogScale::of(1);
    s.E = {{Rational(0), Rational(1, 4)}};
    return s;
}

const FlagSpec kFlag{Rational(0), Integer(2), FlagVariant::Full};

}  // namespace

TEST_CASE("closed-form constants") {
    auto c = evaluate_constants(toy1(), 10, 2, Rational(1, 10));
    CHECK(c.I == 2.0);
    CHECK(c.I_witness == 1);
    CHECK(c.delta_argmin == 0);
    CHECK(c.delta_upper == doctest::Approx(1.0));
    CHECK(constant_C_prime(2, 3) == doctest::Approx(6 * std::log(4.0)));
    // The m-dependent part of C decays like log m / m.
    double limit = 2 * std::log(4.0) * 1.0;
    double prev = HUGE_VAL;
    for (long m : {10L, 100L, 1000L, 100000L}) {
        double v = constant_C(2, 1, 2, m) - limit;
        CHECK(v > 0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-3);
    CHECK(constant_C_tilde(1, 0, 1, 2, 0) == 0);
    CHECK_THROWS(evaluate_constants(toy1(), 10, 4, Rational(1, 10)));
    CHECK_THROWS(evaluate_constants(toy1(), 10, 2, Rational(0)));
    CHECK(delta_test_family().size() == 9);
}

TEST_CASE("series fitting") {
    std::vector<std::pair<long, double>> raw;
    for (long m = 8; m <= 40; ++m) raw.emplace_back(m, 3.0 - 2.0 / static_cast<double>(m));
    auto s = fit_series(raw);
    CHECK(s.extrapolated == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s.fit_residual < 1e-12);
    CHECK(intercept_stderr(raw) < 1e-10);
    auto slope = fit_slope({{1, 1.0}, {2, 3.0}, {3, 5.0}});
    CHECK(slope.slope == doctest::Approx(2.0));
    CHECK(slope.stderr_ == doctest::Approx(0.0));
    CHECK(fit_series({}).extrapolated == 0);
    CHECK(fit_series({{5, 1.5}}).extrapolated == 1.5);
}

TEST_CASE("windows and caps") {
    CHECK_THROWS(Window{0, 3}.check());
    CHECK_THROWS(Window{5, 3}.check());
    CHECK_NOTHROW(Window{3, 3}.check());
    CHECK(default_cap() > 0);
}

TEST_CASE("restricted intersection oracle") {
    CHECK(restricted_intersection_oracle(toy1()) == doctest::Approx(1.0));
    auto flat = toy1();
    flat.lambda = LogScale();
    CHECK(restricted_intersection_oracle(flat) == 0);
    PairSpec two;
    two.degree = 2;
    two.lambda = LogScale::of(Rational(1, 2));
    two.E = {{Rational(0), Rational(1, 2)}};
    CHECK(restricted_intersection_oracle(two) == doctest::Approx(1.0));
    auto off = toy1();
    off.E = {{Rational(1), Rational(1, 4)}};
    CHECK_THROWS_WITH(restricted_intersection_oracle(off), doctest::Contains("outside supported family"));
    auto full = toy1();
    full.E = {{Rational(0), Rational(1)}};
    CHECK_THROWS_WITH(restricted_intersection_oracle(full), doctest::Contains("not Y-big"));
}

TEST_CASE("concavity check") {
    std::vector<std::pair<Rational, double>> affine;
    for (int k = 0; k < 5; ++k) affine.emplace_back(Rational(k, 4), std::pow(1.0 + k / 4.0, 2));
    auto a = concavity_check(affine);
    CHECK(a.concave);
    CHECK(a.slopes_nonincreasing);
    CHECK(a.violations.empty());

    std::vector<std::pair<Rational, double>> convex;
    for (int k = 0; k < 5; ++k) convex.emplace_back(Rational(k), std::pow(1.0 + k * k, 2));
    auto c = concavity_check(convex);
    CHECK_FALSE(c.concave);
    CHECK_FALSE(c.violations.empty());

    CHECK_THROWS(concavity_check({{Rational(0), 1.0}, {Rational(1), 1.0}}));
    CHECK_THROWS(concavity_check({{Rational(0), 1.0}, {Rational(0), 1.0}, {Rational(1), 1.0}}));
}

TEST_CASE("volumes vanish without positive scale") {
    auto flat = toy1();
    flat.lambda = LogScale();
    auto v = truncated_avol(flat, 0, {4, 8}, kCap);
    CHECK(v.extrapolated == doctest::Approx(0.0).epsilon(1e-9));
    auto r = truncated_restricted_vol(flat, RestrictedVariant::CL, {4, 8}, kCap);
    CHECK(r.extrapolated == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("arithmetic volume of the plain pair on a short window") {
    PairSpec plain;
    plain.lambda = LogScale::of(1);
    auto v = truncated_avol(plain, 0, {8, 16}, kCap);
    CHECK(v.raw.size() == 9);
    CHECK(v.extrapolated == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("restricted sets") {
    auto s = toy1();
    for (long m : {4L, 8L}) {
        auto cl = restricted_set(s, m, RestrictedVariant::CL, 0, kCap);
        auto q = restricted_set(s, m, RestrictedVariant::Quot, 0, kCap);
        CHECK(cl.count().lo >= 1);
        CHECK(q.count().lo >= cl.count().lo);
    }
    CHECK(parse_restricted_variant("cl") == RestrictedVariant::CL);
    CHECK(parse_restricted_variant("quot") == RestrictedVariant::Quot);
    CHECK_THROWS(parse_restricted_variant("other"));
}

TEST_CASE("Okounkov bodies grow with the scale") {
    auto small = toy1();
    auto big = toy1();
    big.lambda = LogScale::of(2);
    Window w{8, 12};
    auto b1 = build_okounkov_body(small, kFlag, BodyVariant::YMFull, w, 0, kCap);
    auto b2 = build_okounkov_body(big, kFlag, BodyVariant::YMFull, w, 0, kCap);
    CHECK(b1.body.dim == 2);
    CHECK(polytope_volume(b1.body) <= polytope_volume(b2.body));
    CHECK(b1.stats.levels.size() == 5);
    CHECK(parse_body_variant(to_string(BodyVariant::RestrictedQuot)) == BodyVariant::RestrictedQuot);
}

TEST_CASE("inclusions between quotient and restricted sets") {
    auto s = toy1();
    auto loose = check_inclusions(s, 1, 20, 2, kCap);
    CHECK(loose.holds());
    CHECK(loose.plain_in_quot);
    auto tight = check_inclusions(s, 0, 20, 2, kCap);
    CHECK(tight.plain_in_quot);
    CHECK(tight.quot_count >= tight.restricted_count);
    CHECK_THROWS(check_inclusions(s, 1, 4, 4, kCap));
}

TEST_CASE("finite-level FE bounds") {
    auto s = toy1();
    auto zero = check_fe_bounds(s, 0, 6, kCap);
    REQUIRE(zero.size() == 4);
    for (const auto& c : zero) {
        CHECK(c.report.satisfied);
        CHECK(c.report.lhs == doctest::Approx(0.0));
    }
    CHECK(zero[0].label == "fe.add");
    CHECK(zero[3].label == "fe.remove");
    for (long n : {1L, 2L})
        for (const auto& c : check_fe_bounds(s, n, 4, kCap)) CHECK(c.report.satisfied);
    CHECK_THROWS(check_fe_bounds(s, -1, 4, kCap));
}

TEST_CASE("estimates on a short window") {
    auto rep = check_estimates_II(toy1(), kFlag, Rational(1, 16), Rational(1, 10), {2, 6}, kCap);
    REQUIRE(rep.levels.size() == 5);
    for (const auto& lvl : rep.levels) {
        double m = static_cast<double>(lvl.m);
        CHECK(lvl.rhs <= lvl.bound);
        CHECK(lvl.slack == doctest::Approx(std::min(lvl.lhs - (lvl.rhs - rep.S * m), lvl.bound + rep.S_prime * m - lvl.lhs)));
        CHECK(lvl.satisfied == (lvl.slack >= 0));
    }
    CHECK_THROWS(check_estimates_II(toy1(), kFlag, Rational(1), Rational(1, 10), {2, 6}, kCap));
    CHECK(rep.S > 0);
    CHECK(rep.S_prime > 0);
    CHECK_FALSE(rep.general_hypothesis);
}

TEST_CASE("homogeneity and spec arithmetic") {
    auto s = toy1();
    auto s2 = scaled_spec(s, 2);
    CHECK(s2.degree == 2);
    CHECK(s2.E[0].mult == Rational(1, 2));
    auto sum = sum_spec(s, s);
    CHECK(sum.degree == 2);
    CHECK(sum.lambda == s.lambda);
    auto rep = check_homogeneity_bm(s, 2, {8, 12}, {1, 6}, std::nullopt, 2, kCap);
    CHECK(rep.identity_holds);
    CHECK(rep.identity.size() == 6);
    CHECK(rep.body_bm_exact);
}
