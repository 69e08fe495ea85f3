#include "arvol/toy.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

using namespace arvol;

namespace {

const uint64_t kCap = 10000000;

PairSpec toy1() {
    PairSpec s;
    s.lambda = LogScale::of(1);
    s.E = {{Rational(0), Rational(1, 4)}};
    return s;
}

Rational eval(const IntVector& poly, const Rational& t) {
    Rational acc = 0;
    for (size_t i = poly.size(); i-- > 0;) acc = acc * t + poly[i];
    return acc;
}

}  // namespace

TEST_CASE("pair spec validation") {
    CHECK_NOTHROW(validate(toy1()));
    auto bad = toy1();
    bad.E.push_back({Rational(1), Rational(1)});
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = toy1();
    bad.lambda = LogScale::of(-1);
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = toy1();
    bad.E.push_back(bad.E[0]);
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = toy1();
    bad.rho0 = 2;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    CHECK(toy1().effective_rho0() == Rational(3, 4));
}

TEST_CASE("section spaces of the toy pair") {
    auto s = toy1();
    auto S1 = build_section_space(s, 1);
    CHECK(S1.rank() == 1);
    CHECK(S1.order_at(0) == 1);
    // c t with |c| < e.
    CHECK(count_small_sections(S1.space, Kind::StrictlySmall, kCap) == CountInterval{5, 5});
    auto S2 = build_section_space(s, 2);
    CHECK(S2.rank() == 2);
    CHECK(count_small_sections(S2.space, Kind::StrictlySmall, kCap) == CountInterval{225, 225});
    CHECK(y_order(s, 5, 0) == 2);
    CHECK(y_order(s, 4, Rational(-1, 2)) == 0);
}

TEST_CASE("vanishing lattice equals the naive span") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        long N = 2 + static_cast<long>(rng() % 5);
        Rational a(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3));
        a.canonicalize();
        long k = 1 + static_cast<long>(rng() % 2);
        auto S = polynomial_space(N, LogScale::of(1), NormMode::CoeffMax, {{a, k}});
        CHECK(S.rank() == N + 1 - k);
        // Every integral polynomial with small coefficients vanishing to order k lies in the lattice, and conversely.
        for (int trial = 0; trial < 200; ++trial) {
            IntVector x(static_cast<size_t>(N + 1));
            for (auto& c : x) c = static_cast<long>(rng() % 7) - 3;
            IntVector y = poly_mul(x, S.vanishing);
            y.resize(static_cast<size_t>(N + 1 + k));
            bool fits = true;
            for (size_t i = static_cast<size_t>(N + 1); i < y.size(); ++i) fits = fits && y[i] == 0;
            if (!fits) continue;
            y.resize(static_cast<size_t>(N + 1));
            REQUIRE(lattice_coordinates(S.space.basis, y));
            CHECK(eval(y, a) == 0);
        }
        for (const auto& col : S.space.basis.cols) CHECK(eval(col, a) == 0);
    }
}

TEST_CASE("Taylor functionals") {
    auto r = taylor_functional(0, 2, 0);
    IntVector p{4, 0, 1};  // t^2 + 4
    auto value = [&](const Restriction& f, const IntVector& x) {
        Integer v = 0;
        for (size_t i = 0; i < x.size(); ++i) v += f.functional[i] * x[i];
        Rational q(v, f.denominator);
        q.canonicalize();
        return q;
    };
    CHECK(value(r, p) == 4);
    CHECK(value(taylor_functional(1, 2, 0), {0, 0, 1}) == 1);
    CHECK(value(taylor_functional(1, 2, 1), {0, 0, 1}) == 2);
    CHECK(value(taylor_functional(Rational(1, 2), 2, 0), {0, 0, 1}) == Rational(1, 4));
    CHECK(value(taylor_functional(Rational(1, 2), 2, 2), {3, 5, 1}) == 1);
    auto out = taylor_functional(0, 2, 3);
    CHECK(value(out, p) == 0);
}

TEST_CASE("restriction kernel is the next vanishing lattice") {
    auto s = toy1();
    for (long m : {1L, 3L, 6L}) {
        long k = y_order(s, m, 0);
        for (long n = k; n <= k + 2 && n <= m; ++n) {
            auto L = restriction_to_Y(s, m, n);
            auto next = build_section_space_with_order(s, m, n + 1);
            CHECK(hermite_normal_form(L.kernel_basis) == next.space.basis);
        }
    }
    CHECK_THROWS(restriction_to_Y(s, 2, -1));
}

TEST_CASE("heights of rational points") {
    auto s = toy1();
    CHECK(height(s, Rational(0)) == LogScale::of(1));
    auto flat = s;
    flat.lambda = LogScale();
    CHECK(height(flat, Rational(2)) == LogScale::log(2));
    CHECK(height(flat, Rational(1, 2)) == LogScale::log(2));
    CHECK(height(flat, Integer(1), Integer(0)) == LogScale::log(1));
    auto cubic = flat;
    cubic.degree = 3;
    CHECK(height(cubic, Rational(-2, 3)) == LogScale::log(27));
    CHECK_THROWS(height(s, Integer(0), Integer(0)));
}

TEST_CASE("archimedean norm evaluation") {
    auto one = arch_norm_eval({1}, NormMode::CoeffMax, LogScale());
    CHECK(one.lo <= 1.0);
    CHECK(one.hi >= 1.0);
    CHECK(one.hi - one.lo < 1e-15);
    auto mono = arch_norm_eval({0, 0, 0, 5}, NormMode::CircleSup, LogScale());
    REQUIRE(mono.exact_base);
    CHECK(*mono.exact_base == 5);
    auto sum = arch_norm_eval({1, 1}, NormMode::CircleSup, LogScale::log(2));
    CHECK(sum.lo <= 1.0);
    CHECK(sum.hi >= 1.0);
    CHECK(sum.hi - sum.lo < 1e-12);
    auto mixed = arch_norm_eval({1, -1, 1}, NormMode::CircleSup, LogScale());
    CHECK(mixed.lo <= 3.0);
    CHECK(mixed.hi >= 3.0);
    CHECK(arch_norm_eval({0, 0}, NormMode::CoeffMax, LogScale::of(2)).hi == 0);
}

TEST_CASE("restricted image of the toy pair") {
    auto s = toy1();
    for (long m : {1L, 2L, 3L}) {
        auto S = build_section_space(s, m);
        auto img = restricted_image(S, s.Y, Kind::StrictlySmall, kCap);
        CHECK(img.order == y_order(s, m, 0));
        // Brute force on the enumerated sections.
        auto list = enumerate_small_sections(S.space, Kind::StrictlySmall, kCap);
        auto r = taylor_functional(s.Y, S.degree, img.order);
        std::set<Integer> values;
        for (const auto& x : list.vectors) {
            Integer v = 0;
            for (size_t i = 0; i < x.size(); ++i) v += r.functional[i] * x[i];
            values.insert(img.generator == 0 ? v : Integer(v / img.generator));
        }
        CHECK(img.units == IntervalSet::from_values({values.begin(), values.end()}));
    }
}
