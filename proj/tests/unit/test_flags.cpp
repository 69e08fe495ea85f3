#include "arvol/flags.hpp"
#include "arvol/toy.hpp"

#include "doctest.h"

#include <random>

using namespace arvol;

TEST_CASE("good flag conditions") {
    CHECK(validate_good_flag({Rational(0), Integer(2), FlagVariant::Full}).good);
    auto half = validate_good_flag({Rational(1, 2), Integer(2), FlagVariant::Full});
    CHECK_FALSE(half.good);
    bool some_failed = false;
    for (const auto& c : half.conditions) some_failed = some_failed || !c.pass;
    CHECK(some_failed);
    CHECK(validate_good_flag({Rational(3), Integer(5), FlagVariant::Full}).good);
    CHECK_FALSE(validate_good_flag({Rational(0), Integer(4), FlagVariant::Full}).good);
    CHECK_THROWS_AS(require_good_flag({Rational(1, 2), Integer(2), FlagVariant::Full}), std::invalid_argument);
    CHECK(parse_flag_variant(to_string(FlagVariant::Restricted)) == FlagVariant::Restricted);
}

TEST_CASE("valuations of polynomials") {
    FlagSpec f{Rational(0), Integer(2), FlagVariant::Full};
    CHECK(valuation(f, IntVector{0, 12}) == ValuationVector{1, 2});
    CHECK(valuation(f, IntVector{3, 1}) == ValuationVector{0, 0});
    FlagSpec g{Rational(1), Integer(3), FlagVariant::Full};
    // t^2 - 1 = (t - 1)(t + 1): leading Taylor coefficient 2 at order 1.
    CHECK(valuation(g, IntVector{-1, 0, 1}) == ValuationVector{1, 0});
    FlagSpec r{Rational(0), Integer(2), FlagVariant::Restricted};
    CHECK(valuation(r, IntVector{8, 1}) == ValuationVector{3});
    CHECK(restricted_valuation(r, Rational(3, 4)) == -2);
}

TEST_CASE("valuation clouds") {
    FlagSpec f{Rational(0), Integer(2), FlagVariant::Full};
    auto c = valuation_cloud({{0, 1, 0}, {0, 2, 0}, {0, 0, 1}, {0, 0, 0}}, f, 2);
    CHECK(c.distinct() == 3);
    CHECK(c.multiplicity.at({1, 0}) == 1);
    CHECK(c.multiplicity.at({1, 1}) == 1);
    CHECK(c.multiplicity.at({2, 0}) == 1);
    CHECK(valuation_cloud({}, f, 1).distinct() == 0);
    auto csv = cloud_to_csv({c});
    CHECK(csv.rfind("m,w1,w2,multiplicity\n", 0) == 0);
}

TEST_CASE("valuations are additive") {
    std::vector<FlagSpec> flags;
    for (Rational center : {Rational(0), Rational(1), Rational(-2)})
        for (long p : {2L, 3L, 5L}) {
            FlagSpec f{center, Integer(p), FlagVariant::Full};
            if (validate_good_flag(f).good) flags.push_back(f);
        }
    REQUIRE(!flags.empty());
    std::mt19937_64 rng(21);
    auto nonzero_poly = [&] {
        while (true) {
            IntVector a(1 + rng() % 4);
            bool zero = true;
            for (auto& x : a) {
                x = static_cast<long>(rng() % 41) - 20;
                zero = zero && x == 0;
            }
            if (!zero) return a;
        }
    };
    for (int i = 0; i < 500; ++i) {
        const auto& f = flags[static_cast<size_t>(i) % flags.size()];
        IntVector a = nonzero_poly(), b = nonzero_poly();
        auto va = valuation(f, a), vb = valuation(f, b), vab = valuation(f, poly_mul(a, b));
        CHECK(vab == ValuationVector{va[0] + vb[0], va[1] + vb[1]});
    }
}

TEST_CASE("distinct valuations never exceed the nonzero sections") {
    PairSpec s;
    s.lambda = LogScale::of(1);
    s.E = {{Rational(0), Rational(1, 4)}};
    FlagSpec f{Rational(0), Integer(2), FlagVariant::Full};
    for (long m = 1; m <= 3; ++m) {
        auto S = build_section_space(s, m);
        auto list = enumerate_small_sections(S.space, Kind::StrictlySmall, 10000000);
        auto cloud = valuation_cloud(list.vectors, f, m);
        CHECK(cloud.distinct() + 1 <= list.vectors.size());
        long total = 0;
        for (const auto& [v, k] : cloud.multiplicity) total += k;
        CHECK(static_cast<size_t>(total) + 1 == list.vectors.size());
    }
}
