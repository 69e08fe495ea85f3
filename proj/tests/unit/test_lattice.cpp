#include "arvol/lattice.hpp"
#include "arvol/lp.hpp"

#include "doctest.h"

#include <random>
#include <set>

using namespace arvol;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, size_t rows, size_t cols, long range) {
    std::uniform_int_distribution<long> d(-range, range);
    IntMatrix m{rows, {}};
    for (size_t j = 0; j < cols; ++j) {
        IntVector c(rows);
        for (auto& x : c) x = d(rng);
        m.cols.push_back(c);
    }
    return m;
}

// Every lattice point in the box: walk the box and test membership.
std::set<IntVector> brute_points(const IntMatrix& B, const IntVector& lo, const IntVector& hi) {
    std::set<IntVector> out;
    IntVector x = lo;
    while (true) {
        if (lattice_coordinates(B, x)) out.insert(x);
        size_t t = 0;
        while (t < x.size() && x[t] == hi[t]) x[t] = lo[t], ++t;
        if (t == x.size()) break;
        ++x[t];
    }
    return out;
}

}  // namespace

TEST_CASE("HNF spans the same lattice and is in echelon form") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
        IntMatrix M = random_matrix(rng, rows, cols, 6);
        IntMatrix H = hermite_normal_form(M);
        auto piv = pivot_rows(H);
        for (size_t j = 1; j < piv.size(); ++j) CHECK(piv[j - 1] < piv[j]);
        for (size_t j = 0; j < H.ncols(); ++j) {
            CHECK(H.cols[j][piv[j]] > 0);
            for (size_t i = 0; i < piv[j]; ++i) CHECK(H.cols[j][i] == 0);
            for (size_t l = 0; l < j; ++l) {
                CHECK(H.cols[l][piv[j]] >= 0);
                CHECK(H.cols[l][piv[j]] < H.cols[j][piv[j]]);
            }
        }
        for (const auto& c : M.cols) CHECK(lattice_coordinates(H, c).has_value());
        for (const auto& c : H.cols) {
            auto z = lattice_coordinates(H, c);
            REQUIRE(z);
            CHECK(combine(H, *z) == c);
        }
        CHECK(hermite_normal_form(H) == H);
    }
}

TEST_CASE("integer kernel") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        IntMatrix A = random_matrix(rng, 2, 4, 5);
        IntMatrix K = integer_kernel(A);
        for (const auto& z : K.cols)
            for (size_t i = 0; i < A.rows; ++i) {
                Integer s = 0;
                for (size_t j = 0; j < A.ncols(); ++j) s += A.cols[j][i] * z[j];
                CHECK(s == 0);
            }
    }
}

TEST_CASE("box counts, listings and projections match brute force") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 150; ++t) {
        size_t n = 1 + rng() % 3;
        IntMatrix B = hermite_normal_form(random_matrix(rng, n, n, 3));
        if (B.ncols() == 0) continue;
        IntVector lo(n), hi(n);
        for (size_t i = 0; i < n; ++i) {
            long a = static_cast<long>(rng() % 5);
            lo[i] = -a;
            hi[i] = static_cast<long>(rng() % 5);
        }
        if (B.ncols() != n) continue;
        auto brute = brute_points(B, lo, hi);
        CHECK(count_points(B, lo, hi, 1000000) == Integer(brute.size()));
        auto listed = list_points(B, lo, hi, 1000000);
        CHECK(std::set<IntVector>(listed.begin(), listed.end()) == brute);
        std::set<IntVector> proj;
        for (const auto& x : brute) proj.insert({x[0]});
        CHECK(projection_count(B, {0}, lo, hi, 1000000) == Integer(proj.size()));

        IntVector f(n);
        for (auto& x : f) x = static_cast<long>(rng() % 7) - 3;
        FunctionalImage img = functional_image(B, f, lo, hi, 1000000);
        std::vector<Integer> vals;
        for (const auto& x : brute) {
            Integer s = 0;
            for (size_t i = 0; i < n; ++i) s += f[i] * x[i];
            vals.push_back(img.generator == 0 ? s : Integer(s / img.generator));
        }
        CHECK(img.units == IntervalSet::from_values(vals));
    }
}

TEST_CASE("cap is enforced") {
    IntMatrix I{2, {{1, 0}, {0, 1}}};
    CHECK_THROWS_AS(list_points(I, {-100, -100}, {100, 100}, 1000), CapExceeded);
}

TEST_CASE("interval sets") {
    auto s = IntervalSet::from_values({5, 1, 2, 3, -4, 5});
    CHECK(s.parts.size() == 3);
    CHECK(s.size() == 5);
    CHECK(s.contains(2));
    CHECK_FALSE(s.contains(4));
    CHECK(s.contains_all(IntervalSet::range(1, 3)));
    CHECK(IntervalSet::range(0, 0).gcd_of_elements() == 0);
    CHECK(IntervalSet::from_values({-6, 4}).gcd_of_elements() == 2);

    // Valuations against brute force.
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        long a = static_cast<long>(rng() % 200) - 100, b = a + static_cast<long>(rng() % 150);
        Integer p = std::vector<long>{2, 3, 5}[rng() % 3];
        std::set<long> want;
        for (long v = a; v <= b; ++v)
            if (v) want.insert(ord_p(Integer(v), p));
        auto got = IntervalSet::range(a, b).valuations(p);
        CHECK(std::set<long>(got.begin(), got.end()) == want);
    }
}

TEST_CASE("exact simplex") {
    // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6.
    auto r = minimize_standard({{1, 2, 1, 0}, {3, 1, 0, 1}}, {4, 6}, {-1, -1, 0, 0});
    REQUIRE(r.status == LpResult::Optimal);
    CHECK(r.value == Rational(-14, 5));
    auto inf = minimize_standard({{1, 1}}, {-1}, {0, 0});
    CHECK(inf.status == LpResult::Infeasible);
    auto unb = minimize_standard({{1, -1}}, {0}, {-1, 0});
    CHECK(unb.status == LpResult::Unbounded);
}
