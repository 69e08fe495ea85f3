#include "arvol/geometry.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace arvol;

namespace {

Point pt(Rational x, Rational y) { return {x, y}; }

// Hull edges: ordered pairs with no point strictly to the right and every collinear point inside the segment.
std::set<std::pair<long, long>> brute_hull(const std::vector<std::pair<long, long>>& p) {
    std::set<std::pair<long, long>> verts;
    size_t n = p.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (p[i] == p[j]) continue;
            long ax = p[j].first - p[i].first, ay = p[j].second - p[i].second;
            bool ok = true;
            for (size_t k = 0; k < n && ok; ++k) {
                long bx = p[k].first - p[i].first, by = p[k].second - p[i].second;
                long cr = ax * by - ay * bx;
                if (cr < 0) ok = false;
                if (cr == 0) {
                    long dot = ax * bx + ay * by, len = ax * ax + ay * ay;
                    if (dot < 0 || dot > len) ok = false;
                }
            }
            if (ok) verts.insert(p[i]), verts.insert(p[j]);
        }
    if (verts.empty() && n) verts.insert(p[0]);
    return verts;
}

}  // namespace

TEST_CASE("hull examples") {
    auto single = convex_hull({pt(0, 0)}, 2);
    CHECK(single.vertices == std::vector<Point>{pt(0, 0)});
    auto tri = convex_hull({pt(0, 0), pt(1, 0), pt(0, 1), pt(Rational(1, 4), Rational(1, 4))}, 2);
    CHECK(tri.vertices == std::vector<Point>{pt(0, 0), pt(0, 1), pt(1, 0)});
    CHECK(polytope_volume(tri) == Rational(1, 2));
    auto sq = convex_hull({pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1)}, 2);
    CHECK(polytope_volume(sq) == 1);
    CHECK_THROWS(convex_hull({pt(0, 0), Point{1}}, 2));
}

TEST_CASE("hull of 1000 random points matches the brute-force edge oracle") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> c(0, 1000);
    std::vector<std::pair<long, long>> raw;
    std::vector<Point> pts;
    for (int i = 0; i < 1000; ++i) {
        raw.emplace_back(c(rng), c(rng));
        pts.push_back(pt(Rational(raw.back().first, 1000), Rational(raw.back().second, 1000)));
    }
    auto H = convex_hull(pts, 2);
    std::set<std::pair<long, long>> got;
    for (const auto& v : H.vertices) {
        Rational x = v[0] * 1000, y = v[1] * 1000;
        got.insert({x.get_num().get_si(), y.get_num().get_si()});
    }
    CHECK(got == brute_hull(raw));
    CHECK(convex_hull(H.vertices, 2) == H);
}

TEST_CASE("hull area matches a Monte-Carlo estimate within 3 sigma") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> c(0, 997);
    std::vector<Point> pts;
    for (int i = 0; i < 50; ++i) pts.push_back(pt(Rational(c(rng), 997), Rational(c(rng), 997)));
    auto H = convex_hull(pts, 2);
    double area = to_double(polytope_volume(H));
    auto cyc = polygon_cycle(H);
    std::vector<std::pair<double, double>> d;
    for (const auto& v : cyc) d.emplace_back(to_double(v[0]), to_double(v[1]));
    std::uniform_real_distribution<double> u(0, 1);
    const int N = 1000000;
    int inside = 0;
    for (int s = 0; s < N; ++s) {
        double x = u(rng), y = u(rng);
        bool in = true;
        for (size_t i = 0; i < d.size() && in; ++i) {
            auto [x0, y0] = d[i];
            auto [x1, y1] = d[(i + 1) % d.size()];
            if ((x1 - x0) * (y - y0) - (y1 - y0) * (x - x0) < 0) in = false;
        }
        inside += in;
    }
    double est = static_cast<double>(inside) / N;
    double sigma = std::sqrt(area * (1 - area) / N);
    CHECK(std::fabs(est - area) <= 3 * sigma);
}

TEST_CASE("Minkowski sums") {
    auto sq = convex_hull({pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1)}, 2);
    auto s2 = minkowski_sum(sq, sq);
    CHECK(polytope_volume(s2) == 4);
    auto a = convex_hull({pt(0, 0), pt(1, 0)}, 2), b = convex_hull({pt(0, 0), pt(0, 1)}, 2);
    CHECK(minkowski_sum(a, b) == sq);
    CHECK(polytope_volume(a) == 0);

    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long> c(-20, 20);
    for (int t = 0; t < 20; ++t) {
        std::vector<Point> p, q;
        for (int i = 0; i < 8; ++i) p.push_back(pt(Rational(c(rng), 7), Rational(c(rng), 7)));
        for (int i = 0; i < 8; ++i) q.push_back(pt(Rational(c(rng), 5), Rational(c(rng), 5)));
        auto P = convex_hull(p, 2), Q = convex_hull(q, 2);
        std::vector<Point> sums;
        for (const auto& x : P.vertices)
            for (const auto& y : Q.vertices) sums.push_back(pt(x[0] + y[0], x[1] + y[1]));
        auto S = minkowski_sum(P, Q);
        CHECK(S == convex_hull(sums, 2));
        CHECK(brunn_minkowski_holds(polytope_volume(S), polytope_volume(P), polytope_volume(Q), 2));
    }
    CHECK_THROWS(minkowski_sum(a, convex_hull({Point{0}}, 1)));
}

TEST_CASE("one-dimensional bodies") {
    auto I = convex_hull({Point{Rational(1, 2)}, Point{2}, Point{1}}, 1);
    CHECK(I.vertices == std::vector<Point>{Point{Rational(1, 2)}, Point{2}});
    CHECK(polytope_volume(I) == Rational(3, 2));
    auto J = convex_hull({Point{0}, Point{1}}, 1);
    CHECK(polytope_volume(minkowski_sum(I, J)) == Rational(5, 2));
    CHECK(brunn_minkowski_holds(Rational(5, 2), Rational(3, 2), 1, 1));
    CHECK_FALSE(brunn_minkowski_holds(Rational(2), Rational(3, 2), 1, 1));
}

TEST_CASE("slices") {
    auto sq = convex_hull({pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1)}, 2);
    auto s = hyperplane_slice(sq, 0, 0);
    CHECK(s.dim == 1);
    CHECK(polytope_volume(s) == 1);
    CHECK(hyperplane_slice(sq, 0, 2).empty());

    auto tri = convex_hull({pt(0, 0), pt(4, 0), pt(0, 2)}, 2);
    // Upper envelope y = 2 - x/2, lower y = 0.
    for (int k = 1; k < 8; ++k) {
        Rational x(k, 2);
        x.canonicalize();
        CHECK(polytope_volume(hyperplane_slice(tri, 0, x)) == Rational(2) - x / 2);
    }
    // Riemann sum of slice lengths converges to the area.
    Rational sum = 0, step(1, 64);
    for (int k = 0; k < 256; ++k) {
        auto sl = hyperplane_slice(tri, 0, step * k + step / 2);
        if (!sl.empty()) sum += polytope_volume(sl) * step;
    }
    CHECK(std::fabs(to_double(sum) - 4.0) < 0.05);
}

TEST_CASE("volume monotonicity and CSV") {
    auto big = convex_hull({pt(0, 0), pt(2, 0), pt(0, 2), pt(2, 2)}, 2);
    auto small = convex_hull({pt(0, 0), pt(1, 0), pt(0, 1)}, 2);
    CHECK(polytope_volume(small) <= polytope_volume(big));
    CHECK(contains(big, pt(1, 1)));
    CHECK_FALSE(contains(small, pt(1, 1)));
    CHECK(polytope_to_csv(small) == "x0,x1\n0,0\n0,1\n1,0\n");
}

TEST_CASE("three-dimensional volume") {
    std::vector<Point> cube;
    for (int x : {0, 1})
        for (int y : {0, 1})
            for (int z : {0, 1}) cube.push_back({Rational(x), Rational(y), Rational(z)});
    cube.push_back({Rational(1, 2), Rational(1, 2), Rational(1, 2)});
    auto C = convex_hull(cube, 3);
    CHECK(C.vertices.size() == 8);
    CHECK(polytope_volume(C) == 1);
    auto T = convex_hull({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3);
    CHECK(polytope_volume(T) == Rational(1, 6));
}
