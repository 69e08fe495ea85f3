#include "arvol/geometry.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace arvol {

namespace {

Point sub(const Point& a, const Point& b) {
    Point r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Rational cross2(const Point& o, const Point& a, const Point& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

Point cross3(const Point& u, const Point& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

Rational dot(const Point& u, const Point& v) {
    Rational s = 0;
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

Rational orient3(const Point& a, const Point& b, const Point& c, const Point& d) {
    return dot(cross3(sub(b, a), sub(c, a)), sub(d, a));
}

std::vector<Point> sorted_unique(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Rank of a set of vectors by exact elimination.
int vector_rank(std::vector<Point> rows) {
    if (rows.empty()) return 0;
    size_t n = rows[0].size();
    int rank = 0;
    for (size_t col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
        size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == static_cast<size_t>(rank) || rows[r][col] == 0) continue;
            Rational f = rows[r][col] / rows[rank][col];
            for (size_t c = col; c < n; ++c) rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

// Counter-clockwise hull of distinct, sorted 2-d points, collinear points dropped.
std::vector<size_t> monotone_chain(const std::vector<Point>& p) {
    size_t n = p.size();
    if (n < 3) {
        std::vector<size_t> r;
        for (size_t i = 0; i < n; ++i) r.push_back(i);
        return r;
    }
    std::vector<size_t> h(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross2(p[h[k - 2]], p[h[k - 1]], p[i]) <= 0) --k;
        h[k++] = i;
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross2(p[h[k - 2]], p[h[k - 1]], p[i]) <= 0) --k;
        h[k++] = i;
    }
    h.resize(k - 1);
    return h;
}

struct Face {
    std::array<size_t, 3> v;
};

// Incremental hull of distinct 3-d points of affine rank 3. Faces are outward oriented;
// coplanar neighbouring facets may remain, which is harmless for volumes and vertex detection.
std::vector<Face> hull3_faces(const std::vector<Point>& p) {
    size_t n = p.size();
    size_t i0 = 0, i1 = 1, i2 = 0, i3 = 0;
    bool found = false;
    for (size_t j = 2; j < n && !found; ++j) {
        if (vector_rank({sub(p[i1], p[i0]), sub(p[j], p[i0])}) == 2) {
            i2 = j;
            for (size_t k = 2; k < n; ++k) {
                if (k == i2) continue;
                if (orient3(p[i0], p[i1], p[i2], p[k]) != 0) {
                    i3 = k;
                    found = true;
                    break;
                }
            }
            if (!found) break;
        }
    }
    if (!found) throw std::logic_error("hull3 requires affine rank 3");
    Point centre(3, Rational(0));
    for (size_t idx : {i0, i1, i2, i3})
        for (int c = 0; c < 3; ++c) centre[c] += p[idx][c] / 4;

    std::vector<Face> faces;
    auto add_face = [&](size_t a, size_t b, size_t c) {
        if (orient3(p[a], p[b], p[c], centre) > 0) std::swap(b, c);
        faces.push_back({{a, b, c}});
    };
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    for (size_t k = 0; k < n; ++k) {
        if (k == i0 || k == i1 || k == i2 || k == i3) continue;
        std::vector<char> visible(faces.size(), 0);
        bool any = false;
        for (size_t f = 0; f < faces.size(); ++f) {
            const auto& v = faces[f].v;
            if (orient3(p[v[0]], p[v[1]], p[v[2]], p[k]) > 0) {
                visible[f] = 1;
                any = true;
            }
        }
        if (!any) continue;
        std::set<std::pair<size_t, size_t>> edges;
        for (size_t f = 0; f < faces.size(); ++f) {
            if (!visible[f]) continue;
            const auto& v = faces[f].v;
            for (int e = 0; e < 3; ++e) edges.insert({v[e], v[(e + 1) % 3]});
        }
        std::vector<Face> next;
        for (size_t f = 0; f < faces.size(); ++f)
            if (!visible[f]) next.push_back(faces[f]);
        for (const auto& [a, b] : edges)
            if (!edges.count({b, a})) next.push_back({{a, b, k}});
        faces = std::move(next);
    }
    return faces;
}

std::vector<size_t> hull3_vertices(const std::vector<Point>& p, const std::vector<Face>& faces) {
    std::vector<std::vector<Point>> normals(p.size());
    for (const auto& f : faces) {
        Point nrm = cross3(sub(p[f.v[1]], p[f.v[0]]), sub(p[f.v[2]], p[f.v[0]]));
        for (size_t v : f.v) normals[v].push_back(nrm);
    }
    std::vector<size_t> out;
    for (size_t i = 0; i < p.size(); ++i)
        if (normals[i].size() >= 3 && vector_rank(normals[i]) == 3) out.push_back(i);
    return out;
}

// Drop one coordinate so that the projection is injective on the affine plane of the points.
int dropped_axis_for_plane(const std::vector<Point>& p) {
    Point u, v;
    for (size_t j = 1; j < p.size(); ++j) {
        Point d = sub(p[j], p[0]);
        if (u.empty()) {
            if (vector_rank({d}) == 1) u = d;
        } else if (vector_rank({u, d}) == 2) {
            v = d;
            break;
        }
    }
    Point nrm = cross3(u, v);
    for (int c = 0; c < 3; ++c)
        if (nrm[c] != 0) return c;
    throw std::logic_error("degenerate plane");
}

Point drop_axis(const Point& x, int axis) {
    Point r;
    for (size_t c = 0; c < x.size(); ++c)
        if (static_cast<int>(c) != axis) r.push_back(x[c]);
    return r;
}

}  // namespace

int affine_rank(const std::vector<Point>& points) {
    if (points.empty()) return -1;
    std::vector<Point> diffs;
    for (size_t i = 1; i < points.size(); ++i) diffs.push_back(sub(points[i], points[0]));
    return vector_rank(diffs);
}

RationalPolytope convex_hull(const std::vector<Point>& points, int dim) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("hull dimension must be 1, 2 or 3");
    for (const auto& x : points)
        if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("point dimension mismatch");
    RationalPolytope P;
    P.dim = dim;
    std::vector<Point> pts = sorted_unique(points);
    if (pts.empty()) return P;
    int rank = affine_rank(pts);
    if (rank == 0) {
        P.vertices = {pts[0]};
        return P;
    }
    if (rank == 1) {
        P.vertices = {pts.front(), pts.back()};
        return P;
    }
    if (dim == 2) {
        for (size_t i : monotone_chain(pts)) P.vertices.push_back(pts[i]);
    } else if (rank == 2) {
        int axis = dropped_axis_for_plane(pts);
        std::vector<Point> proj;
        for (const auto& x : pts) proj.push_back(drop_axis(x, axis));
        std::vector<size_t> order(pts.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return proj[a] < proj[b]; });
        std::vector<Point> sorted_proj;
        for (size_t i : order) sorted_proj.push_back(proj[i]);
        for (size_t i : monotone_chain(sorted_proj)) P.vertices.push_back(pts[order[i]]);
    } else {
        auto faces = hull3_faces(pts);
        for (size_t i : hull3_vertices(pts, faces)) P.vertices.push_back(pts[i]);
    }
    std::sort(P.vertices.begin(), P.vertices.end());
    return P;
}

std::vector<Point> polygon_cycle(const RationalPolytope& P) {
    if (P.dim != 2) throw std::invalid_argument("polygon_cycle needs a 2-dimensional body");
    std::vector<Point> out;
    for (size_t i : monotone_chain(P.vertices)) out.push_back(P.vertices[i]);
    return out;
}

Rational polytope_volume(const RationalPolytope& P) {
    if (P.empty()) throw std::invalid_argument("volume of the empty body");
    if (affine_rank(P.vertices) < P.dim) return 0;
    if (P.dim == 1) return P.vertices.back()[0] - P.vertices.front()[0];
    if (P.dim == 2) {
        auto cyc = polygon_cycle(P);
        Rational twice = 0;
        for (size_t i = 0; i < cyc.size(); ++i) {
            const Point& a = cyc[i];
            const Point& b = cyc[(i + 1) % cyc.size()];
            twice += a[0] * b[1] - a[1] * b[0];
        }
        return twice / 2;
    }
    const auto& pts = P.vertices;
    auto faces = hull3_faces(pts);
    Point centre(3, Rational(0));
    for (const auto& x : pts)
        for (int c = 0; c < 3; ++c) centre[c] += x[c];
    for (int c = 0; c < 3; ++c) centre[c] /= static_cast<long>(pts.size());
    Rational six = 0;
    for (const auto& f : faces) six -= orient3(pts[f.v[0]], pts[f.v[1]], pts[f.v[2]], centre);
    return six / 6;
}

RationalPolytope minkowski_sum(const RationalPolytope& P, const RationalPolytope& Q) {
    if (P.dim != Q.dim) throw std::invalid_argument("Minkowski sum of bodies of different dimension");
    std::vector<Point> sums;
    for (const auto& a : P.vertices)
        for (const auto& b : Q.vertices) {
            Point s(a.size());
            for (size_t c = 0; c < a.size(); ++c) s[c] = a[c] + b[c];
            sums.push_back(s);
        }
    return convex_hull(sums, P.dim);
}

RationalPolytope hyperplane_slice(const RationalPolytope& P, int axis, const Rational& value) {
    if (axis < 0 || axis >= P.dim) throw std::invalid_argument("slice axis out of range");
    std::vector<Point> cut;
    const auto& v = P.vertices;
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i][axis] == value) cut.push_back(drop_axis(v[i], axis));
        for (size_t j = i + 1; j < v.size(); ++j) {
            const Rational &a = v[i][axis], &b = v[j][axis];
            if ((a < value && value < b) || (b < value && value < a)) {
                Rational t = (value - a) / (b - a);
                Point x(v[i].size());
                for (size_t c = 0; c < x.size(); ++c) x[c] = v[i][c] + t * (v[j][c] - v[i][c]);
                cut.push_back(drop_axis(x, axis));
            }
        }
    }
    RationalPolytope S;
    S.dim = P.dim - 1;
    if (S.dim == 0) {
        if (!cut.empty()) S.vertices = {Point{}};
        return S;
    }
    return convex_hull(cut, S.dim);
}

bool contains(const RationalPolytope& P, const Point& x) {
    if (static_cast<int>(x.size()) != P.dim) throw std::invalid_argument("point dimension mismatch");
    if (P.empty()) return false;
    if (P.dim == 1) return P.vertices.front()[0] <= x[0] && x[0] <= P.vertices.back()[0];
    int rank = affine_rank(P.vertices);
    if (P.dim == 2 && rank == 2) {
        auto cyc = polygon_cycle(P);
        for (size_t i = 0; i < cyc.size(); ++i)
            if (cross2(cyc[i], cyc[(i + 1) % cyc.size()], x) < 0) return false;
        return true;
    }
    if (P.dim == 3 && rank == 3) {
        auto faces = hull3_faces(P.vertices);
        for (const auto& f : faces)
            if (orient3(P.vertices[f.v[0]], P.vertices[f.v[1]], P.vertices[f.v[2]], x) > 0) return false;
        return true;
    }
    std::vector<Point> pts = P.vertices;
    pts.push_back(x);
    return convex_hull(pts, P.dim) == P;
}

bool brunn_minkowski_holds(const Rational& vol_sum, const Rational& vol_p, const Rational& vol_q, int d) {
    if (d == 1) return vol_sum >= vol_p + vol_q;
    if (d == 2) {
        Rational rest = vol_sum - vol_p - vol_q;
        return rest >= 0 && 4 * vol_p * vol_q <= rest * rest;
    }
    if (d != 3) throw std::invalid_argument("Brunn-Minkowski check supports d <= 3");
    for (mpfr_prec_t prec = 128; prec <= 4096; prec *= 2) {
        mpfr_t a, b, s, c;
        mpfr_inits2(prec, a, b, s, c, static_cast<mpfr_ptr>(nullptr));
        mpfr_set_q(a, vol_p.get_mpq_t(), MPFR_RNDU);
        mpfr_set_q(b, vol_q.get_mpq_t(), MPFR_RNDU);
        mpfr_cbrt(a, a, MPFR_RNDU);
        mpfr_cbrt(b, b, MPFR_RNDU);
        mpfr_add(s, a, b, MPFR_RNDU);
        mpfr_pow_ui(s, s, 3, MPFR_RNDU);
        mpfr_set_q(c, vol_sum.get_mpq_t(), MPFR_RNDD);
        bool upper_ok = mpfr_lessequal_p(s, c);
        mpfr_set_q(a, vol_p.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(b, vol_q.get_mpq_t(), MPFR_RNDD);
        mpfr_cbrt(a, a, MPFR_RNDD);
        mpfr_cbrt(b, b, MPFR_RNDD);
        mpfr_add(s, a, b, MPFR_RNDD);
        mpfr_pow_ui(s, s, 3, MPFR_RNDD);
        mpfr_set_q(c, vol_sum.get_mpq_t(), MPFR_RNDU);
        bool lower_fails = mpfr_greater_p(s, c);
        mpfr_clears(a, b, s, c, static_cast<mpfr_ptr>(nullptr));
        if (upper_ok) return true;
        if (lower_fails) return false;
    }
    // Unresolved at 4096 bits: the two sides agree to that precision, i.e. equality.
    return true;
}

std::string polytope_to_csv(const RationalPolytope& P) {
    std::ostringstream out;
    for (int c = 0; c < P.dim; ++c) out << (c ? "," : "") << "x" << c;
    out << "\n";
    for (const auto& v : P.vertices) {
        for (size_t c = 0; c < v.size(); ++c) out << (c ? "," : "") << format_rational(v[c]);
        out << "\n";
    }
    return out.str();
}

}  // namespace arvol
