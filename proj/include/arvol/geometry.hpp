#pragma once

#include "arvol/numeric.hpp"

#include <string>
#include <vector>

namespace arvol {

using Point = RatVector;

// Convex body in dimension 1..3 stored by its vertices in lexicographic order.
// An empty vertex list is the empty body.
struct RationalPolytope {
    int dim = 0;
    std::vector<Point> vertices;

    bool empty() const { return vertices.empty(); }
    bool operator==(const RationalPolytope& o) const { return dim == o.dim && vertices == o.vertices; }
};

RationalPolytope convex_hull(const std::vector<Point>& points, int dim);
Rational polytope_volume(const RationalPolytope& P);
RationalPolytope minkowski_sum(const RationalPolytope& P, const RationalPolytope& Q);
// Slice {x in P : x[axis] = value}, embedded in the remaining coordinates.
// Slicing a 1-dimensional body yields a dimension-0 body (one empty vertex or nothing).
RationalPolytope hyperplane_slice(const RationalPolytope& P, int axis, const Rational& value);
bool contains(const RationalPolytope& P, const Point& x);

// Vertices of a 2-dimensional body in counter-clockwise order, starting at the lexicographic minimum.
std::vector<Point> polygon_cycle(const RationalPolytope& P);

// Affine rank of a point set (0 for a single point, -1 for no points).
int affine_rank(const std::vector<Point>& points);

// Exact check of vol(P+Q)^(1/d) >= vol(P)^(1/d) + vol(Q)^(1/d).
bool brunn_minkowski_holds(const Rational& vol_sum, const Rational& vol_p, const Rational& vol_q, int d);

std::string polytope_to_csv(const RationalPolytope& P);

}  // namespace arvol
