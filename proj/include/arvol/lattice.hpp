#pragma once

#include "arvol/numeric.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arvol {

// Column-major integer matrix: cols[j] has length rows.
struct IntMatrix {
    size_t rows = 0;
    std::vector<IntVector> cols;

    size_t ncols() const { return cols.size(); }
    bool operator==(const IntMatrix& o) const { return rows == o.rows && cols == o.cols; }
};

struct RatMatrix {
    size_t rows = 0;  // output dimension
    size_t ncols = 0;  // input dimension
    std::vector<RatVector> entries;  // row-major, entries[i][j]

    IntVector apply_int(const IntVector& x) const;  // requires integral result
    RatVector apply(const IntVector& x) const;
};

// Thrown when an exact computation would examine more candidates than the configured cap.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Column Hermite normal form: columns sorted by strictly increasing pivot row, pivot entries
// positive, entries of earlier columns in a pivot row reduced into [0, pivot).
IntMatrix hermite_normal_form(const IntMatrix& m);
// Same, with pivots searched in the given row order.
IntMatrix echelon_in_order(const IntMatrix& m, const std::vector<size_t>& row_order);
std::vector<size_t> pivot_rows(const IntMatrix& hnf);

// Integer solutions z of A z = 0 (A is rows x ncols); returned as columns of length ncols.
IntMatrix integer_kernel(const IntMatrix& a);
// Coordinates z with basis * z = x, if x lies in the lattice.
std::optional<IntVector> lattice_coordinates(const IntMatrix& hnf, const IntVector& x);
IntVector combine(const IntMatrix& basis, const IntVector& z);

// Lattice points x = basis * z in the box lo <= x <= hi; basis must be in echelon form.
Integer count_points(const IntMatrix& basis, const IntVector& lo, const IntVector& hi, uint64_t cap);
// Explicit list; throws CapExceeded beyond cap points or nodes.
std::vector<IntVector> list_points(const IntMatrix& basis, const IntVector& lo, const IntVector& hi,
                                   uint64_t cap);
// Number of distinct projections onto the coordinates `rows` of lattice points in the box.
Integer projection_count(const IntMatrix& basis, const std::vector<size_t>& rows, const IntVector& lo,
                         const IntVector& hi, uint64_t cap);

// Disjoint, sorted integer intervals.
struct IntervalSet {
    std::vector<std::pair<Integer, Integer>> parts;

    static IntervalSet from_values(std::vector<Integer> values);
    static IntervalSet range(const Integer& lo, const Integer& hi);
    bool empty() const { return parts.empty(); }
    Integer size() const;
    Integer min() const { return parts.front().first; }
    Integer max() const { return parts.back().second; }
    bool contains(const Integer& v) const;
    bool contains_all(const IntervalSet& o) const;
    IntervalSet unite(const IntervalSet& o) const;
    Integer gcd_of_elements() const;
    // Distinct p-adic valuations of the nonzero elements, ascending.
    std::vector<long> valuations(const Integer& p) const;
    bool operator==(const IntervalSet& o) const { return parts == o.parts; }
};

// Image of the points in the box under an integer functional, as multiples of the generator
// gcd(f(basis columns)) > 0. A zero functional yields generator 0 and units {0}.
struct FunctionalImage {
    Integer generator;
    IntervalSet units;
};
FunctionalImage functional_image(const IntMatrix& basis, const IntVector& f, const IntVector& lo,
                                 const IntVector& hi, uint64_t cap);

}  // namespace arvol
