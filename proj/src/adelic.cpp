#include "arvol/adelic.hpp"

#include "arvol/geometry.hpp"
#include "arvol/lp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace arvol {

std::string to_string(NormMode m) { return m == NormMode::CoeffMax ? "coeff-max" : "circle-sup"; }

NormMode parse_norm_mode(const std::string& s) {
    if (s == "coeff-max") return NormMode::CoeffMax;
    if (s == "circle-sup" || s == "circle-sup-interval") return NormMode::CircleSup;
    throw std::invalid_argument("unknown norm mode '" + s + "'");
}

std::string to_string(Kind k) { return k == Kind::Small ? "s" : "ss"; }

AdelicSpace make_space(IntMatrix basis, ArchNorm norm, std::string label) {
    size_t k = basis.ncols();
    for (const auto& c : basis.cols)
        if (c.size() != basis.rows) throw std::invalid_argument("basis column length mismatch");
    AdelicSpace V;
    V.ambient_dim = basis.rows;
    V.basis = hermite_normal_form(basis);
    if (V.basis.ncols() != k) throw std::invalid_argument("basis columns are linearly dependent");
    V.norm = norm;
    V.label = std::move(label);
    return V;
}

// ---------------------------------------------------------------------------------------------
// Supremum on the unit circle.

namespace {

const std::vector<std::complex<double>>& roots_of_unity(size_t n) {
    thread_local std::map<size_t, std::vector<std::complex<double>>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> z(n);
    for (size_t j = 0; j < n; ++j) {
        double th = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
        z[j] = {std::cos(th), std::sin(th)};
    }
    if (cache.size() > 16) cache.clear();
    return cache.emplace(n, std::move(z)).first->second;
}

struct ElementaryBounds {
    Integer l1, cmax, at_one, at_minus_one;
    size_t degree = 0;
    Integer lower() const { return std::max({cmax, at_one, at_minus_one}); }
};

ElementaryBounds elementary(const IntVector& c) {
    ElementaryBounds e;
    Integer s1 = 0, sm = 0;
    for (size_t k = 0; k < c.size(); ++k) {
        Integer a = abs(c[k]);
        e.l1 += a;
        if (a > e.cmax) e.cmax = a;
        s1 += c[k];
        sm += (k % 2 ? -c[k] : c[k]);
        if (c[k] != 0) e.degree = k;
    }
    e.at_one = abs(s1);
    e.at_minus_one = abs(sm);
    return e;
}

}  // namespace

std::optional<Integer> circle_sup_exact(const IntVector& coeffs) {
    auto e = elementary(coeffs);
    if (e.lower() == e.l1) return e.l1;
    return std::nullopt;
}

Enclosure circle_sup(const IntVector& coeffs, size_t grid) {
    auto e = elementary(coeffs);
    double l1 = e.l1.get_d();
    double lower = e.lower().get_d();
    if (e.lower() == e.l1) return {l1, l1};
    size_t d = e.degree;
    size_t n = std::max(grid, static_cast<size_t>(8 * d + 8));
    const auto& z = roots_of_unity(n);
    std::vector<double> c(d + 1);
    for (size_t k = 0; k <= d; ++k) c[k] = coeffs[k].get_d();
    double best = 0;
    for (size_t j = 0; j < n; ++j) {
        std::complex<double> acc = c[d];
        for (size_t k = d; k-- > 0;) acc = acc * z[j] + c[k];
        best = std::max(best, std::abs(acc));
    }
    double err = 1e-15 * static_cast<double>(2 * d + 4) * l1;
    double shrink = 1.0 - M_PI * static_cast<double>(d) / static_cast<double>(n);
    Enclosure enc;
    enc.lo = std::max(best - err, lower);
    enc.hi = std::min((best + err) / shrink * (1 + 1e-15), l1);
    if (enc.hi < enc.lo) enc.hi = enc.lo;
    return enc;
}

Enclosure circle_sup_to_width(const IntVector& coeffs, double rel_width, size_t max_grid) {
    size_t n = 64;
    for (;;) {
        Enclosure enc = circle_sup(coeffs, n);
        if (enc.hi - enc.lo <= rel_width * enc.hi || n >= max_grid) return enc;
        n *= 4;
    }
}

namespace {

Rational exact_double(double x) {
    Rational q(x);
    q.canonicalize();
    return q;
}

// Membership of a value known to lie in [lo, hi] against the threshold exp(scale).
Membership decide(const Rational& lo, const Rational& hi, const LogScale& scale, Kind kind) {
    int chi = compare_with_exp(hi, scale), clo = compare_with_exp(lo, scale);
    if (kind == Kind::StrictlySmall) {
        if (chi < 0) return Membership::In;
        if (clo >= 0) return Membership::Out;
    } else {
        if (chi <= 0) return Membership::In;
        if (clo > 0) return Membership::Out;
    }
    return Membership::Unknown;
}

}  // namespace

Membership classify(const IntVector& x, const ArchNorm& norm, Kind kind) {
    if (norm.mode == NormMode::CoeffMax) {
        Integer b = 0;
        for (const auto& v : x)
            if (abs(v) > b) b = abs(v);
        return decide(Rational(b), Rational(b), norm.scale, kind);
    }
    if (auto ex = circle_sup_exact(x)) return decide(Rational(*ex), Rational(*ex), norm.scale, kind);
    auto e = elementary(x);
    // The coefficient bounds already decide many vectors without any evaluation.
    Membership m = decide(Rational(e.lower()), Rational(e.l1), norm.scale, kind);
    if (m != Membership::Unknown) return m;
    for (size_t n = std::max<size_t>(64, 16 * e.degree); n <= (size_t(1) << 16); n *= 8) {
        Enclosure enc = circle_sup(x, n);
        m = decide(exact_double(enc.lo), exact_double(enc.hi), norm.scale, kind);
        if (m != Membership::Unknown) return m;
    }
    return Membership::Unknown;
}

Integer candidate_radius(const ArchNorm& norm, Kind kind) {
    // Both base norms dominate every coefficient, so the coefficient box is a certified superset.
    return floor_exp(norm.scale, kind == Kind::StrictlySmall);
}

namespace {

IntVector filled(size_t n, const Integer& v) { return IntVector(n, v); }

}  // namespace

SectionList enumerate_small_sections(const AdelicSpace& V, Kind kind, uint64_t cap) {
    Integer R = candidate_radius(V.norm, kind);
    auto pts = list_points(V.basis, filled(V.ambient_dim, -R), filled(V.ambient_dim, R), cap);
    SectionList out;
    Integer lo = 0, hi = 0;
    for (auto& x : pts) {
        Membership m = V.norm.mode == NormMode::CoeffMax ? Membership::In : classify(x, V.norm, kind);
        if (m == Membership::Out) continue;
        bool sure = m == Membership::In;
        if (sure) ++lo;
        ++hi;
        out.vectors.push_back(std::move(x));
        out.certain.push_back(sure);
    }
    out.count = {lo, hi};
    return out;
}

CountInterval count_small_sections(const AdelicSpace& V, Kind kind, uint64_t cap) {
    if (V.norm.mode == NormMode::CoeffMax) {
        Integer R = candidate_radius(V.norm, kind);
        Integer n = count_points(V.basis, filled(V.ambient_dim, -R), filled(V.ambient_dim, R), cap);
        return {n, n};
    }
    return enumerate_small_sections(V, kind, cap).count;
}

AdelicSpace rescale(const AdelicSpace& V, const LogScale& lambda) {
    AdelicSpace W = V;
    W.norm.scale = V.norm.scale + lambda;
    return W;
}

AdelicSpace subspace(const AdelicSpace& V, const IntMatrix& sublattice) {
    if (sublattice.rows != V.ambient_dim) throw std::invalid_argument("sublattice dimension mismatch");
    for (const auto& c : sublattice.cols)
        if (!lattice_coordinates(V.basis, c)) throw std::invalid_argument("sublattice vector not in the lattice");
    AdelicSpace W = V;
    W.basis = hermite_normal_form(sublattice);
    return W;
}

// ---------------------------------------------------------------------------------------------
// Linear maps.

namespace {

// Rows of the map scaled to integers, one common denominator for the whole matrix.
std::pair<std::vector<IntVector>, Integer> integral_rows(const RatMatrix& M) {
    Integer D = 1;
    for (const auto& row : M.entries)
        for (const auto& q : row) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), q.get_den_mpz_t());
    std::vector<IntVector> rows;
    for (const auto& row : M.entries) {
        IntVector r;
        for (const auto& q : row) r.push_back(Integer(q * D));
        rows.push_back(std::move(r));
    }
    return {rows, D};
}

Integer dot(const IntVector& a, const IntVector& b) {
    Integer s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

void check_map(const AdelicSpace& V, const RatMatrix& M) {
    if (M.ncols != V.ambient_dim) throw std::invalid_argument("map domain dimension mismatch");
    for (const auto& row : M.entries)
        if (row.size() != M.ncols) throw std::invalid_argument("map row length mismatch");
}

bool is_zero_map(const RatMatrix& M) {
    for (const auto& row : M.entries)
        for (const auto& q : row)
            if (q != 0) return false;
    return true;
}

// Distinct output coordinates when every row is a unit vector.
std::optional<std::vector<size_t>> as_projection(const RatMatrix& M) {
    std::vector<size_t> coords;
    for (const auto& row : M.entries) {
        long hit = -1;
        for (size_t j = 0; j < row.size(); ++j) {
            if (row[j] == 0) continue;
            if (row[j] != 1 || hit >= 0) return std::nullopt;
            hit = static_cast<long>(j);
        }
        if (hit < 0) return std::nullopt;
        coords.push_back(static_cast<size_t>(hit));
    }
    std::vector<size_t> sorted = coords;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
    return sorted;
}

// A single row spanning the row space, if the rows have rank at most 1.
std::optional<IntVector> rank_one_row(const std::vector<IntVector>& rows) {
    const IntVector* lead = nullptr;
    for (const auto& r : rows)
        if (std::any_of(r.begin(), r.end(), [](const Integer& v) { return v != 0; })) {
            lead = &r;
            break;
        }
    if (!lead) return std::nullopt;
    for (const auto& r : rows)
        for (size_t i = 0; i < r.size(); ++i)
            for (size_t j = i + 1; j < r.size(); ++j)
                if (r[i] * (*lead)[j] != r[j] * (*lead)[i]) return std::nullopt;
    return *lead;
}

}  // namespace

LinearMap make_linear_map(const RatMatrix& matrix, const AdelicSpace& V) {
    check_map(V, matrix);
    auto [rows, D] = integral_rows(matrix);
    IntMatrix A;  // rows x rank, the map in lattice coordinates
    A.rows = rows.size();
    for (const auto& col : V.basis.cols) {
        IntVector c;
        for (const auto& r : rows) c.push_back(dot(r, col));
        A.cols.push_back(std::move(c));
    }
    IntMatrix Z = integer_kernel(A);
    IntMatrix K{V.ambient_dim, {}};
    for (const auto& z : Z.cols) K.cols.push_back(combine(V.basis, z));
    return {matrix, hermite_normal_form(K)};
}

RatMatrix coordinate_projection(size_t ambient_dim, const std::vector<size_t>& coords) {
    RatMatrix M;
    M.rows = coords.size();
    M.ncols = ambient_dim;
    for (size_t c : coords) {
        if (c >= ambient_dim) throw std::invalid_argument("projection coordinate out of range");
        RatVector row(ambient_dim, Rational(0));
        row[c] = 1;
        M.entries.push_back(std::move(row));
    }
    return M;
}

CountInterval image_count(const AdelicSpace& V, const RatMatrix& map, Kind kind, uint64_t cap) {
    check_map(V, map);
    if (is_zero_map(map)) return {1, 1};
    {
        // Injective on the lattice: the image has as many points as the section set.
        auto [rows, D] = integral_rows(map);
        IntMatrix MB{rows.size(), {}};
        for (const auto& col : V.basis.cols) {
            IntVector c;
            for (const auto& r : rows) c.push_back(dot(r, col));
            MB.cols.push_back(std::move(c));
        }
        if (hermite_normal_form(MB).ncols() == V.rank()) return count_small_sections(V, kind, cap);
    }
    if (V.norm.mode == NormMode::CoeffMax) {
        Integer R = candidate_radius(V.norm, kind);
        IntVector lo = filled(V.ambient_dim, -R), hi = filled(V.ambient_dim, R);
        if (auto coords = as_projection(map)) {
            Integer n = projection_count(V.basis, *coords, lo, hi, cap);
            return {n, n};
        }
        auto [rows, D] = integral_rows(map);
        if (auto f = rank_one_row(rows)) {
            Integer n = functional_image(V.basis, *f, lo, hi, cap).units.size();
            return {n, n};
        }
    }
    auto sections = enumerate_small_sections(V, kind, cap);
    std::set<RatVector> sure, all;
    for (size_t i = 0; i < sections.vectors.size(); ++i) {
        RatVector y = map.apply(sections.vectors[i]);
        if (sections.certain[i]) sure.insert(y);
        all.insert(std::move(y));
    }
    return {Integer(static_cast<unsigned long>(sure.size())), Integer(static_cast<unsigned long>(all.size()))};
}

// ---------------------------------------------------------------------------------------------
// CL-hull.

std::vector<RatVector> cl_hull(const std::vector<RatVector>& vectors, uint64_t cap) {
    if (vectors.empty()) return {};
    size_t n = vectors[0].size();
    for (const auto& v : vectors)
        if (v.size() != n) throw std::invalid_argument("cl_hull: dimension mismatch");
    Integer D = 1;
    for (const auto& v : vectors)
        for (const auto& q : v) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), q.get_den_mpz_t());
    IntMatrix gens{n, {}};
    std::vector<IntVector> scaled;
    for (const auto& v : vectors) {
        IntVector s;
        for (const auto& q : v) s.push_back(Integer(q * D));
        scaled.push_back(s);
        gens.cols.push_back(std::move(s));
    }
    IntMatrix L = hermite_normal_form(gens);
    size_t k = L.ncols();
    if (k > 3) throw std::invalid_argument("cl_hull: span rank " + std::to_string(k) + " exceeds 3");
    if (k == 0) return {RatVector(n, Rational(0))};

    std::vector<Point> coords;
    for (const auto& s : scaled) {
        IntVector z = *lattice_coordinates(L, s);
        Point p;
        for (const auto& c : z) p.push_back(Rational(c));
        coords.push_back(std::move(p));
    }
    RationalPolytope P = convex_hull(coords, static_cast<int>(k));
    IntVector zlo(k), zhi(k);
    for (size_t i = 0; i < k; ++i) {
        zlo[i] = ceil_of(P.vertices[0][i]);
        zhi[i] = floor_of(P.vertices[0][i]);
        for (const auto& v : P.vertices) {
            zlo[i] = std::min(zlo[i], ceil_of(v[i]));
            zhi[i] = std::max(zhi[i], floor_of(v[i]));
        }
    }
    Integer box = 1;
    for (size_t i = 0; i < k; ++i) box *= zhi[i] - zlo[i] + 1;
    if (box > cap) throw CapExceeded("cl_hull box exceeds cap");

    std::vector<RatVector> out;
    IntVector z = zlo;
    for (;;) {
        Point p;
        for (const auto& c : z) p.push_back(Rational(c));
        if (contains(P, p)) {
            IntVector x = combine(L, z);
            RatVector r;
            for (const auto& c : x) r.push_back(Rational(c, D));
            for (auto& q : r) q.canonicalize();
            out.push_back(std::move(r));
        }
        size_t i = 0;
        while (i < k && z[i] == zhi[i]) z[i] = zlo[i], ++i;
        if (i == k) break;
        ++z[i];
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------------------------
// Quotient norms.

namespace {

std::vector<std::vector<size_t>> column_blocks(const IntMatrix& B) {
    size_t k = B.ncols();
    std::vector<size_t> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    std::vector<long> owner(B.rows, -1);
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < B.rows; ++i) {
            if (B.cols[j][i] == 0) continue;
            if (owner[i] < 0) {
                owner[i] = static_cast<long>(j);
            } else {
                size_t a = find(j), b = find(static_cast<size_t>(owner[i]));
                if (a != b) parent[a] = b;
            }
        }
    std::map<size_t, std::vector<size_t>> groups;
    for (size_t j = 0; j < k; ++j) groups[find(j)].push_back(j);
    std::vector<std::vector<size_t>> out;
    for (auto& [r, g] : groups) out.push_back(std::move(g));
    return out;
}

// max f.(B y) subject to |(B y)_i| <= 1, solved exactly.
FunctionalSup block_sup(const IntMatrix& B, const IntVector& f) {
    size_t k = B.ncols(), n = B.rows;
    std::vector<size_t> rows;
    for (size_t i = 0; i < n; ++i)
        if (std::any_of(B.cols.begin(), B.cols.end(), [&](const IntVector& c) { return c[i] != 0; }))
            rows.push_back(i);
    size_t r = rows.size(), nv = 2 * k + 2 * r;
    std::vector<RatVector> A;
    RatVector b;
    for (size_t t = 0; t < r; ++t) {
        for (int sign : {1, -1}) {
            RatVector row(nv, Rational(0));
            for (size_t j = 0; j < k; ++j) {
                row[j] = sign * B.cols[j][rows[t]];
                row[k + j] = -sign * B.cols[j][rows[t]];
            }
            row[2 * k + 2 * t + (sign > 0 ? 0 : 1)] = 1;
            A.push_back(std::move(row));
            b.push_back(1);
        }
    }
    RatVector c(nv, Rational(0));
    for (size_t j = 0; j < k; ++j) {
        Rational fj = dot(f, B.cols[j]);
        c[j] = -fj;
        c[k + j] = fj;
    }
    LpResult res = minimize_standard(A, b, c);
    if (res.status != LpResult::Optimal) throw std::logic_error("functional sup LP did not reach an optimum");
    FunctionalSup out;
    out.value = -res.value;
    out.argmax.assign(n, Rational(0));
    for (size_t j = 0; j < k; ++j) {
        Rational y = res.x[j] - res.x[k + j];
        if (y == 0) continue;
        for (size_t i = 0; i < n; ++i) out.argmax[i] += y * B.cols[j][i];
    }
    return out;
}

}  // namespace

FunctionalSup functional_sup(const IntMatrix& basis, const IntVector& f) {
    if (f.size() != basis.rows) throw std::invalid_argument("functional length mismatch");
    FunctionalSup out;
    out.value = 0;
    out.argmax.assign(basis.rows, Rational(0));
    for (const auto& cols : column_blocks(basis)) {
        bool touched = std::any_of(cols.begin(), cols.end(), [&](size_t j) { return dot(f, basis.cols[j]) != 0; });
        if (!touched) continue;
        if (cols.size() == 1) {
            const IntVector& c = basis.cols[cols[0]];
            Integer fc = dot(f, c), cmax = 0;
            for (const auto& v : c) cmax = std::max(cmax, Integer(abs(v)));
            out.value += Rational(abs(fc), cmax);
            for (size_t i = 0; i < c.size(); ++i)
                if (c[i] != 0) out.argmax[i] = Rational(fc > 0 ? c[i] : Integer(-c[i]), cmax);
            continue;
        }
        IntMatrix B{basis.rows, {}};
        for (size_t j : cols) B.cols.push_back(basis.cols[j]);
        auto part = block_sup(B, f);
        out.value += part.value;
        for (size_t i = 0; i < basis.rows; ++i) out.argmax[i] += part.argmax[i];
    }
    for (auto& q : out.argmax) q.canonicalize();
    return out;
}

namespace {

// Upper bound for the circle norm of a rational vector, as an exact rational.
Rational circle_upper(const RatVector& x) {
    Integer L = 1;
    for (const auto& q : x) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), q.get_den_mpz_t());
    IntVector c;
    for (const auto& q : x) c.push_back(Integer(q * L));
    if (auto ex = circle_sup_exact(c)) return Rational(*ex, L);
    Enclosure e = circle_sup_to_width(c, 1e-9, size_t(1) << 16);
    Rational hi = exact_double(e.hi);
    Rational l1 = 0;
    for (const auto& v : c) l1 += abs(v);
    return std::min(hi, l1) / L;
}

}  // namespace

QuotientUnits quotient_units(const AdelicSpace& V, const IntVector& f, const Integer& denominator) {
    if (f.size() != V.ambient_dim) throw std::invalid_argument("functional length mismatch");
    if (denominator <= 0) throw std::invalid_argument("functional denominator must be positive");
    QuotientUnits q;
    q.denominator = denominator;
    q.generator = 0;
    for (const auto& c : V.basis.cols) {
        Integer v = dot(f, c);
        mpz_gcd(q.generator.get_mpz_t(), q.generator.get_mpz_t(), v.get_mpz_t());
    }
    q.certain_radius = q.possible_radius = 0;
    if (q.generator == 0) return q;
    // Quotient coeff-max norm of u * g / den is |u| g / S, with S the sup of f on the unit cube of the span.
    FunctionalSup sup = functional_sup(V.basis, f);
    LogScale coeff_limit = V.norm.scale + LogScale::log(sup.value / q.generator);
    q.possible_radius = floor_exp(coeff_limit, true);
    if (V.norm.mode == NormMode::CoeffMax) {
        q.certain_radius = q.possible_radius;
        return q;
    }
    // The circle norm dominates the coefficient norm; scaling the maximizer gives a preimage whose
    // circle norm is |u| g C / S with C the circle norm of the maximizer.
    Rational C = circle_upper(sup.argmax);
    q.certain_radius = floor_exp(V.norm.scale + LogScale::log(sup.value / (q.generator * C)), true);
    return q;
}

QuotientSections quotient_norm_sections(const AdelicSpace& V, const RatMatrix& map, uint64_t cap) {
    check_map(V, map);
    QuotientSections out;
    size_t nout = map.rows;
    if (is_zero_map(map)) {
        out.elements.push_back(RatVector(nout, Rational(0)));
        out.count = {1, 1};
        return out;
    }
    auto [rows, D] = integral_rows(map);
    if (nout == 1) {
        QuotientUnits q = quotient_units(V, rows[0], D);
        out.count = q.count();
        if (2 * q.certain_radius + 1 > cap) throw CapExceeded("quotient image exceeds cap");
        for (Integer u = -q.certain_radius; u <= q.certain_radius; ++u) {
            Rational y(u * q.generator, D);
            y.canonicalize();
            out.elements.push_back({y});
        }
        return out;
    }

    // Image lattice in the scaled coordinates D * map.
    size_t k = V.rank(), n = V.ambient_dim;
    IntMatrix MB{nout, {}};
    for (const auto& col : V.basis.cols) {
        IntVector c;
        for (const auto& r : rows) c.push_back(dot(r, col));
        MB.cols.push_back(std::move(c));
    }
    IntMatrix image = hermite_normal_form(MB);
    IntVector lo(nout), hi(nout);
    for (size_t j = 0; j < nout; ++j) {
        Integer rs = 0;
        for (const auto& v : rows[j]) rs += abs(v);
        Integer R = rs == 0 ? Integer(0) : floor_exp(V.norm.scale + LogScale::log(Rational(rs)), false);
        lo[j] = -R;
        hi[j] = R;
    }
    auto candidates = list_points(image, lo, hi, cap);

    // min t subject to D map (B z) = y, |(B z)_i| <= t; variables z+, z-, t, then slacks.
    size_t nv = 2 * k + 1 + 2 * n;
    Integer sure = 0, maybe = 0;
    for (const auto& y : candidates) {
        std::vector<RatVector> A;
        RatVector b;
        for (size_t j = 0; j < nout; ++j) {
            RatVector row(nv, Rational(0));
            for (size_t c = 0; c < k; ++c) {
                row[c] = MB.cols[c][j];
                row[k + c] = -MB.cols[c][j];
            }
            A.push_back(std::move(row));
            b.push_back(y[j]);
        }
        for (size_t i = 0; i < n; ++i)
            for (int sign : {1, -1}) {
                RatVector row(nv, Rational(0));
                for (size_t c = 0; c < k; ++c) {
                    row[c] = -sign * V.basis.cols[c][i];
                    row[k + c] = sign * V.basis.cols[c][i];
                }
                row[2 * k] = 1;
                row[2 * k + 1 + 2 * i + (sign > 0 ? 0 : 1)] = -1;
                A.push_back(std::move(row));
                b.push_back(0);
            }
        RatVector c(nv, Rational(0));
        c[2 * k] = 1;
        LpResult res = minimize_standard(A, b, c);
        if (res.status != LpResult::Optimal) throw std::logic_error("quotient norm LP failed on an image point");
        if (compare_with_exp(res.value, V.norm.scale) >= 0) continue;
        ++maybe;
        bool certain = true;
        if (V.norm.mode == NormMode::CircleSup) {
            RatVector x(n, Rational(0));
            for (size_t cidx = 0; cidx < k; ++cidx) {
                Rational zc = res.x[cidx] - res.x[k + cidx];
                if (zc == 0) continue;
                for (size_t i = 0; i < n; ++i) x[i] += zc * V.basis.cols[cidx][i];
            }
            certain = compare_with_exp(circle_upper(x), V.norm.scale) < 0;
        }
        if (!certain) continue;
        ++sure;
        RatVector yv;
        for (const auto& v : y) {
            Rational q(v, D);
            q.canonicalize();
            yv.push_back(q);
        }
        out.elements.push_back(std::move(yv));
    }
    std::sort(out.elements.begin(), out.elements.end());
    out.count = {sure, maybe};
    return out;
}

// ---------------------------------------------------------------------------------------------
// Counting inequalities.

std::string to_string(CountingKind k) {
    switch (k) {
        case CountingKind::Rescale: return "rescale";
        case CountingKind::ExactSeq: return "exact_seq";
        case CountingKind::Combined: return "combined";
        case CountingKind::Filtration: return "filtration";
        case CountingKind::QuotExact: return "quot_exact";
    }
    return "";
}

CountingKind parse_counting_kind(const std::string& s) {
    for (auto k : {CountingKind::Rescale, CountingKind::ExactSeq, CountingKind::Combined, CountingKind::Filtration,
                   CountingKind::QuotExact})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown counting kind '" + s + "'");
}

namespace {

double lg(const Integer& n) { return log_of(n); }

Integer exact_count(const AdelicSpace& V, Kind star, uint64_t cap) { return count_small_sections(V, star, cap).lo; }

Integer exact_image(const AdelicSpace& V, const RatMatrix& M, Kind star, uint64_t cap) {
    return image_count(V, M, star, cap).lo;
}

const LogScale kLog2 = LogScale::log(2);

InequalityCheck product_check(std::string label, Kind star, long index, const Integer& lhs_count,
                              const Integer& rhs_count, const Integer& factor) {
    // log lhs <= log rhs + log factor
    InequalityCheck c{std::move(label), star, {}};
    c.report = one_sided(index, lg(lhs_count), lg(rhs_count), lg(factor), lhs_count <= rhs_count * factor);
    return c;
}

}  // namespace

std::vector<InequalityCheck> verify_counting_inequality(const CountingInstance& inst, uint64_t cap, long index) {
    const AdelicSpace& V = inst.space;
    if (V.norm.mode != NormMode::CoeffMax)
        throw std::invalid_argument("counting inequalities need exact norms (coeff-max mode)");
    std::vector<InequalityCheck> out;
    long rk = static_cast<long>(V.rank());
    for (Kind star : {Kind::StrictlySmall, Kind::Small}) {
        switch (inst.kind) {
            case CountingKind::Rescale: {
                if (inst.shift.value() < 0) throw std::invalid_argument("rescale amount must be nonnegative");
                Integer n0 = exact_count(V, star, cap), n1 = exact_count(rescale(V, inst.shift), star, cap);
                out.push_back(product_check("rescale.lower", star, index, n0, n1, 1));
                // log n1 <= log n0 + (shift + log 3) rk
                LogScale t = inst.shift.times(rk) + LogScale::log(Rational(power(Integer(3), rk)));
                bool ok = compare_with_exp(Rational(n1, n0), t) <= 0;
                InequalityCheck c{"rescale.upper", star, {}};
                c.report = one_sided(index, lg(n1), lg(n0), t.value(), ok);
                out.push_back(c);
                break;
            }
            case CountingKind::ExactSeq:
            case CountingKind::Combined: {
                AdelicSpace W = subspace(V, make_linear_map(inst.map, V).kernel_basis);
                Integer nv = exact_count(V, star, cap), nw = exact_count(W, star, cap);
                Integer img = exact_image(V, inst.map, star, cap);
                if (inst.kind == CountingKind::ExactSeq) {
                    Integer nw2 = exact_count(rescale(W, kLog2), star, cap);
                    Integer nv2 = exact_count(rescale(V, kLog2), star, cap);
                    out.push_back(product_check("exact_seq.upper", star, index, nv, nw2 * img, 1));
                    out.push_back(product_check("exact_seq.lower", star, index, nw * img, nv2, 1));
                } else {
                    long rkw = static_cast<long>(W.rank());
                    out.push_back(product_check("combined.lower", star, index, nw * img, nv, power(Integer(6), rk)));
                    out.push_back(product_check("combined.upper", star, index, nv, nw * img, power(Integer(6), rkw)));
                }
                break;
            }
            case CountingKind::Filtration: {
                size_t l = inst.chain.size();
                if (l == 0 || inst.chain_maps.size() != l) throw std::invalid_argument("filtration needs one map per step");
                Integer prod = 1;
                for (size_t j = 0; j < l; ++j) {
                    AdelicSpace Vj = subspace(V, inst.chain[j]);
                    prod *= exact_image(Vj, inst.chain_maps[j], star, cap);
                }
                Integer top = exact_count(rescale(V, LogScale::log(Rational(static_cast<long>(l)))), star, cap);
                out.push_back(product_check("filtration", star, index, prod, top, 1));
                break;
            }
            case CountingKind::QuotExact: {
                AdelicSpace W = subspace(V, make_linear_map(inst.second_map, V).kernel_basis);
                Integer rv = exact_image(V, inst.map, star, cap);
                Integer rw2 = exact_image(rescale(W, kLog2), inst.map, star, cap);
                Integer rpv = exact_image(V, inst.second_map, star, cap);
                Integer rw = exact_image(W, inst.map, star, cap);
                Integer rv2 = exact_image(rescale(V, kLog2), inst.map, star, cap);
                out.push_back(product_check("quot.upper", star, index, rv, rw2 * rpv, 1));
                out.push_back(product_check("quot.lower", star, index, rw * rpv, rv2, 1));
                break;
            }
        }
    }
    return out;
}

namespace {

long uniform(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Rational random_scale(std::mt19937_64& rng) {
    static const long dens[] = {1, 2, 3, 4, 6, 8};
    long d = dens[uniform(rng, 0, 5)];
    Rational q(uniform(rng, 0, 2 * d), d);
    q.canonicalize();
    return q;
}

std::vector<size_t> first_coords(size_t s) {
    std::vector<size_t> c(s);
    std::iota(c.begin(), c.end(), 0);
    return c;
}

IntMatrix columns_from(const IntMatrix& B, size_t start) {
    IntMatrix out{B.rows, {}};
    for (size_t j = start; j < B.ncols(); ++j) out.cols.push_back(B.cols[j]);
    return out;
}

}  // namespace

CountingInstance random_counting_instance(CountingKind kind, std::mt19937_64& rng, int max_rank) {
    static const long diag_choices[] = {1, 1, 1, 2, 3};
    size_t n = static_cast<size_t>(uniform(rng, 1, max_rank));
    IntMatrix B{n, std::vector<IntVector>(n, IntVector(n, Integer(0)))};
    std::vector<long> diag(n);
    for (size_t i = 0; i < n; ++i) diag[i] = diag_choices[uniform(rng, 0, 4)];
    for (size_t j = 0; j < n; ++j) {
        B.cols[j][j] = diag[j];
        for (size_t i = j + 1; i < n; ++i) B.cols[j][i] = uniform(rng, 0, diag[i] - 1);
    }
    CountingInstance inst;
    inst.kind = kind;
    inst.space = make_space(B, ArchNorm{NormMode::CoeffMax, LogScale::of(random_scale(rng))}, "random");
    const IntMatrix& H = inst.space.basis;
    switch (kind) {
        case CountingKind::Rescale:
            inst.shift = LogScale::of(random_scale(rng));
            break;
        case CountingKind::ExactSeq:
        case CountingKind::Combined: {
            size_t s = static_cast<size_t>(uniform(rng, 1, static_cast<long>(std::min<size_t>(3, n))));
            inst.map = coordinate_projection(n, first_coords(s));
            break;
        }
        case CountingKind::QuotExact: {
            size_t t = static_cast<size_t>(uniform(rng, 1, static_cast<long>(std::min<size_t>(3, n))));
            size_t s = static_cast<size_t>(uniform(rng, 0, static_cast<long>(t) - 1));
            inst.map = coordinate_projection(n, first_coords(t));
            inst.second_map = coordinate_projection(n, first_coords(s));
            break;
        }
        case CountingKind::Filtration: {
            size_t c = 0;
            while (c < n) {
                size_t width = n - c;
                if (width > 2 && uniform(rng, 0, 2) != 0) width = static_cast<size_t>(uniform(rng, 1, 2));
                inst.chain.push_back(columns_from(H, c));
                std::vector<size_t> rows;
                for (size_t i = c; i < c + width; ++i) rows.push_back(i);
                inst.chain_maps.push_back(coordinate_projection(n, rows));
                c += width;
            }
            break;
        }
    }
    return inst;
}

bool LemmaSuiteReport::all_satisfied() const {
    return std::all_of(kinds.begin(), kinds.end(), [](const LemmaKindSummary& k) { return k.violations == 0; });
}

LemmaSuiteReport run_lemma_suite(const std::vector<CountingKind>& kinds, long instances, uint64_t seed, uint64_t cap) {
    if (instances < 0) throw std::invalid_argument("instance count must be nonnegative");
    LemmaSuiteReport out;
    out.seed = seed;
    std::mt19937_64 rng(seed);
    for (CountingKind kind : kinds) {
        LemmaKindSummary sum;
        sum.kind = kind;
        for (long i = 0; i < instances; ++i) {
            LemmaEntry e;
            e.kind = kind;
            e.index = i;
            e.checks = verify_counting_inequality(random_counting_instance(kind, rng), cap, i);
            for (const auto& c : e.checks) {
                ++sum.checks;
                if (!c.report.satisfied) {
                    e.satisfied = false;
                    ++sum.violations;
                }
            }
            ++sum.instances;
            out.entries.push_back(std::move(e));
        }
        out.kinds.push_back(sum);
    }
    return out;
}

}  // namespace arvol
