#include "arvol/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace arvol {

IntVector RatMatrix::apply_int(const IntVector& x) const {
    RatVector r = apply(x);
    IntVector out(r.size());
    for (size_t i = 0; i < r.size(); ++i) {
        if (r[i].get_den() != 1) throw std::logic_error("non-integral image value");
        out[i] = r[i].get_num();
    }
    return out;
}

RatVector RatMatrix::apply(const IntVector& x) const {
    if (x.size() != ncols) throw std::invalid_argument("map input dimension mismatch");
    RatVector out(rows, Rational(0));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < ncols; ++j)
            if (entries[i][j] != 0 && x[j] != 0) out[i] += entries[i][j] * x[j];
    return out;
}

namespace {

bool is_zero(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Integer& a) { return a == 0; });
}

void axpy(IntVector& y, const Integer& a, const IntVector& x) {
    if (a == 0) return;
    for (size_t i = 0; i < y.size(); ++i)
        if (x[i] != 0) y[i] += a * x[i];
}

// Column elimination over the rows in `order`. Returns pivot columns in order of their pivot
// rows; `rest` receives the columns that vanish on all processed rows.
std::vector<IntVector> eliminate(std::vector<IntVector> cols, const std::vector<size_t>& order,
                                 std::vector<IntVector>* rest, std::vector<size_t>* pivots_out) {
    std::vector<IntVector> pivots;
    for (size_t r : order) {
        std::vector<size_t> idx;
        for (size_t j = 0; j < cols.size(); ++j)
            if (cols[j][r] != 0) idx.push_back(j);
        if (idx.empty()) continue;
        while (idx.size() > 1) {
            size_t best = idx[0];
            for (size_t j : idx)
                if (abs(cols[j][r]) < abs(cols[best][r])) best = j;
            std::vector<size_t> next{best};
            for (size_t j : idx) {
                if (j == best) continue;
                Integer q;
                mpz_tdiv_q(q.get_mpz_t(), cols[j][r].get_mpz_t(), cols[best][r].get_mpz_t());
                axpy(cols[j], -q, cols[best]);
                if (cols[j][r] != 0) next.push_back(j);
            }
            idx = std::move(next);
        }
        size_t j = idx[0];
        if (cols[j][r] < 0)
            for (auto& e : cols[j]) e = -e;
        pivots.push_back(cols[j]);
        if (pivots_out) pivots_out->push_back(r);
        cols.erase(cols.begin() + static_cast<long>(j));
    }
    if (rest) *rest = std::move(cols);
    return pivots;
}

}  // namespace

IntMatrix echelon_in_order(const IntMatrix& m, const std::vector<size_t>& row_order) {
    std::vector<IntVector> cols;
    for (const auto& c : m.cols) {
        if (c.size() != m.rows) throw std::invalid_argument("column length mismatch");
        if (!is_zero(c)) cols.push_back(c);
    }
    std::vector<size_t> prow;
    auto piv = eliminate(std::move(cols), row_order, nullptr, &prow);
    for (size_t j = 0; j < piv.size(); ++j) {
        const Integer& d = piv[j][prow[j]];
        for (size_t l = 0; l < j; ++l) {
            Integer q = floor_of(Rational(piv[l][prow[j]], d));
            axpy(piv[l], -q, piv[j]);
        }
    }
    return IntMatrix{m.rows, std::move(piv)};
}

IntMatrix hermite_normal_form(const IntMatrix& m) {
    std::vector<size_t> order(m.rows);
    std::iota(order.begin(), order.end(), 0);
    return echelon_in_order(m, order);
}

std::vector<size_t> pivot_rows(const IntMatrix& hnf) {
    std::vector<size_t> out;
    for (const auto& c : hnf.cols) {
        size_t r = 0;
        while (r < c.size() && c[r] == 0) ++r;
        out.push_back(r);
    }
    return out;
}

IntMatrix integer_kernel(const IntMatrix& a) {
    size_t k = a.ncols();
    std::vector<IntVector> ext;
    for (size_t j = 0; j < k; ++j) {
        IntVector c(a.rows + k, Integer(0));
        for (size_t i = 0; i < a.rows; ++i) c[i] = a.cols[j][i];
        c[a.rows + j] = 1;
        ext.push_back(std::move(c));
    }
    std::vector<size_t> order(a.rows);
    std::iota(order.begin(), order.end(), 0);
    std::vector<IntVector> rest;
    eliminate(std::move(ext), order, &rest, nullptr);
    IntMatrix ker{k, {}};
    for (auto& c : rest) ker.cols.emplace_back(c.begin() + static_cast<long>(a.rows), c.end());
    return hermite_normal_form(ker);
}

IntVector combine(const IntMatrix& basis, const IntVector& z) {
    IntVector x(basis.rows, Integer(0));
    for (size_t j = 0; j < basis.ncols(); ++j) axpy(x, z[j], basis.cols[j]);
    return x;
}

std::optional<IntVector> lattice_coordinates(const IntMatrix& hnf, const IntVector& x) {
    if (x.size() != hnf.rows) throw std::invalid_argument("vector length mismatch");
    auto prow = pivot_rows(hnf);
    IntVector residual = x, z(hnf.ncols());
    for (size_t j = 0; j < hnf.ncols(); ++j) {
        const Integer& d = hnf.cols[j][prow[j]];
        if (!mpz_divisible_p(residual[prow[j]].get_mpz_t(), d.get_mpz_t())) return std::nullopt;
        z[j] = residual[prow[j]] / d;
        axpy(residual, -z[j], hnf.cols[j]);
    }
    if (!is_zero(residual)) return std::nullopt;
    return z;
}

namespace {

struct Block {
    std::vector<size_t> rows;
    std::vector<size_t> cols;
};

size_t find_root(std::vector<size_t>& parent, size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
}

// Groups columns that share a nonzero row; `free_rows` receives rows no column touches.
std::vector<Block> decompose(const IntMatrix& basis, std::vector<size_t>* free_rows) {
    size_t k = basis.ncols();
    std::vector<size_t> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<long> owner(basis.rows, -1);
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < basis.rows; ++i) {
            if (basis.cols[j][i] == 0) continue;
            if (owner[i] < 0) {
                owner[i] = static_cast<long>(j);
            } else {
                size_t a = find_root(parent, j), b = find_root(parent, static_cast<size_t>(owner[i]));
                if (a != b) parent[a] = b;
            }
        }
    std::map<size_t, Block> blocks;
    for (size_t j = 0; j < k; ++j) blocks[find_root(parent, j)].cols.push_back(j);
    for (size_t i = 0; i < basis.rows; ++i) {
        if (owner[i] < 0) {
            if (free_rows) free_rows->push_back(i);
        } else {
            blocks[find_root(parent, static_cast<size_t>(owner[i]))].rows.push_back(i);
        }
    }
    std::vector<Block> out;
    for (auto& [root, b] : blocks) out.push_back(std::move(b));
    return out;
}

struct SubProblem {
    IntMatrix basis;  // rows restricted to the block, echelon
    IntVector lo, hi;
};

SubProblem restrict_block(const IntMatrix& basis, const Block& b, const IntVector& lo, const IntVector& hi) {
    SubProblem s;
    s.basis.rows = b.rows.size();
    for (size_t j : b.cols) {
        IntVector c;
        for (size_t i : b.rows) c.push_back(basis.cols[j][i]);
        s.basis.cols.push_back(std::move(c));
    }
    for (size_t i : b.rows) {
        s.lo.push_back(lo[i]);
        s.hi.push_back(hi[i]);
    }
    return s;
}

// z range allowed by lo <= res + c*z <= hi; returns false when empty.
bool narrow(const Integer& c, const Integer& res, const Integer& lo, const Integer& hi, Integer& zlo, Integer& zhi,
            bool& bounded) {
    if (c == 0) return lo <= res && res <= hi;
    Integer a = lo - res, b = hi - res;
    Integer l, h;
    if (c > 0) {
        mpz_cdiv_q(l.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
        mpz_fdiv_q(h.get_mpz_t(), b.get_mpz_t(), c.get_mpz_t());
    } else {
        mpz_cdiv_q(l.get_mpz_t(), b.get_mpz_t(), c.get_mpz_t());
        mpz_fdiv_q(h.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
    }
    if (!bounded) {
        zlo = l;
        zhi = h;
        bounded = true;
    } else {
        if (l > zlo) zlo = l;
        if (h < zhi) zhi = h;
    }
    return zlo <= zhi;
}

// Depth-first walk over echelon coordinates. Counting mode memoizes on the residual vector.
class Walker {
public:
    Walker(const IntMatrix& basis, const IntVector& lo, const IntVector& hi, uint64_t cap)
        : b_(basis), lo_(lo), hi_(hi), cap_(cap), piv_(pivot_rows(basis)), memo_(basis.ncols()) {}

    Integer count() {
        if (!leading_rows_ok()) return 0;
        if (b_.ncols() == 0) return 1;
        IntVector res(b_.rows, Integer(0));
        return count_level(0, res);
    }

    std::vector<IntVector> list() {
        std::vector<IntVector> out;
        if (!leading_rows_ok()) return out;
        IntVector res(b_.rows, Integer(0));
        if (b_.ncols() == 0) {
            out.push_back(res);
            return out;
        }
        list_level(0, res, out);
        return out;
    }

private:
    bool leading_rows_ok() const {
        size_t first = b_.ncols() ? piv_[0] : b_.rows;
        for (size_t i = 0; i < first; ++i)
            if (lo_[i] > 0 || hi_[i] < 0) return false;
        return true;
    }

    size_t level_end(size_t j) const { return j + 1 < b_.ncols() ? piv_[j + 1] : b_.rows; }

    bool z_range(size_t j, const IntVector& res, Integer& zlo, Integer& zhi) const {
        bool bounded = false;
        const auto& col = b_.cols[j];
        for (size_t i = piv_[j]; i < level_end(j); ++i)
            if (!narrow(col[i], res[i], lo_[i], hi_[i], zlo, zhi, bounded)) return false;
        return bounded;
    }

    void tick() {
        if (++nodes_ > cap_) throw CapExceeded("enumeration cap of " + std::to_string(cap_) + " nodes exceeded");
    }

    Integer count_level(size_t j, IntVector& res) {
        IntVector key(res.begin() + static_cast<long>(piv_[j]), res.end());
        auto it = memo_[j].find(key);
        if (it != memo_[j].end()) return it->second;
        Integer total = 0, zlo, zhi;
        if (z_range(j, res, zlo, zhi)) {
            if (j + 1 == b_.ncols()) {
                total = zhi - zlo + 1;
                tick();
            } else {
                IntVector next = res;
                axpy(next, zlo, b_.cols[j]);
                for (Integer z = zlo; z <= zhi; ++z) {
                    tick();
                    total += count_level(j + 1, next);
                    axpy(next, 1, b_.cols[j]);
                }
            }
        }
        memo_[j].emplace(std::move(key), total);
        return total;
    }

    void list_level(size_t j, IntVector& res, std::vector<IntVector>& out) {
        Integer zlo, zhi;
        if (!z_range(j, res, zlo, zhi)) return;
        IntVector next = res;
        axpy(next, zlo, b_.cols[j]);
        for (Integer z = zlo; z <= zhi; ++z) {
            tick();
            if (j + 1 == b_.ncols()) {
                out.push_back(next);
            } else {
                list_level(j + 1, next, out);
            }
            axpy(next, 1, b_.cols[j]);
        }
    }

    const IntMatrix& b_;
    const IntVector& lo_;
    const IntVector& hi_;
    uint64_t cap_;
    std::vector<size_t> piv_;
    std::vector<std::map<IntVector, Integer>> memo_;
    uint64_t nodes_ = 0;
};

constexpr uint64_t kGroupLimit = 4096;

// Count for a full-rank lower-triangular block in HNF via dynamic programming over Z^k / L.
Integer group_count(const IntMatrix& L, const IntVector& lo, const IntVector& hi) {
    size_t k = L.ncols();
    std::vector<int64_t> d(k);
    std::vector<std::vector<int64_t>> m(k, std::vector<int64_t>(k, 0));  // m[row][col]
    for (size_t j = 0; j < k; ++j)
        for (size_t i = j; i < k; ++i) m[i][j] = L.cols[j][i].get_si();
    size_t order = 1;
    std::vector<size_t> radix(k);
    for (size_t i = 0; i < k; ++i) {
        d[i] = m[i][i];
        radix[i] = order;
        order *= static_cast<size_t>(d[i]);
    }
    auto reduce = [&](std::vector<int64_t>& x) {
        for (size_t i = 0; i < k; ++i) {
            int64_t q = x[i] / d[i];
            if (x[i] % d[i] < 0) --q;
            if (q != 0)
                for (size_t r = i; r < k; ++r) x[r] -= q * m[r][i];
        }
    };
    auto encode = [&](const std::vector<int64_t>& x) {
        size_t idx = 0;
        for (size_t i = 0; i < k; ++i) idx += static_cast<size_t>(x[i]) * radix[i];
        return idx;
    };
    auto decode = [&](size_t idx) {
        std::vector<int64_t> x(k);
        for (size_t i = 0; i < k; ++i) x[i] = static_cast<int64_t>((idx / radix[i]) % static_cast<size_t>(d[i]));
        return x;
    };
    std::vector<Integer> cur(order, Integer(0)), next(order);
    cur[0] = 1;
    for (size_t i = 0; i < k; ++i) {
        std::vector<std::vector<int64_t>> steps;
        for (int64_t c = 0;; ++c) {
            std::vector<int64_t> x(k, 0);
            x[i] = c;
            reduce(x);
            if (c > 0 && encode(x) == 0) break;
            steps.push_back(x);
        }
        int64_t period = static_cast<int64_t>(steps.size());
        std::vector<Integer> mult(steps.size());
        for (int64_t c = 0; c < period; ++c) {
            Integer a = lo[i] - c, b = hi[i] - c, l, h;
            mpz_cdiv_q_ui(l.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(period));
            mpz_fdiv_q_ui(h.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(period));
            mult[static_cast<size_t>(c)] = h >= l ? Integer(h - l + 1) : Integer(0);
        }
        std::fill(next.begin(), next.end(), Integer(0));
        for (size_t g = 0; g < order; ++g) {
            if (cur[g] == 0) continue;
            auto base = decode(g);
            for (size_t c = 0; c < steps.size(); ++c) {
                if (mult[c] == 0) continue;
                std::vector<int64_t> x(k);
                for (size_t r = 0; r < k; ++r) x[r] = base[r] + steps[c][r];
                reduce(x);
                next[encode(x)] += cur[g] * mult[c];
            }
        }
        std::swap(cur, next);
    }
    return cur[0];
}

Integer count_block(const SubProblem& s, uint64_t cap) {
    const IntMatrix& B = s.basis;
    if (B.ncols() == 1) {
        Integer zlo, zhi;
        bool bounded = false;
        for (size_t i = 0; i < B.rows; ++i)
            if (!narrow(B.cols[0][i], Integer(0), s.lo[i], s.hi[i], zlo, zhi, bounded)) return 0;
        return zhi - zlo + 1;
    }
    if (B.ncols() == B.rows) {
        IntMatrix H = hermite_normal_form(B);
        Integer det = 1;
        for (size_t j = 0; j < H.ncols(); ++j) det *= H.cols[j][j];
        if (det <= kGroupLimit) return group_count(H, s.lo, s.hi);
    }
    return Walker(B, s.lo, s.hi, cap).count();
}

void check_box(const IntMatrix& basis, const IntVector& lo, const IntVector& hi) {
    if (lo.size() != basis.rows || hi.size() != basis.rows) throw std::invalid_argument("box dimension mismatch");
}

}  // namespace

Integer count_points(const IntMatrix& basis, const IntVector& lo, const IntVector& hi, uint64_t cap) {
    check_box(basis, lo, hi);
    std::vector<size_t> free_rows;
    auto blocks = decompose(basis, &free_rows);
    for (size_t i : free_rows)
        if (lo[i] > 0 || hi[i] < 0) return 0;
    Integer total = 1;
    for (const auto& b : blocks) {
        Integer c = count_block(restrict_block(basis, b, lo, hi), cap);
        if (c == 0) return 0;
        total *= c;
    }
    return total;
}

std::vector<IntVector> list_points(const IntMatrix& basis, const IntVector& lo, const IntVector& hi,
                                   uint64_t cap) {
    check_box(basis, lo, hi);
    return Walker(basis, lo, hi, cap).list();
}

Integer projection_count(const IntMatrix& basis, const std::vector<size_t>& rows, const IntVector& lo,
                         const IntVector& hi, uint64_t cap) {
    check_box(basis, lo, hi);
    std::vector<char> in_head(basis.rows, 0);
    for (size_t r : rows) in_head.at(r) = 1;
    std::vector<size_t> head_rows, tail_rows;
    for (size_t i = 0; i < basis.rows; ++i) (in_head[i] ? head_rows : tail_rows).push_back(i);
    std::vector<size_t> order = head_rows;
    order.insert(order.end(), tail_rows.begin(), tail_rows.end());
    IntMatrix E = echelon_in_order(basis, order);

    IntMatrix head{head_rows.size(), {}}, head_full{basis.rows, {}}, tail{tail_rows.size(), {}};
    for (const auto& c : E.cols) {
        bool on_head = std::any_of(head_rows.begin(), head_rows.end(), [&](size_t r) { return c[r] != 0; });
        if (on_head) {
            IntVector h;
            for (size_t r : head_rows) h.push_back(c[r]);
            head.cols.push_back(std::move(h));
            head_full.cols.push_back(c);
        } else {
            IntVector t;
            for (size_t r : tail_rows) t.push_back(c[r]);
            tail.cols.push_back(std::move(t));
        }
    }
    IntVector tlo, thi, hlo, hhi;
    for (size_t r : tail_rows) {
        tlo.push_back(lo[r]);
        thi.push_back(hi[r]);
    }
    for (size_t r : head_rows) {
        hlo.push_back(lo[r]);
        hhi.push_back(hi[r]);
    }
    auto feasible_tail = [&](const IntVector& shift) {
        IntVector l = tlo, h = thi;
        for (size_t i = 0; i < shift.size(); ++i) {
            l[i] -= shift[i];
            h[i] -= shift[i];
        }
        return count_points(tail, l, h, cap) > 0;
    };
    if (head.ncols() == 0) return feasible_tail(IntVector(tail_rows.size(), Integer(0))) ? 1 : 0;

    auto head_points = list_points(head, hlo, hhi, cap);
    std::map<IntVector, bool> seen;
    Integer total = 0;
    for (const auto& y : head_points) {
        // head is echelon with full column rank on the head rows, so z is unique.
        IntVector x = combine(head_full, *lattice_coordinates(head, y));
        IntVector shift;
        for (size_t r : tail_rows) shift.push_back(x[r]);
        auto it = seen.find(shift);
        bool ok;
        if (it != seen.end()) {
            ok = it->second;
        } else {
            ok = feasible_tail(shift);
            seen.emplace(shift, ok);
        }
        if (ok) ++total;
    }
    return total;
}

// ---------------------------------------------------------------------------------------------

IntervalSet IntervalSet::from_values(std::vector<Integer> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    IntervalSet s;
    for (const auto& v : values) {
        if (!s.parts.empty() && s.parts.back().second + 1 == v) {
            s.parts.back().second = v;
        } else {
            s.parts.emplace_back(v, v);
        }
    }
    return s;
}

IntervalSet IntervalSet::range(const Integer& lo, const Integer& hi) {
    IntervalSet s;
    if (lo <= hi) s.parts.emplace_back(lo, hi);
    return s;
}

Integer IntervalSet::size() const {
    Integer n = 0;
    for (const auto& [a, b] : parts) n += b - a + 1;
    return n;
}

bool IntervalSet::contains(const Integer& v) const {
    auto it = std::upper_bound(parts.begin(), parts.end(), v,
                               [](const Integer& x, const std::pair<Integer, Integer>& p) { return x < p.first; });
    if (it == parts.begin()) return false;
    --it;
    return it->first <= v && v <= it->second;
}

bool IntervalSet::contains_all(const IntervalSet& o) const {
    for (const auto& [a, b] : o.parts) {
        auto it = std::upper_bound(parts.begin(), parts.end(), a,
                                   [](const Integer& x, const std::pair<Integer, Integer>& p) { return x < p.first; });
        if (it == parts.begin()) return false;
        --it;
        if (!(it->first <= a && b <= it->second)) return false;
    }
    return true;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
    std::vector<std::pair<Integer, Integer>> all = parts;
    all.insert(all.end(), o.parts.begin(), o.parts.end());
    std::sort(all.begin(), all.end());
    IntervalSet s;
    for (const auto& p : all) {
        if (!s.parts.empty() && p.first <= s.parts.back().second + 1) {
            if (p.second > s.parts.back().second) s.parts.back().second = p.second;
        } else {
            s.parts.push_back(p);
        }
    }
    return s;
}

Integer IntervalSet::gcd_of_elements() const {
    Integer g = 0;
    for (const auto& [a, b] : parts) {
        if (a != b) return 1;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    }
    return g;
}

namespace {

void positive_valuations(const Integer& a, const Integer& b, const Integer& p, std::vector<long>& out) {
    Integer pj = 1;
    for (long j = 0; pj <= b; ++j, pj *= p) {
        Integer kmin, kmax;
        mpz_cdiv_q(kmin.get_mpz_t(), a.get_mpz_t(), pj.get_mpz_t());
        mpz_fdiv_q(kmax.get_mpz_t(), b.get_mpz_t(), pj.get_mpz_t());
        if (kmin > kmax) continue;
        if (kmax > kmin || !mpz_divisible_p(kmin.get_mpz_t(), p.get_mpz_t())) out.push_back(j);
    }
}

}  // namespace

std::vector<long> IntervalSet::valuations(const Integer& p) const {
    std::vector<long> out;
    for (const auto& [a, b] : parts) {
        if (b >= 1) positive_valuations(a > 1 ? a : Integer(1), b, p, out);
        if (a <= -1) positive_valuations(b < -1 ? Integer(-b) : Integer(1), Integer(-a), p, out);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FunctionalImage functional_image(const IntMatrix& basis, const IntVector& f, const IntVector& lo, const IntVector& hi,
                                 uint64_t cap) {
    check_box(basis, lo, hi);
    if (f.size() != basis.rows) throw std::invalid_argument("functional length mismatch");
    std::vector<Integer> fval(basis.ncols());
    Integer g = 0;
    for (size_t j = 0; j < basis.ncols(); ++j) {
        for (size_t i = 0; i < basis.rows; ++i)
            if (f[i] != 0 && basis.cols[j][i] != 0) fval[j] += f[i] * basis.cols[j][i];
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), fval[j].get_mpz_t());
    }
    FunctionalImage img;
    img.generator = g;

    std::vector<size_t> free_rows;
    auto blocks = decompose(basis, &free_rows);
    for (size_t i : free_rows)
        if (lo[i] > 0 || hi[i] < 0) return img;
    std::vector<const Block*> touched;
    for (const auto& b : blocks) {
        bool hit = std::any_of(b.cols.begin(), b.cols.end(), [&](size_t j) { return fval[j] != 0; });
        if (hit) {
            touched.push_back(&b);
            continue;
        }
        bool contains_zero = true;
        for (size_t i : b.rows)
            if (lo[i] > 0 || hi[i] < 0) contains_zero = false;
        if (!contains_zero && count_block(restrict_block(basis, b, lo, hi), cap) == 0) return img;
    }
    if (g == 0) {
        img.units = IntervalSet::range(0, 0);
        return img;
    }
    std::vector<IntervalSet> pieces;
    for (const Block* b : touched) {
        SubProblem s = restrict_block(basis, *b, lo, hi);
        if (b->cols.size() == 1) {
            Integer zlo, zhi;
            bool bounded = false, ok = true;
            for (size_t i = 0; i < s.basis.rows && ok; ++i)
                ok = narrow(s.basis.cols[0][i], Integer(0), s.lo[i], s.hi[i], zlo, zhi, bounded);
            if (!ok) return img;
            Integer unit = fval[b->cols[0]] / g;
            IntervalSet piece;
            if (unit == 1 || unit == -1) {
                piece = unit == 1 ? IntervalSet::range(zlo, zhi) : IntervalSet::range(-zhi, -zlo);
            } else {
                if (zhi - zlo + 1 > cap) throw CapExceeded("functional image exceeds cap");
                std::vector<Integer> vals;
                for (Integer z = zlo; z <= zhi; ++z) vals.push_back(z * unit);
                piece = IntervalSet::from_values(std::move(vals));
            }
            pieces.push_back(std::move(piece));
        } else {
            auto pts = Walker(s.basis, s.lo, s.hi, cap).list();
            if (pts.empty()) return img;
            std::vector<Integer> vals;
            for (const auto& x : pts) {
                Integer v = 0;
                for (size_t r = 0; r < b->rows.size(); ++r) v += f[b->rows[r]] * x[r];
                vals.push_back(v / g);
            }
            pieces.push_back(IntervalSet::from_values(std::move(vals)));
        }
    }
    // Sumset of interval unions is the union of pairwise interval sums.
    IntervalSet acc = pieces[0];
    for (size_t t = 1; t < pieces.size(); ++t) {
        IntervalSet next;
        for (const auto& [a1, b1] : acc.parts)
            for (const auto& [a2, b2] : pieces[t].parts) next = next.unite(IntervalSet::range(a1 + a2, b1 + b2));
        acc = std::move(next);
    }
    img.units = std::move(acc);
    return img;
}

}  // namespace arvol
