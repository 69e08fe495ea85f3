#include "arvol/lp.hpp"

#include <stdexcept>

namespace arvol {

namespace {

struct Tableau {
    // rows 0..m-1 are constraints, last row is the objective (reduced costs, rhs = -value).
    std::vector<RatVector> t;
    std::vector<size_t> basis;
    size_t m, n;

    void pivot(size_t r, size_t c) {
        Rational p = t[r][c];
        for (auto& v : t[r]) v /= p;
        for (size_t i = 0; i < t.size(); ++i) {
            if (i == r || t[i][c] == 0) continue;
            Rational f = t[i][c];
            for (size_t j = 0; j <= n; ++j)
                if (t[r][j] != 0) t[i][j] -= f * t[r][j];
        }
        basis[r] = c;
    }

    // Returns false when unbounded. Only columns < limit may enter.
    bool run(size_t limit) {
        for (;;) {
            size_t enter = n;
            for (size_t j = 0; j < limit; ++j)
                if (t[m][j] < 0) {
                    enter = j;
                    break;
                }
            if (enter == n) return true;
            size_t leave = m;
            Rational best;
            for (size_t i = 0; i < m; ++i) {
                if (t[i][enter] <= 0) continue;
                Rational ratio = t[i][n] / t[i][enter];
                if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpResult minimize_standard(const std::vector<RatVector>& A, const RatVector& b, const RatVector& c) {
    size_t m = A.size(), nv = c.size();
    for (const auto& row : A)
        if (row.size() != nv) throw std::invalid_argument("LP row length mismatch");
    if (b.size() != m) throw std::invalid_argument("LP rhs length mismatch");

    // Columns: nv original, m artificial, then rhs.
    Tableau T;
    T.m = m;
    T.n = nv + m;
    T.t.assign(m + 1, RatVector(T.n + 1, Rational(0)));
    T.basis.resize(m);
    for (size_t i = 0; i < m; ++i) {
        int sign = b[i] < 0 ? -1 : 1;
        for (size_t j = 0; j < nv; ++j) T.t[i][j] = A[i][j] * sign;
        T.t[i][nv + i] = 1;
        T.t[i][T.n] = b[i] * sign;
        T.basis[i] = nv + i;
    }
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j <= T.n; ++j)
            if (j < nv || j == T.n) T.t[m][j] -= T.t[i][j];
    T.run(T.n);
    LpResult res;
    if (T.t[m][T.n] != 0) {
        res.status = LpResult::Infeasible;
        return res;
    }
    // Drive remaining artificials out of the basis where possible.
    for (size_t i = 0; i < m; ++i) {
        if (T.basis[i] < nv) continue;
        for (size_t j = 0; j < nv; ++j)
            if (T.t[i][j] != 0) {
                T.pivot(i, j);
                break;
            }
    }
    std::fill(T.t[m].begin(), T.t[m].end(), Rational(0));
    for (size_t j = 0; j < nv; ++j) T.t[m][j] = c[j];
    for (size_t i = 0; i < m; ++i) {
        size_t bj = T.basis[i];
        if (bj >= nv || c[bj] == 0) continue;
        Rational f = c[bj];
        for (size_t j = 0; j <= T.n; ++j) T.t[m][j] -= f * T.t[i][j];
    }
    // Artificial columns stay out: they may not enter in phase two.
    if (!T.run(nv)) {
        res.status = LpResult::Unbounded;
        return res;
    }
    res.status = LpResult::Optimal;
    res.x.assign(nv, Rational(0));
    for (size_t i = 0; i < m; ++i)
        if (T.basis[i] < nv) res.x[T.basis[i]] = T.t[i][T.n];
    res.value = 0;
    for (size_t j = 0; j < nv; ++j) res.value += c[j] * res.x[j];
    return res;
}

}  // namespace arvol
