#include "arvol/toy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace arvol {

Rational PairSpec::total_mult() const {
    Rational s = 0;
    for (const auto& e : E) s += e.mult;
    return s;
}

Rational PairSpec::mult_at(const Rational& alpha) const {
    for (const auto& e : E)
        if (e.alpha == alpha) return e.mult;
    return 0;
}

Rational PairSpec::effective_rho0() const { return rho0 != 0 ? rho0 : Rational(degree) - total_mult(); }

void validate(const PairSpec& spec) {
    if (spec.degree < 1) throw std::invalid_argument("degree must be a positive integer");
    if (compare_with_exp(Rational(1), spec.lambda) > 0) throw std::invalid_argument("lambda must be nonnegative");
    std::set<Rational> seen;
    for (const auto& e : spec.E) {
        if (e.mult < 0) throw std::invalid_argument("multiplicity at " + format_rational(e.alpha) + " is negative");
        if (!seen.insert(e.alpha).second)
            throw std::invalid_argument("vanishing point " + format_rational(e.alpha) + " listed twice");
    }
    Rational room = Rational(spec.degree) - spec.total_mult();
    if (room < 0) throw std::invalid_argument("sum of multiplicities exceeds the degree");
    if (spec.rho0 < 0) throw std::invalid_argument("rho0 must be positive");
    if (spec.rho0 > room) throw std::invalid_argument("rho0 exceeds degree minus the sum of multiplicities");
}

long SectionSpace::order_at(const Rational& alpha) const {
    for (const auto& [a, k] : orders)
        if (a == alpha) return k;
    return 0;
}

IntVector poly_mul(const IntVector& a, const IntVector& b) {
    if (a.empty() || b.empty()) return {};
    IntVector c(a.size() + b.size() - 1, Integer(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

SectionSpace polynomial_space(long degree, const LogScale& scale, NormMode mode,
                              const std::vector<std::pair<Rational, long>>& orders, std::string label) {
    if (degree < 0) throw std::invalid_argument("negative degree");
    SectionSpace S;
    S.degree = degree;
    long total = 0;
    std::set<Rational> seen;
    IntVector g{Integer(1)};
    for (const auto& [alpha, k] : orders) {
        if (k < 0) throw std::invalid_argument("negative vanishing order");
        if (!seen.insert(alpha).second) throw std::invalid_argument("vanishing point listed twice");
        if (k == 0) continue;
        S.orders.emplace_back(alpha, k);
        total += k;
        // (v t - u) is primitive, so by Gauss's lemma its powers cut out the integral sublattice.
        IntVector lin{Integer(-alpha.get_num()), Integer(alpha.get_den())};
        for (long i = 0; i < k; ++i) g = poly_mul(g, lin);
    }
    S.vanishing = g;
    IntMatrix basis{static_cast<size_t>(degree + 1), {}};
    for (long j = 0; j + total <= degree; ++j) {
        IntVector col(static_cast<size_t>(degree + 1), Integer(0));
        for (size_t i = 0; i < g.size(); ++i) col[static_cast<size_t>(j) + i] = g[i];
        basis.cols.push_back(std::move(col));
    }
    S.space = make_space(std::move(basis), ArchNorm{mode, scale}, std::move(label));
    return S;
}

long y_order(const PairSpec& spec, long m, const Rational& extra_y) {
    Rational e = Rational(m) * (spec.mult_at(spec.Y) + extra_y);
    Integer k = ceil_of(e);
    return k < 0 ? 0 : k.get_si();
}

SectionSpace build_section_space_with_order(const PairSpec& spec, long m, long order_y, const LogScale& twist) {
    if (m < 1) throw std::invalid_argument("level must be positive");
    long N = m * spec.degree;
    std::vector<std::pair<Rational, long>> orders;
    for (const auto& e : spec.E) {
        if (e.alpha == spec.Y) continue;
        orders.emplace_back(e.alpha, ceil_of(Rational(m) * e.mult).get_si());
    }
    orders.emplace_back(spec.Y, std::max(0L, order_y));
    LogScale scale = spec.lambda.times(N) + twist;
    return polynomial_space(N, scale, spec.mode, orders, "level " + std::to_string(m));
}

SectionSpace build_section_space(const PairSpec& spec, long m, const Rational& extra_y, const LogScale& twist) {
    return build_section_space_with_order(spec, m, y_order(spec, m, extra_y), twist);
}

Restriction taylor_functional(const Rational& alpha, long degree, long n) {
    Restriction r;
    r.order = n;
    r.functional.assign(static_cast<size_t>(degree + 1), Integer(0));
    if (n < 0 || n > degree) {
        r.denominator = 1;
        return r;
    }
    Integer u = alpha.get_num(), v = alpha.get_den();
    r.denominator = power(v, static_cast<unsigned long>(degree - n));
    Integer binom;
    for (long j = n; j <= degree; ++j) {
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(n));
        r.functional[static_cast<size_t>(j)] =
            binom * power(u, static_cast<unsigned long>(j - n)) * power(v, static_cast<unsigned long>(degree - j));
    }
    return r;
}

LinearMap restriction_to_Y(const PairSpec& spec, long m, long n) {
    if (n < 0) throw std::invalid_argument("restriction order must be nonnegative");
    long k = std::max(y_order(spec, m, 0), n);
    SectionSpace S = build_section_space_with_order(spec, m, k);
    Restriction r = taylor_functional(spec.Y, S.degree, n);
    RatMatrix M;
    M.rows = 1;
    M.ncols = static_cast<size_t>(S.degree + 1);
    RatVector row;
    for (const auto& f : r.functional) {
        Rational q(f, r.denominator);
        q.canonicalize();
        row.push_back(q);
    }
    M.entries.push_back(std::move(row));
    return make_linear_map(M, S.space);
}

RestrictedImage restricted_image(const SectionSpace& S, const Rational& alpha, Kind kind, uint64_t cap) {
    RestrictedImage img;
    img.order = S.order_at(alpha);
    Restriction r = taylor_functional(alpha, S.degree, img.order);
    img.denominator = r.denominator;
    const AdelicSpace& V = S.space;
    if (V.norm.mode == NormMode::CoeffMax) {
        Integer R = candidate_radius(V.norm, kind);
        IntVector lo(V.ambient_dim, -R), hi(V.ambient_dim, R);
        FunctionalImage f = functional_image(V.basis, r.functional, lo, hi, cap);
        img.generator = f.generator;
        img.units = f.units;
        img.possible = f.units;
        return img;
    }
    img.generator = 0;
    for (const auto& c : V.basis.cols) {
        Integer v = 0;
        for (size_t i = 0; i < c.size(); ++i) v += r.functional[i] * c[i];
        mpz_gcd(img.generator.get_mpz_t(), img.generator.get_mpz_t(), v.get_mpz_t());
    }
    auto sections = enumerate_small_sections(V, kind, cap);
    std::vector<Integer> sure, all;
    for (size_t s = 0; s < sections.vectors.size(); ++s) {
        Integer v = 0;
        for (size_t i = 0; i < r.functional.size(); ++i) v += r.functional[i] * sections.vectors[s][i];
        if (img.generator != 0) v /= img.generator;
        if (sections.certain[s]) sure.push_back(v);
        all.push_back(v);
    }
    img.units = IntervalSet::from_values(std::move(sure));
    img.possible = IntervalSet::from_values(std::move(all));
    return img;
}

LogScale height(const PairSpec& spec, const Integer& u, const Integer& v) {
    if (u == 0 && v == 0) throw std::invalid_argument("(0:0) is not a point");
    Integer g;
    mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
    Integer big = std::max(Integer(abs(u)), Integer(abs(v))) / g;
    return spec.lambda.times(spec.degree) + LogScale::log(Rational(power(big, static_cast<unsigned long>(spec.degree))));
}

LogScale height(const PairSpec& spec, const Rational& beta) {
    return height(spec, Integer(beta.get_num()), Integer(beta.get_den()));
}

NormValue arch_norm_eval(const IntVector& poly, NormMode mode, const LogScale& scale) {
    NormValue out;
    if (mode == NormMode::CoeffMax) {
        Integer b = 0;
        for (const auto& c : poly) b = std::max(b, Integer(abs(c)));
        out.exact_base = b;
    } else {
        out.exact_base = circle_sup_exact(poly);
    }
    if (out.exact_base) {
        out.base_lo = std::nextafter(out.exact_base->get_d(), 0.0);
        out.base_hi = std::nextafter(out.exact_base->get_d(), HUGE_VAL);
        if (*out.exact_base == 0) out.base_lo = out.base_hi = 0;
        if (out.exact_base->fits_slong_p() && abs(*out.exact_base) < (Integer(1) << 52))
            out.base_lo = out.base_hi = out.exact_base->get_d();
    } else {
        Enclosure e = circle_sup_to_width(poly, 1e-12, size_t(1) << 18);
        out.base_lo = e.lo;
        out.base_hi = e.hi;
    }
    auto [elo, ehi] = exp_enclosure(-scale);
    out.lo = std::nextafter(out.base_lo * elo, 0.0);
    out.hi = std::nextafter(out.base_hi * ehi, HUGE_VAL);
    if (out.base_hi == 0) out.lo = out.hi = 0;
    return out;
}

}  // namespace arvol
