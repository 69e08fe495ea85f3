#include "arvol/volume_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace arvol {

namespace {

const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);
const double kLog4 = std::log(4.0);
const double kLog6 = std::log(6.0);
const double kLog18 = std::log(18.0);

double log_count(const Integer& n) { return n <= 1 ? 0.0 : log_of(n); }

PairSpec without_E(const PairSpec& spec) {
    PairSpec a = spec;
    a.E.clear();
    a.rho0 = spec.effective_rho0();
    return a;
}

// log max(|u|, |v|) for Y = u / v.
double y_height(const PairSpec& spec) {
    Integer u = abs(spec.Y.get_num()), v = spec.Y.get_den();
    return log_of(std::max(u, v));
}

void require_center_is_Y(const PairSpec& spec, const FlagSpec& flag) {
    require_good_flag(flag);
    if (flag.center != spec.Y)
        throw std::invalid_argument("flag center " + format_rational(flag.center) + " differs from Y = " +
                                    format_rational(spec.Y));
}

void require_coeff_max(const PairSpec& spec, const char* op) {
    if (spec.mode != NormMode::CoeffMax) throw std::invalid_argument(std::string(op) + " requires coeff-max mode");
}

// Distinct p-adic orders of the restricted values of strictly small sections with Y-order exactly i.
std::vector<std::vector<long>> order_slices(const PairSpec& spec, long m, long first, long last, const Integer& p,
                                            uint64_t cap) {
    std::vector<std::vector<long>> out;
    for (long i = first; i <= last; ++i) {
        SectionSpace S = build_section_space_with_order(spec, m, i);
        RestrictedImage img = restricted_image(S, spec.Y, Kind::StrictlySmall, cap);
        out.push_back(img.generator == 0 ? std::vector<long>{} : img.units.valuations(p));
    }
    return out;
}

}  // namespace

void Window::check() const {
    if (lo < 1) throw std::invalid_argument("window must start at m >= 1");
    if (lo > hi) throw std::invalid_argument("empty m window");
}

uint64_t default_cap() {
    if (const char* env = std::getenv("ARVOL_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
        throw std::invalid_argument("ARVOL_CAP must be a positive integer");
    }
    return 10000000;
}

Series fit_series(std::vector<std::pair<long, double>> raw) {
    Series s;
    s.raw = std::move(raw);
    size_t n = s.raw.size();
    if (n == 0) return s;
    if (n == 1) {
        s.extrapolated = s.raw[0].second;
        return s;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [m, y] : s.raw) {
        double x = 1.0 / static_cast<double>(m);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    double dn = static_cast<double>(n);
    double det = dn * sxx - sx * sx;
    double b = det == 0 ? 0 : (dn * sxy - sx * sy) / det;
    double a = (sy - b * sx) / dn;
    double ss = 0;
    for (const auto& [m, y] : s.raw) {
        double e = y - (a + b / static_cast<double>(m));
        ss += e * e;
    }
    s.extrapolated = a;
    s.fit_residual = std::sqrt(ss / dn);
    return s;
}

double intercept_stderr(const std::vector<std::pair<long, double>>& raw) {
    size_t n = raw.size();
    if (n < 3) return 0;
    Series s = fit_series(raw);
    double mx = 0, mxx = 0;
    for (const auto& [m, y] : raw) {
        double x = 1.0 / static_cast<double>(m);
        mx += x, mxx += x * x;
    }
    double dn = static_cast<double>(n);
    mx /= dn, mxx /= dn;
    double sxx = dn * (mxx - mx * mx);
    if (sxx <= 0) return 0;
    double sigma2 = s.fit_residual * s.fit_residual * dn / (dn - 2);
    return std::sqrt(sigma2 * mxx / sxx);
}

// ---------------------------------------------------------------------------------------------

double constant_C(double I, double delta, const Integer& p, long m, int dim) {
    double dm = static_cast<double>(m), lp4 = std::log(4 * p.get_d());
    return I * (kLog4 * delta + lp4 * std::log(4 * p.get_d() * I * std::pow(dm, dim)) / dm);
}

double constant_C_prime(double I, double delta) { return I * delta * kLog4; }

double constant_C_tilde(double I_M, double delta, double I_N, const Integer& p, double eps) {
    return I_M * (kLog4 * delta + eps) / log_of(p) + eps * I_N;
}

std::vector<Rational> delta_test_family() {
    std::vector<Rational> mus;
    for (int k = 0; k <= 8; ++k) mus.emplace_back(k, 4);
    for (auto& q : mus) q.canonicalize();
    return mus;
}

Constants evaluate_constants(const PairSpec& spec, long m, const Integer& p, const Rational& epsilon) {
    validate(spec);
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    auto family = delta_test_family();
    if (family.empty()) throw std::invalid_argument("empty test family");
    Constants c;
    c.m = m;
    c.p = p;
    c.epsilon = epsilon;
    // rk H0(k a H) / k = (k a + 1) / k, maximal at k = 1.
    c.I = static_cast<double>(spec.degree + 1);
    c.I_witness = 1;
    double a = static_cast<double>(spec.degree), lam = spec.lambda.value();
    c.delta_upper = HUGE_VAL;
    for (const auto& mu : family) {
        double v = a * (lam + to_double(mu));
        if (v < c.delta_upper) c.delta_upper = v, c.delta_argmin = mu;
    }
    c.C = constant_C(c.I, c.delta_upper, p, m, 1);
    c.C_prime = constant_C_prime(c.I, c.delta_upper);
    c.C_tilde = constant_C_tilde(c.I, c.delta_upper, c.I, p, to_double(epsilon));
    return c;
}

Majorant majorant_for(const PairSpec& spec, const Rational& margin) {
    if (margin < 0) throw std::invalid_argument("majorant margin must be nonnegative");
    Majorant M;
    M.margin = margin;
    M.delta = static_cast<double>(spec.degree) * (spec.lambda.value() + to_double(margin) + y_height(spec));
    return M;
}

// ---------------------------------------------------------------------------------------------

std::string to_string(RestrictedVariant v) { return v == RestrictedVariant::CL ? "CL" : "quot"; }

RestrictedVariant parse_restricted_variant(const std::string& s) {
    if (s == "CL" || s == "cl") return RestrictedVariant::CL;
    if (s == "quot") return RestrictedVariant::Quot;
    throw std::invalid_argument("unknown restricted variant '" + s + "' (expected CL or quot)");
}

std::vector<long> RestrictedSet::valuations(const Integer& p) const {
    if (unit == 0) return {};
    std::vector<long> v = units.valuations(p);
    long shift = ord_p(unit, p) - ord_p(denominator, p);
    for (auto& x : v) x += shift;
    return v;
}

RestrictedSet restricted_set(const SectionSpace& S, const Rational& alpha, RestrictedVariant variant, uint64_t cap) {
    RestrictedSet out;
    long order = S.order_at(alpha);
    out.order = order;
    if (variant == RestrictedVariant::Quot) {
        Restriction r = taylor_functional(alpha, S.degree, order);
        QuotientUnits q = quotient_units(S.space, r.functional, r.denominator);
        out.unit = q.generator;
        out.denominator = q.denominator;
        out.units = IntervalSet::range(-q.certain_radius, q.certain_radius);
        out.possible = IntervalSet::range(-q.possible_radius, q.possible_radius);
        return out;
    }
    RestrictedImage img = restricted_image(S, alpha, Kind::StrictlySmall, cap);
    out.denominator = img.denominator;
    // Integer span of the image is a progression with step gcd; its hull keeps every step point in [min, max].
    Integer step = img.possible.gcd_of_elements();
    if (img.generator == 0 || step == 0) {
        out.unit = img.generator;
        out.units = out.possible = IntervalSet::range(0, 0);
        return out;
    }
    out.unit = img.generator * step;
    auto hull = [&](const IntervalSet& s) {
        if (s.empty()) return IntervalSet{};
        Integer lo, hi;
        mpz_fdiv_q(lo.get_mpz_t(), s.min().get_mpz_t(), step.get_mpz_t());
        mpz_fdiv_q(hi.get_mpz_t(), s.max().get_mpz_t(), step.get_mpz_t());
        return IntervalSet::range(lo, hi);
    };
    out.units = hull(img.units);
    out.possible = hull(img.possible);
    return out;
}

RestrictedSet restricted_set(const PairSpec& spec, long m, RestrictedVariant variant, const Rational& extra_y,
                             uint64_t cap) {
    return restricted_set(build_section_space(spec, m, extra_y), spec.Y, variant, cap);
}

// ---------------------------------------------------------------------------------------------

YuanResult yuan_discrepancy(const PairSpec& spec, const FlagSpec& flag, RestrictedVariant variant, long m,
                            uint64_t cap, const Rational& margin) {
    validate(spec);
    require_center_is_Y(spec, flag);
    require_coeff_max(spec, "yuan_discrepancy");
    if (m < 1) throw std::invalid_argument("m must be positive");
    YuanResult out;
    out.variant = variant;
    RestrictedSet R = restricted_set(spec, m, variant, 0, cap);
    out.count = R.count();
    out.distinct_valuations = static_cast<long>(R.valuations(flag.p).size());
    double ell = log_count(out.count.lo);
    double lp = log_of(flag.p);

    Majorant M = majorant_for(spec, margin);
    // Majorant sections on Y: values x with |x| <= exp(m delta_M).
    Integer big = std::max(Integer(abs(spec.Y.get_num())), Integer(spec.Y.get_den()));
    LogScale log_bound = (spec.lambda + LogScale::of(margin)).times(m * spec.degree) +
                         LogScale::log(Rational(power(big, static_cast<unsigned long>(m * spec.degree))));
    if (R.units.empty() || R.unit == 0) {
        out.majorant_contains = true;
    } else {
        Integer top = std::max(Integer(abs(R.units.min())), Integer(abs(R.units.max())));
        Rational value(top * abs(R.unit), R.denominator);
        value.canonicalize();
        out.majorant_contains = compare_with_exp(value, log_bound) <= 0;
    }

    double I = 1;  // rank growth of a degree-a line bundle on a point
    double dm = static_cast<double>(m);
    double C = constant_C(I, M.delta, flag.p, m, 0);
    out.report = two_sided(m, ell, static_cast<double>(out.distinct_valuations) * lp, C * dm / lp);
    out.report.constants_used.I = I;
    out.report.constants_used.delta_upper = M.delta;
    out.report.constants_used.C = C;
    return out;
}

std::string to_string(BodyVariant v) {
    switch (v) {
        case BodyVariant::YMFull: return "YM-full";
        case BodyVariant::RestrictedCL: return "restricted-CL";
        case BodyVariant::RestrictedQuot: return "restricted-quot";
    }
    return "?";
}

BodyVariant parse_body_variant(const std::string& s) {
    if (s == "YM-full" || s == "ym-full") return BodyVariant::YMFull;
    if (s == "restricted-CL" || s == "restricted-cl") return BodyVariant::RestrictedCL;
    if (s == "restricted-quot") return BodyVariant::RestrictedQuot;
    throw std::invalid_argument("unknown body variant '" + s + "' (expected YM-full, restricted-CL, restricted-quot)");
}

OkounkovBody build_okounkov_body(const PairSpec& spec, const FlagSpec& flag, BodyVariant variant, const Window& w,
                                 const Rational& extra_y, uint64_t cap) {
    validate(spec);
    w.check();
    require_good_flag(flag);
    OkounkovBody out;
    std::vector<Point> points;
    int dim = variant == BodyVariant::YMFull ? 2 : 1;
    const Integer& p = flag.p;

    if (variant == BodyVariant::YMFull) {
        // The curve of the flag is t = center; the lattice vanishing along E is kept, with E's order at the
        // center raised level by level.
        PairSpec along = spec;
        along.Y = flag.center;
        for (long m = w.lo; m <= w.hi; ++m) {
            long first = y_order(along, m, extra_y), N = m * spec.degree;
            long distinct = 0;
            for (long i = first; i <= N; ++i) {
                SectionSpace S = build_section_space_with_order(along, m, i);
                RestrictedImage img = restricted_image(S, flag.center, Kind::StrictlySmall, cap);
                if (img.generator == 0) continue;
                std::vector<long> J = img.units.valuations(p);
                if (J.empty()) continue;
                distinct += static_cast<long>(J.size());
                long shift = ord_p(img.generator, p) - ord_p(img.denominator, p);
                Rational x(i, m);
                x.canonicalize();
                for (long j : {J.front(), J.back()}) {
                    Rational y(j + shift, m);
                    y.canonicalize();
                    points.push_back({x, y});
                }
            }
            out.stats.levels.push_back(m);
            out.stats.distinct.push_back(distinct);
            out.stats.normalized.push_back(static_cast<double>(distinct) / (static_cast<double>(m) * m));
        }
    } else {
        if (flag.center != spec.Y)
            throw std::invalid_argument("restricted bodies need the flag centered at Y");
        auto rv = variant == BodyVariant::RestrictedCL ? RestrictedVariant::CL : RestrictedVariant::Quot;
        for (long m = w.lo; m <= w.hi; ++m) {
            RestrictedSet R = restricted_set(spec, m, rv, extra_y, cap);
            std::vector<long> J = R.valuations(p);
            for (long j : {J.empty() ? 0L : J.front(), J.empty() ? 0L : J.back()}) {
                if (J.empty()) break;
                Rational y(j, m);
                y.canonicalize();
                points.push_back({y});
            }
            out.stats.levels.push_back(m);
            out.stats.distinct.push_back(static_cast<long>(J.size()));
            out.stats.normalized.push_back(static_cast<double>(J.size()) / static_cast<double>(m));
        }
    }
    out.body = points.empty() ? RationalPolytope{dim, {}} : convex_hull(points, dim);
    return out;
}

VolumeEstimate truncated_avol(const PairSpec& spec, const Rational& extra_y, const Window& w, uint64_t cap) {
    validate(spec);
    w.check();
    VolumeEstimate v;
    v.d = 1;
    std::vector<std::pair<long, double>> lo, hi;
    bool interval = false;
    for (long m = w.lo; m <= w.hi; ++m) {
        SectionSpace S = build_section_space(spec, m, extra_y);
        CountInterval c = count_small_sections(S.space, Kind::StrictlySmall, cap);
        double norm = static_cast<double>(m) * static_cast<double>(m) / 2.0;
        lo.emplace_back(m, log_count(c.lo) / norm);
        hi.emplace_back(m, log_count(c.hi) / norm);
        interval = interval || !c.exact();
    }
    Series s = fit_series(std::move(lo));
    v.raw = std::move(s.raw);
    v.extrapolated = s.extrapolated;
    v.fit_residual = s.fit_residual;
    if (interval || spec.mode == NormMode::CircleSup) v.upper = fit_series(std::move(hi));
    return v;
}

VolumeEstimate truncated_restricted_vol(const PairSpec& spec, RestrictedVariant variant, const Window& w, uint64_t cap,
                                        const Rational& extra_y) {
    validate(spec);
    w.check();
    VolumeEstimate v;
    v.d = 0;
    std::vector<std::pair<long, double>> lo, hi;
    bool interval = false;
    for (long m = w.lo; m <= w.hi; ++m) {
        CountInterval c = restricted_set(spec, m, variant, extra_y, cap).count();
        lo.emplace_back(m, log_count(c.lo) / static_cast<double>(m));
        hi.emplace_back(m, log_count(c.hi) / static_cast<double>(m));
        interval = interval || !c.exact();
    }
    Series s = fit_series(std::move(lo));
    v.raw = std::move(s.raw);
    v.extrapolated = s.extrapolated;
    v.fit_residual = s.fit_residual;
    if (interval || spec.mode == NormMode::CircleSup) v.upper = fit_series(std::move(hi));
    return v;
}

// ---------------------------------------------------------------------------------------------

InclusionResult check_inclusions(const PairSpec& spec, const Rational& epsilon, long m, long n, uint64_t cap) {
    validate(spec);
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    if (Rational(n, m) > spec.effective_rho0()) throw std::invalid_argument("ratio n/m exceeds rho0");
    if (epsilon < 0) throw std::invalid_argument("epsilon must be nonnegative");
    PairSpec A = without_E(spec);
    LogScale twist = LogScale::of(epsilon * m);
    SectionSpace plain = build_section_space_with_order(A, m, n);
    SectionSpace up = build_section_space_with_order(A, m, n, twist);
    SectionSpace down = build_section_space_with_order(A, m, n, -twist);
    Restriction r = taylor_functional(A.Y, plain.degree, n);

    auto quot_range = [&](const SectionSpace& S) {
        QuotientUnits q = quotient_units(S.space, r.functional, r.denominator);
        return IntervalSet::range(-q.certain_radius, q.certain_radius);
    };
    auto quot_possible = [&](const SectionSpace& S) {
        QuotientUnits q = quotient_units(S.space, r.functional, r.denominator);
        return IntervalSet::range(-q.possible_radius, q.possible_radius);
    };
    RestrictedImage img_plain = restricted_image(plain, A.Y, Kind::StrictlySmall, cap);
    RestrictedImage img_up = restricted_image(up, A.Y, Kind::StrictlySmall, cap);

    InclusionResult out;
    out.m = m;
    out.n = n;
    // All sets are in units of the same generator: the lattice is shared, only the scale moves.
    out.quot_in_twisted = img_up.units.contains_all(quot_possible(plain));
    out.untwisted_in_plain = img_plain.units.contains_all(quot_possible(down));
    out.plain_in_quot = quot_range(plain).contains_all(img_plain.possible);
    out.quot_count = quot_range(plain).size();
    out.restricted_count = img_plain.units.size();
    return out;
}

InclusionScan scan_inclusions(const PairSpec& spec, const Rational& epsilon, const Window& w, uint64_t cap) {
    w.check();
    InclusionScan scan;
    Rational rho = spec.effective_rho0();
    std::map<long, bool> level_ok;
    for (long m = w.lo; m <= w.hi; ++m) {
        long top = floor_of(rho * m).get_si();
        bool ok = true;
        for (long n = 1; n <= top; ++n) {
            scan.results.push_back(check_inclusions(spec, epsilon, m, n, cap));
            ok = ok && scan.results.back().holds();
        }
        level_ok[m] = ok;
    }
    for (long m = w.hi; m >= w.lo && level_ok[m]; --m) scan.first_level = m;
    return scan;
}

// ---------------------------------------------------------------------------------------------

AuxDivisor default_aux_divisor(const PairSpec& spec) {
    AuxDivisor A;
    A.degree = 1;
    Integer big = std::max(Integer(abs(spec.Y.get_num())), Integer(spec.Y.get_den()));
    A.scale = LogScale::log(Rational(big));
    return A;
}

namespace {

std::vector<std::pair<Rational, long>> e_orders(const PairSpec& spec, long m, long order_y) {
    std::vector<std::pair<Rational, long>> orders;
    for (const auto& e : spec.E)
        if (e.alpha != spec.Y) orders.emplace_back(e.alpha, ceil_of(Rational(m) * e.mult).get_si());
    orders.emplace_back(spec.Y, std::max(0L, order_y));
    return orders;
}

// Restricted image of sections of m D(log 2) + n A vanishing along mE with order `order_y` at Y.
Integer fe_restricted_count(const PairSpec& spec, const AuxDivisor& A, long m, long n, long order_y, Kind kind,
                            uint64_t cap) {
    long degree = m * spec.degree + n * A.degree;
    LogScale scale = spec.lambda.times(m * spec.degree) + LogScale::log(2) + A.scale.times(n);
    SectionSpace S = polynomial_space(degree, scale, spec.mode, e_orders(spec, m, order_y), "restricted");
    return restricted_image(S, spec.Y, kind, cap).units.size();
}

InequalityCheck fe_report(const std::string& label, Kind star, long m, long n, long rank, const Integer& big,
                          const Integer& small, const Integer& restricted) {
    double lhs = log_count(big) - log_count(small);
    double rhs = static_cast<double>(n) * log_count(restricted);
    double bound = kLog6 * static_cast<double>(rank);
    bool lower = small <= big;
    bool upper = big <= small * power(restricted, static_cast<unsigned long>(n)) *
                            power(Integer(6), static_cast<unsigned long>(rank));
    DiscrepancyReport rep = one_sided(m, lhs, rhs, bound, upper);
    if (!lower) {
        rep.satisfied = false;
        rep.slack = std::min(rep.slack, lhs);
        if (rep.slack >= 0) rep.slack = -std::numeric_limits<double>::denorm_min();
    }
    return {label, star, rep};
}

}  // namespace

std::vector<InequalityCheck> check_fe_bounds(const PairSpec& spec, long n, long m, uint64_t cap,
                                             const std::optional<AuxDivisor>& aux) {
    validate(spec);
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    AuxDivisor A = aux ? *aux : default_aux_divisor(spec);
    if (A.degree < 1) throw std::invalid_argument("auxiliary divisor must have positive degree");
    {
        // Witnesses: Gamma^s_{X|Y}(A) and Gamma^s_{X|Y}(A; Y) contain nonzero elements.
        for (long k : {0L, 1L}) {
            if (k > A.degree) throw std::invalid_argument("auxiliary divisor degree too small for a witness");
            SectionSpace S = polynomial_space(A.degree, A.scale, spec.mode, {{spec.Y, k}}, "aux");
            RestrictedImage img = restricted_image(S, spec.Y, Kind::Small, cap);
            if (img.generator == 0 || img.units == IntervalSet::range(0, 0) || img.units.empty())
                throw std::invalid_argument("auxiliary divisor has no nonzero small restricted section" +
                                            std::string(k ? " vanishing on Y" : ""));
        }
    }
    long kY = y_order(spec, m, 0);
    long rank = m * spec.degree + 1;
    std::vector<InequalityCheck> out;
    for (Kind star : {Kind::StrictlySmall, Kind::Small}) {
        Integer base = count_small_sections(build_section_space_with_order(spec, m, kY).space, star, cap).lo;
        Integer plus = count_small_sections(build_section_space_with_order(spec, m, kY + n).space, star, cap).lo;
        Integer minus =
            count_small_sections(build_section_space_with_order(spec, m, std::max(kY - n, 0L)).space, star, cap).lo;
        Integer r1 = fe_restricted_count(spec, A, m, n, kY + n, star, cap);
        Integer r2 = fe_restricted_count(spec, A, m, n, kY, star, cap);
        out.push_back(fe_report("fe.add", star, m, n, rank, base, plus, r1));
        out.push_back(fe_report("fe.remove", star, m, n, rank, minus, base, r2));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const InequalityCheck& a, const InequalityCheck& b) { return a.label < b.label; });
    return out;
}

SlopeFit fit_slope(const std::vector<std::pair<long, double>>& points) {
    SlopeFit f;
    size_t n = points.size();
    if (n < 2) return f;
    double mx = 0, my = 0;
    for (const auto& [x, y] : points) mx += static_cast<double>(x), my += y;
    mx /= static_cast<double>(n), my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        double dx = static_cast<double>(x) - mx;
        sxx += dx * dx, sxy += dx * (y - my);
    }
    if (sxx == 0) return f;
    f.slope = sxy / sxx;
    if (n > 2) {
        double a = my - f.slope * mx, ss = 0;
        for (const auto& [x, y] : points) {
            double e = y - (a + f.slope * static_cast<double>(x));
            ss += e * e;
        }
        f.stderr_ = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
    }
    return f;
}

EstimatesReport check_estimates_II(const PairSpec& spec, const FlagSpec& flag, const Rational& r,
                                   const Rational& epsilon, const Window& w, uint64_t cap, const Rational& margin) {
    validate(spec);
    w.check();
    require_center_is_Y(spec, flag);
    require_coeff_max(spec, "check_estimates_II");
    Rational rho = spec.effective_rho0();
    if (r <= 0 || r > rho) throw std::invalid_argument("r must satisfy 0 < r <= rho0");
    if (epsilon <= 0 || epsilon > 1) throw std::invalid_argument("epsilon must lie in (0, 1]");
    PairSpec A = without_E(spec);
    const Integer& p = flag.p;
    double lp = log_of(p), e = to_double(epsilon), rd = to_double(r), rho_d = to_double(rho);
    double dM = majorant_for(spec, margin).delta;
    double I_A = static_cast<double>(spec.degree + 1), I_D = I_A;

    EstimatesReport out;
    out.r = r;
    out.epsilon = epsilon;
    out.C_tilde = constant_C_tilde(1, dM, 1, p, e);
    double base = (kLog4 * dM + 1) / kLog2;
    out.S = base + (1 + (rho_d + 1) * kLog3) + std::log(3 * (rho_d + 1)) * I_A;
    out.S_prime = base + (1 + (rho_d + 1) * kLog18) + kLog6 * I_A;
    out.general_hypothesis = false;  // D - A = 0 here, which is never big relative to Y

    for (long m = w.lo; m <= w.hi; ++m) {
        double dm = static_cast<double>(m);
        long k = ceil_of(r * m).get_si();
        auto slices = order_slices(A, m, 0, k - 1, p, cap);
        long dropped = 0;
        for (const auto& J : slices) dropped += static_cast<long>(J.size());
        double full = log_count(count_small_sections(build_section_space_with_order(A, m, 0).space,
                                                     Kind::StrictlySmall, cap).lo);
        double cut = log_count(count_small_sections(build_section_space_with_order(A, m, k).space,
                                                    Kind::StrictlySmall, cap).lo);
        double Q = full - cut - static_cast<double>(dropped) * lp;
        double lower = -rd * out.C_tilde * dm * dm - I_A * dm * std::log(dm);
        double upper = rd * out.C_tilde * dm * dm;

        double s_emp = std::max(0.0, (lower - Q) / dm), sp_emp = std::max(0.0, (Q - upper) / dm);
        out.S_empirical.emplace_back(m, s_emp);
        out.S_prime_empirical.emplace_back(m, sp_emp);

        DiscrepancyReport rep;
        rep.m = m;
        rep.lhs = Q;
        rep.rhs = lower;
        rep.bound = upper;
        rep.slack = std::min(Q - (lower - out.S * dm), upper + out.S_prime * dm - Q);
        rep.satisfied = rep.slack >= 0;
        rep.constants_used.I = I_A;
        rep.constants_used.delta_upper = dM;
        rep.constants_used.C_tilde = out.C_tilde;
        rep.constants_used.S_slack = s_emp;
        rep.constants_used.S_prime_slack = sp_emp;
        out.levels.push_back(rep);

        // General lower bound, with E kept on the D side.
        double d_full = log_count(count_small_sections(build_section_space(spec, m, 0).space,
                                                       Kind::StrictlySmall, cap).lo);
        double d_cut = log_count(count_small_sections(build_section_space(spec, m, r).space,
                                                      Kind::StrictlySmall, cap).lo);
        double G = d_full - d_cut - static_cast<double>(dropped) * lp;
        double g_lower = -rd * out.C_tilde * dm * dm - I_D * dm * std::log(dm) - out.S * dm;
        DiscrepancyReport gen = one_sided(m, g_lower, G, 0);
        gen.constants_used.I = I_D;
        gen.constants_used.delta_upper = dM;
        gen.constants_used.C_tilde = out.C_tilde;
        gen.constants_used.S_slack = out.S;
        out.general_lower.push_back(gen);
    }
    out.S_fit = fit_slope(out.S_empirical);
    out.S_prime_fit = fit_slope(out.S_prime_empirical);
    out.slack_bounded = out.S_fit.slope - 2 * out.S_fit.stderr_ <= 0 &&
                        out.S_prime_fit.slope - 2 * out.S_prime_fit.stderr_ <= 0;
    return out;
}

// ---------------------------------------------------------------------------------------------

double restricted_intersection_oracle(const PairSpec& spec) {
    validate(spec);
    for (const auto& e : spec.E)
        if (e.alpha != 0 && e.mult != 0) throw std::invalid_argument("outside supported family: E must be supported at 0");
    Rational room = Rational(spec.degree) - spec.total_mult();
    if (room <= 0) throw std::invalid_argument("spec is not Y-big: multiplicities exhaust the degree");
    double lam = spec.lambda.value();
    if (lam == 0) return 0;
    return static_cast<double>(spec.degree) * lam + to_double(room) * y_height(spec);
}

ConcavityReport concavity_check(const std::vector<std::pair<Rational, double>>& samples, double tolerance) {
    if (samples.size() < 3) throw std::invalid_argument("concavity check needs at least 3 samples");
    for (size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i - 1].first < samples[i].first)) throw std::invalid_argument("r grid must be increasing");
    ConcavityReport rep;
    for (const auto& [r, v] : samples) rep.roots.push_back(std::sqrt(std::max(0.0, v)));
    for (size_t i = 0; i + 1 < samples.size(); ++i)
        rep.right_slopes.push_back((rep.roots[i + 1] - rep.roots[i]) /
                                   to_double(samples[i + 1].first - samples[i].first));
    for (size_t i = 1; i + 1 < samples.size(); ++i) {
        double span = to_double(samples[i + 1].first - samples[i - 1].first);
        double d2 = 2 * (rep.right_slopes[i] - rep.right_slopes[i - 1]) / span;
        rep.second_differences.push_back(d2);
        if (d2 > tolerance) rep.violations.push_back(i);
        if (rep.right_slopes[i] > rep.right_slopes[i - 1] + tolerance) rep.slopes_nonincreasing = false;
    }
    rep.concave = rep.violations.empty();
    rep.tolerance = tolerance;
    return rep;
}

DerivativeReport derivative_experiment(const PairSpec& spec, const std::vector<Rational>& r_grid, const Window& w,
                                       uint64_t cap) {
    validate(spec);
    w.check();
    if (spec.mult_at(spec.Y) <= 0)
        throw std::invalid_argument("ord_Y(E) = 0: the derivative experiment needs E to contain Y");
    std::vector<Rational> grid = r_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<Rational> steps;
    for (const auto& h : grid) {
        if (abs(h) > spec.effective_rho0()) throw std::invalid_argument("|r| exceeds rho0");
        if (h == 0) continue;
        if (!std::binary_search(grid.begin(), grid.end(), Rational(-h)))
            throw std::invalid_argument("r grid must be symmetric around 0");
        if (h > 0) steps.push_back(h);
    }
    if (steps.empty()) throw std::invalid_argument("r grid needs a nonzero step");

    DerivativeReport out;
    out.r_grid = grid;
    std::map<Rational, double> vol;
    std::vector<Rational> all = grid;
    if (!std::binary_search(all.begin(), all.end(), Rational(0))) all.insert(std::lower_bound(all.begin(), all.end(), Rational(0)), Rational(0));
    for (const auto& r : all) {
        VolumeEstimate v = truncated_avol(spec, r, w, cap);
        vol[r] = v.extrapolated;
        out.volumes.emplace_back(r, std::move(v));
    }
    double v0 = vol[Rational(0)], sym = 0;
    for (const auto& h : steps) {
        double hd = to_double(h);
        out.left_slopes.push_back((v0 - vol[Rational(-h)]) / hd);
        out.right_slopes.push_back((vol[h] - v0) / hd);
        sym += (vol[h] - vol[Rational(-h)]) / (2 * hd);
    }
    double n = static_cast<double>(steps.size());
    out.symmetric_estimate = sym / n;
    out.left_mean = std::accumulate(out.left_slopes.begin(), out.left_slopes.end(), 0.0) / n;
    out.right_mean = std::accumulate(out.right_slopes.begin(), out.right_slopes.end(), 0.0) / n;
    out.left_right_gap = std::abs(out.left_mean - out.right_mean);
    out.oracle_value = restricted_intersection_oracle(spec);
    out.target = -2 * out.oracle_value;
    if (out.target == 0)
        out.relative_gap = out.symmetric_estimate == 0 ? 0 : HUGE_VAL;
    else
        out.relative_gap = std::abs(out.symmetric_estimate - out.target) / std::abs(out.target);
    std::vector<std::pair<Rational, double>> samples(vol.begin(), vol.end());
    if (samples.size() >= 3) {
        double s = 0, hmin = HUGE_VAL;
        for (const auto& [r, v] : out.volumes)
            if (v.extrapolated > 0) s = std::max(s, intercept_stderr(v.raw) / (2 * std::sqrt(v.extrapolated)));
        for (size_t i = 1; i < samples.size(); ++i) hmin = std::min(hmin, to_double(samples[i].first - samples[i - 1].first));
        out.concavity = concavity_check(samples, std::max(1e-9, 4 * s / (hmin * hmin)));
    }
    return out;
}

// ---------------------------------------------------------------------------------------------

PairSpec scaled_spec(const PairSpec& spec, long a) {
    if (a < 1) throw std::invalid_argument("scaling factor must be a positive integer");
    PairSpec s = spec;
    s.degree = spec.degree * a;
    for (auto& e : s.E) e.mult *= a;
    s.rho0 = spec.rho0 * a;
    return s;
}

PairSpec sum_spec(const PairSpec& s1, const PairSpec& s2) {
    if (s1.Y != s2.Y) throw std::invalid_argument("summands must share Y");
    if (s1.mode != s2.mode) throw std::invalid_argument("summands must share the norm mode");
    if (!s1.lambda.is_rational() || !s2.lambda.is_rational())
        throw std::invalid_argument("sums need rational lambda (the per-H scale is averaged)");
    PairSpec s = s1;
    s.degree = s1.degree + s2.degree;
    s.lambda = LogScale::of((s1.lambda.linear * s1.degree + s2.lambda.linear * s2.degree) / s.degree);
    for (const auto& e : s2.E) {
        auto it = std::find_if(s.E.begin(), s.E.end(), [&](const VanishingPoint& x) { return x.alpha == e.alpha; });
        if (it == s.E.end())
            s.E.push_back(e);
        else
            it->mult += e.mult;
    }
    s.rho0 = 0;
    return s;
}

HomogeneityReport check_homogeneity_bm(const PairSpec& spec, long a, const Window& w, const Window& identity_levels,
                                       const std::optional<PairSpec>& spec2, const Integer& p, uint64_t cap,
                                       double bm_tolerance) {
    validate(spec);
    w.check();
    identity_levels.check();
    HomogeneityReport rep;
    rep.a = a;
    PairSpec big = scaled_spec(spec, a);
    for (long m = identity_levels.lo; m <= identity_levels.hi; ++m) {
        IdentityLevel lvl;
        lvl.m = m;
        lvl.scaled_count = restricted_set(big, m, RestrictedVariant::CL, 0, cap).units.size();
        lvl.base_count = restricted_set(spec, a * m, RestrictedVariant::CL, 0, cap).units.size();
        rep.identity_holds = rep.identity_holds && lvl.scaled_count == lvl.base_count;
        rep.identity.push_back(lvl);
    }
    rep.base_volume = truncated_restricted_vol(spec, RestrictedVariant::CL, w, cap).extrapolated;
    rep.scaled_volume = truncated_restricted_vol(big, RestrictedVariant::CL, w, cap).extrapolated;
    rep.ratio_target = static_cast<double>(a);
    rep.ratio = rep.base_volume == 0 ? 0 : rep.scaled_volume / rep.base_volume;
    rep.ratio_rel_error = std::abs(rep.ratio - rep.ratio_target) / rep.ratio_target;

    PairSpec other = spec;
    if (spec2) {
        other = *spec2;
        validate(other);
    } else {
        if (!spec.lambda.is_rational()) throw std::invalid_argument("default second spec needs rational lambda");
        other.lambda = LogScale::of(spec.lambda.linear / 2);
    }
    PairSpec total = sum_spec(spec, other);
    validate(total);
    rep.vol1 = rep.base_volume;
    rep.vol2 = truncated_restricted_vol(other, RestrictedVariant::CL, w, cap).extrapolated;
    rep.vol_sum = truncated_restricted_vol(total, RestrictedVariant::CL, w, cap).extrapolated;
    rep.bm_slack = rep.vol_sum - (1 - bm_tolerance) * (rep.vol1 + rep.vol2);
    rep.bm_holds = rep.bm_slack >= 0;

    FlagSpec flag{spec.Y, p, FlagVariant::Restricted};
    auto P = build_okounkov_body(spec, flag, BodyVariant::RestrictedCL, w, 0, cap).body;
    auto Q = build_okounkov_body(other, flag, BodyVariant::RestrictedCL, w, 0, cap).body;
    rep.body_len1 = P.empty() ? Rational(0) : polytope_volume(P);
    rep.body_len2 = Q.empty() ? Rational(0) : polytope_volume(Q);
    if (P.empty() || Q.empty()) {
        rep.body_len_sum = rep.body_len1 + rep.body_len2;
        rep.body_bm_exact = true;
    } else {
        rep.body_len_sum = polytope_volume(minkowski_sum(P, Q));
        rep.body_bm_exact = brunn_minkowski_holds(rep.body_len_sum, rep.body_len1, rep.body_len2, 1);
    }
    return rep;
}

}  // namespace arvol
