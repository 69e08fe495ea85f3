// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "arvol/adelic.hpp"
#include "arvol/flags.hpp"
#include "arvol/toy.hpp"
#include "arvol/volume_lab.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace arvol;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_seconds, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = budget_seconds <= 0 || secs <= budget_seconds;
    bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %2d %s: %s [%.2fs%s]\n", pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

bool within(double value, double target, double rel) { return std::fabs(value - target) <= rel * std::fabs(target); }

PairSpec plain_spec() {
    PairSpec s;
    s.lambda = LogScale::of(1);
    return s;
}

PairSpec toy1() {
    PairSpec s = plain_spec();
    s.E = {{Rational(0), Rational(1, 4)}};
    return s;
}

}  // namespace

int main() {
    const uint64_t cap = default_cap();
    const FlagSpec full{Rational(0), Integer(2), FlagVariant::Full};

    criterion(1, "counting lemma suite", 120, [&] {
        auto rep = run_lemma_suite({CountingKind::Rescale, CountingKind::Combined, CountingKind::Filtration,
                                    CountingKind::QuotExact},
                                   300, 7, cap);
        std::ostringstream os;
        bool stars_ok = true;
        for (const auto& k : rep.kinds) os << to_string(k.kind) << " " << k.instances << "/" << k.violations << " ";
        for (const auto& e : rep.entries) {
            bool ss = false, s = false;
            for (const auto& c : e.checks) (c.star == Kind::StrictlySmall ? ss : s) = true;
            stars_ok = stars_ok && ss && s;
        }
        os << "(instances/violations), both stars " << (stars_ok ? "yes" : "no");
        return Outcome{rep.all_satisfied() && stars_ok && rep.entries.size() == 1200, os.str()};
    });

    criterion(2, "valuation additivity", 0, [&] {
        bool hand = valuation(full, IntVector{0, 0, 0, 1}) == ValuationVector{3, 0} &&
                    valuation(full, IntVector{4, 0, 1}) == ValuationVector{0, 2} &&
                    valuation(FlagSpec{Rational(1), Integer(2), FlagVariant::Full}, IntVector{2, -4, 2}) ==
                        ValuationVector{2, 1};
        std::vector<FlagSpec> flags;
        for (long c : {0L, 1L, -3L})
            for (long p : {2L, 3L, 5L, 7L}) {
                FlagSpec f{Rational(c), Integer(p), FlagVariant::Full};
                if (validate_good_flag(f).good) flags.push_back(f);
            }
        std::mt19937_64 rng(500);
        auto poly = [&] {
            for (;;) {
                IntVector a(1 + rng() % 5);
                bool zero = true;
                for (auto& x : a) {
                    x = static_cast<long>(rng() % 61) - 30;
                    zero = zero && x == 0;
                }
                if (!zero) return a;
            }
        };
        long bad = 0;
        for (int i = 0; i < 500; ++i) {
            const auto& f = flags[static_cast<size_t>(i) % flags.size()];
            IntVector a = poly(), b = poly();
            auto va = valuation(f, a), vb = valuation(f, b);
            if (valuation(f, poly_mul(a, b)) != ValuationVector{va[0] + vb[0], va[1] + vb[1]}) ++bad;
        }
        return Outcome{hand && bad == 0 && !flags.empty(), "500 pairs over " + std::to_string(flags.size()) +
                                                               " flags, " + std::to_string(bad) +
                                                               " failures, hand examples " + (hand ? "ok" : "wrong")};
    });

    double avol_plain = 0;
    criterion(3, "arithmetic volume, a=1 lambda=1", 300, [&] {
        auto v = truncated_avol(plain_spec(), 0, {8, 40}, cap);
        avol_plain = v.extrapolated;
        return Outcome{within(v.extrapolated, 2.0, 0.05),
                       "extrapolated " + fmt(v.extrapolated) + " (target 2, 5%), fit residual " + fmt(v.fit_residual)};
    });

    criterion(4, "YM body volume", 0, [&] {
        auto B = build_okounkov_body(plain_spec(), full, BodyVariant::YMFull, {8, 40}, 0, cap);
        double vol = to_double(polytope_volume(B.body));
        double target = 1 / std::log(2.0);
        double scaled = 2 * vol * std::log(2.0);
        bool ok = within(vol, target, 0.10) && avol_plain > 0 && within(scaled, avol_plain, 0.10);
        return Outcome{ok, "vol " + fmt(vol) + " vs 1/log2 " + fmt(target) + "; 2 vol log2 " + fmt(scaled) +
                               " vs avol " + fmt(avol_plain)};
    });

    criterion(5, "restricted volume and sandwich at Y=0", 0, [&] {
        auto cl = truncated_restricted_vol(plain_spec(), RestrictedVariant::CL, {8, 40}, cap);
        auto scan = scan_inclusions(plain_spec(), Rational(1, 10), {8, 40}, cap);
        long broken = 0;
        for (const auto& r : scan.results)
            if (!r.holds()) ++broken;
        return Outcome{within(cl.extrapolated, 1.0, 0.05) && broken == 0 && !scan.results.empty(),
                       "CL " + fmt(cl.extrapolated) + " (target 1, 5%); sandwich " + std::to_string(broken) + " of " +
                           std::to_string(scan.results.size()) + " (m,n) broken, eps 1/10"};
    });

    criterion(6, "Yuan discrepancy, 3 specs", 0, [&] {
        struct Case {
            long a;
            Rational lambda;
            long p;
        };
        std::vector<Case> cases{{1, Rational(1), 2}, {2, Rational(1, 2), 3}, {3, Rational(1, 3), 5}};
        std::ostringstream os;
        bool ok = true;
        for (const auto& c : cases) {
            PairSpec s;
            s.degree = c.a;
            s.lambda = LogScale::of(c.lambda);
            FlagSpec f{Rational(0), Integer(c.p), FlagVariant::Restricted};
            long bad = 0;
            double worst = HUGE_VAL;
            for (long m = 2; m <= 30; ++m) {
                auto y = yuan_discrepancy(s, f, RestrictedVariant::CL, m, cap);
                if (!y.report.satisfied) ++bad;
                worst = std::min(worst, y.report.slack);
            }
            ok = ok && bad == 0;
            os << "(a=" << c.a << " lambda=" << c.lambda << " p=" << c.p << ": " << bad << " bad, min slack "
               << fmt(worst) << ") ";
        }
        return Outcome{ok, os.str()};
    });

    criterion(7, "derivative of the restricted volume", 900, [&] {
        auto d = derivative_experiment(toy1(), {Rational(-1, 8), Rational(-1, 16), Rational(1, 16), Rational(1, 8)},
                                       {8, 40}, cap);
        double mag = std::fabs(d.symmetric_estimate);
        double lr = std::fabs(d.left_mean - d.right_mean);
        bool slope = within(d.symmetric_estimate, -2.0, 0.10);
        bool sides = lr < 0.10 * mag;
        bool magnitude = within(mag, 2.0, 0.10);
        return Outcome{slope && sides && magnitude,
                       "symmetric " + fmt(d.symmetric_estimate) + " (target -2); |L-R| " + fmt(lr) +
                           "; magnitude " + fmt(mag) + "; concave " + (d.concavity.concave ? "yes" : "no")};
    });

    criterion(8, "homogeneity", 0, [&] {
        auto h = check_homogeneity_bm(plain_spec(), 2, {8, 40}, {1, 20}, std::nullopt, 2, cap);
        return Outcome{h.identity_holds && within(h.ratio, 2.0, 0.05),
                       "identity m<=20 " + std::string(h.identity_holds ? "exact" : "broken") + "; ratio " +
                           fmt(h.ratio) + " (target 2, 5%)"};
    });

    criterion(9, "Brunn-Minkowski", 0, [&] {
        auto h = check_homogeneity_bm(plain_spec(), 2, {8, 40}, {1, 2}, std::nullopt, 2, cap);
        return Outcome{h.bm_holds && h.body_bm_exact,
                       "vol(sum) " + fmt(h.vol_sum) + " vs " + fmt(h.vol1) + " + " + fmt(h.vol2) + " (2%), slack " +
                           fmt(h.bm_slack) + "; bodies " + (h.body_bm_exact ? "exact" : "broken")};
    });

    criterion(10, "FE bounds and second estimates", 0, [&] {
        long checks = 0, bad = 0;
        for (const auto& spec : {plain_spec(), toy1()})
            for (long m = 2; m <= 20; ++m)
                for (long n = 0; n <= 2; ++n)
                    for (const auto& c : check_fe_bounds(spec, n, m, cap)) {
                        ++checks;
                        if (!c.report.satisfied) ++bad;
                    }
        auto est = check_estimates_II(toy1(), full, Rational(1, 4), Rational(1, 10), {8, 32}, cap);
        return Outcome{bad == 0 && est.slack_bounded,
                       "FE " + std::to_string(bad) + " of " + std::to_string(checks) + " violated; S slope " +
                           fmt(est.S_fit.slope) + " +- " + fmt(est.S_fit.stderr_) + ", S' slope " +
                           fmt(est.S_prime_fit.slope) + " +- " + fmt(est.S_prime_fit.stderr_) + ", bounded " +
                           (est.slack_bounded ? "yes" : "no")};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
