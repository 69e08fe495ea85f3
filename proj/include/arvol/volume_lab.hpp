#pragma once

#include "arvol/adelic.hpp"
#include "arvol/flags.hpp"
#include "arvol/geometry.hpp"
#include "arvol/report.hpp"
#include "arvol/toy.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace arvol {

struct Window {
    long lo = 8, hi = 40;
    void check() const;
};

// Enumeration cap from ARVOL_CAP, else 10^7.
uint64_t default_cap();

struct Series {
    std::vector<std::pair<long, double>> raw;  // (m, normalized count)
    double extrapolated = 0;
    double fit_residual = 0;
    bool operator==(const Series&) const = default;
};

// Least-squares fit of A + B/m; returns A and the root-mean-square residual.
Series fit_series(std::vector<std::pair<long, double>> raw);
// Standard error of the fitted A.
double intercept_stderr(const std::vector<std::pair<long, double>>& raw);

// Normalized by m^(d+1)/(d+1)!. Interval norms add an upper series; `raw` then holds the lower one.
struct VolumeEstimate {
    int d = 1;
    std::vector<std::pair<long, double>> raw;
    double extrapolated = 0;
    double fit_residual = 0;
    std::optional<Series> upper;
    bool operator==(const VolumeEstimate&) const = default;
};

// ---------------------------------------------------------------------------------------------
// Constants.

struct Constants {
    long m = 1;
    Integer p{2};
    Rational epsilon;
    double I = 0;
    long I_witness = 1;
    double delta_upper = 0;
    Rational delta_argmin;  // mu of the test divisor H(mu) attaining the bound
    double C = 0, C_prime = 0, C_tilde = 0;
};

// Closed forms over Q: C = I (log 4 delta + log(4p) log(4 p I m^dim) / m), C' = I delta log 4,
// C~ = I_M (log 4 delta + eps) / log p + eps I_N.
double constant_C(double I, double delta, const Integer& p, long m, int dim = 1);
double constant_C_prime(double I, double delta);
double constant_C_tilde(double I_M, double delta, double I_N, const Integer& p, double eps);

// Test family for the delta bound: H(mu) with mu in {0, 1/4, ..., 2}.
std::vector<Rational> delta_test_family();
Constants evaluate_constants(const PairSpec& spec, long m, const Integer& p, const Rational& epsilon);

// Majorizing model divisor on Y: degree a, scale lambda + margin.
struct Majorant {
    Rational margin{1, 10};
    double delta = 0;  // a (lambda + margin + height of Y)
};
Majorant majorant_for(const PairSpec& spec, const Rational& margin = Rational(1, 10));

// ---------------------------------------------------------------------------------------------
// Restricted section sets on Y (a rank-one lattice): elements u * unit / denominator.

enum class RestrictedVariant { CL, Quot };
std::string to_string(RestrictedVariant v);
RestrictedVariant parse_restricted_variant(const std::string& s);

struct RestrictedSet {
    Integer unit, denominator;
    IntervalSet units;     // certain members
    IntervalSet possible;  // includes boundary-uncertain members
    long order = 0;

    CountInterval count() const { return {units.size(), possible.size()}; }
    // p-adic orders of the nonzero certain elements.
    std::vector<long> valuations(const Integer& p) const;
};

RestrictedSet restricted_set(const SectionSpace& S, const Rational& alpha, RestrictedVariant variant, uint64_t cap);
RestrictedSet restricted_set(const PairSpec& spec, long m, RestrictedVariant variant, const Rational& extra_y,
                             uint64_t cap);

// ---------------------------------------------------------------------------------------------
// Discrepancies, bodies, volumes.

struct YuanResult {
    DiscrepancyReport report;
    RestrictedVariant variant = RestrictedVariant::CL;
    CountInterval count;
    long distinct_valuations = 0;
    bool majorant_contains = false;
};
YuanResult yuan_discrepancy(const PairSpec& spec, const FlagSpec& flag, RestrictedVariant variant, long m,
                            uint64_t cap, const Rational& margin = Rational(1, 10));

enum class BodyVariant { YMFull, RestrictedCL, RestrictedQuot };
std::string to_string(BodyVariant v);
BodyVariant parse_body_variant(const std::string& s);

struct BodyStats {
    std::vector<long> levels;
    std::vector<long> distinct;     // distinct valuation vectors per level
    std::vector<double> normalized;  // distinct / m^(body dimension)
};
struct OkounkovBody {
    RationalPolytope body;
    BodyStats stats;
};
OkounkovBody build_okounkov_body(const PairSpec& spec, const FlagSpec& flag, BodyVariant variant, const Window& w,
                                 const Rational& extra_y, uint64_t cap);

VolumeEstimate truncated_avol(const PairSpec& spec, const Rational& extra_y, const Window& w, uint64_t cap);
VolumeEstimate truncated_restricted_vol(const PairSpec& spec, RestrictedVariant variant, const Window& w, uint64_t cap,
                                        const Rational& extra_y = 0);

// ---------------------------------------------------------------------------------------------
// Inclusions between quotient-norm and restricted sets.

struct InclusionResult {
    long m = 0, n = 0;
    bool quot_in_twisted = false;    // quot(mA; nY) inside restricted(m A(eps); nY)
    bool untwisted_in_plain = false;  // quot(m A(-eps); nY) inside restricted(mA; nY)
    bool plain_in_quot = false;       // restricted(mA; nY) inside quot(mA; nY)
    Integer quot_count, restricted_count;
    bool holds() const { return quot_in_twisted && untwisted_in_plain; }
};
// The auxiliary divisor is the spec divisor with E dropped.
InclusionResult check_inclusions(const PairSpec& spec, const Rational& epsilon, long m, long n, uint64_t cap);

struct InclusionScan {
    std::vector<InclusionResult> results;  // every (m, n) with 1 <= n <= rho0 m
    std::optional<long> first_level;        // smallest m from which every later level holds
};
InclusionScan scan_inclusions(const PairSpec& spec, const Rational& epsilon, const Window& w, uint64_t cap);

// ---------------------------------------------------------------------------------------------
// Finite-level inequality checks.

struct AuxDivisor {
    long degree = 1;
    LogScale scale;
};
// Degree one with scale log max(|u|, |v|) of Y, the smallest scale making v t - u small.
AuxDivisor default_aux_divisor(const PairSpec& spec);

// Four reports: (twist by +nY, twist by -nY) x (ss, s). lhs = difference of counts, rhs = n times the
// restricted term, bound = log 6 times the rank; both the lower bound 0 and the upper bound are required.
std::vector<InequalityCheck> check_fe_bounds(const PairSpec& spec, long n, long m, uint64_t cap,
                                             const std::optional<AuxDivisor>& aux = std::nullopt);

struct SlopeFit {
    double slope = 0, stderr_ = 0;
};
SlopeFit fit_slope(const std::vector<std::pair<long, double>>& points);

struct EstimatesReport {
    Rational r, epsilon;
    double C_tilde = 0, S = 0, S_prime = 0;  // S and S' evaluated from their closed forms
    std::vector<DiscrepancyReport> levels;   // lhs = central quantity, rhs = lower envelope, bound = upper envelope
    std::vector<std::pair<long, double>> S_empirical, S_prime_empirical;
    SlopeFit S_fit, S_prime_fit;
    bool slack_bounded = false;
    bool general_hypothesis = false;  // (D - A; E) big relative to Y
    std::vector<DiscrepancyReport> general_lower;
};
EstimatesReport check_estimates_II(const PairSpec& spec, const FlagSpec& flag, const Rational& r,
                                   const Rational& epsilon, const Window& w, uint64_t cap,
                                   const Rational& margin = Rational(1, 10));

// Family supremum for toric pairs with E supported at 0.
double restricted_intersection_oracle(const PairSpec& spec);

struct ConcavityReport {
    std::vector<double> roots;               // value^(1/2)
    std::vector<double> second_differences;  // divided differences of the roots
    std::vector<double> right_slopes;
    std::vector<size_t> violations;  // middle indices of non-concave triples
    bool concave = true;
    bool slopes_nonincreasing = true;
    double tolerance = 0;
};
ConcavityReport concavity_check(const std::vector<std::pair<Rational, double>>& samples, double tolerance = 1e-9);

struct DerivativeReport {
    std::vector<Rational> r_grid;
    std::vector<double> left_slopes, right_slopes;
    double symmetric_estimate = 0;
    double oracle_value = 0;
    double target = 0;  // -(dim X + 1) * oracle
    double relative_gap = 0;
    double left_mean = 0, right_mean = 0, left_right_gap = 0;
    std::vector<std::pair<Rational, VolumeEstimate>> volumes;
    ConcavityReport concavity;
};
// Concavity is judged with tolerance 4 s / h^2 on the roots, s the largest intercept standard error
// propagated through the square root and h the smallest grid step.
DerivativeReport derivative_experiment(const PairSpec& spec, const std::vector<Rational>& r_grid, const Window& w,
                                       uint64_t cap);

struct IdentityLevel {
    long m = 0;
    Integer scaled_count, base_count;
};
struct HomogeneityReport {
    long a = 1;
    std::vector<IdentityLevel> identity;
    bool identity_holds = true;
    double base_volume = 0, scaled_volume = 0, ratio = 0, ratio_target = 0, ratio_rel_error = 0;
    double vol1 = 0, vol2 = 0, vol_sum = 0, bm_slack = 0;
    bool bm_holds = false;  // vol_sum >= (1 - tolerance) (vol1 + vol2)
    Rational body_len1, body_len2, body_len_sum;
    bool body_bm_exact = false;
};
PairSpec scaled_spec(const PairSpec& spec, long a);
PairSpec sum_spec(const PairSpec& s1, const PairSpec& s2);
HomogeneityReport check_homogeneity_bm(const PairSpec& spec, long a, const Window& w, const Window& identity_levels,
                                       const std::optional<PairSpec>& spec2, const Integer& p, uint64_t cap,
                                       double bm_tolerance = 0.02);

}  // namespace arvol
