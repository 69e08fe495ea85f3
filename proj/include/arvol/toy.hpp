#pragma once

#include "arvol/adelic.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace arvol {

struct VanishingPoint {
    Rational alpha;
    Rational mult;
    bool operator==(const VanishingPoint&) const = default;
};

// A pair (a H(lambda); E) on the projective line over Q with a marked rational point Y.
// The archimedean scale is per unit of H: at level m the norm is exp(-m a lambda) times the base norm.
struct PairSpec {
    long degree = 1;
    LogScale lambda;
    NormMode mode = NormMode::CoeffMax;
    std::vector<VanishingPoint> E;
    Rational Y{0};
    Rational rho0{0};  // 0 selects degree - sum of multiplicities

    Rational total_mult() const;
    Rational mult_at(const Rational& alpha) const;
    Rational effective_rho0() const;
    bool operator==(const PairSpec&) const = default;
};

// Throws std::invalid_argument describing the first violated invariant.
void validate(const PairSpec& spec);

// Integer polynomials of degree <= degree vanishing to the given orders, coefficient coordinates t^0..t^degree.
struct SectionSpace {
    AdelicSpace space;
    long degree = 0;
    std::vector<std::pair<Rational, long>> orders;  // distinct points, positive orders
    IntVector vanishing;                            // primitive generator of the vanishing ideal

    long order_at(const Rational& alpha) const;
    long rank() const { return static_cast<long>(space.rank()); }
};

SectionSpace polynomial_space(long degree, const LogScale& scale, NormMode mode,
                              const std::vector<std::pair<Rational, long>>& orders, std::string label = "");

// Level-m vanishing order at Y: ceil(m (e_Y + extra)), clamped at 0.
long y_order(const PairSpec& spec, long m, const Rational& extra_y);
// Level m, E replaced by E + extra_y Y; the scale may be shifted by `twist`.
SectionSpace build_section_space(const PairSpec& spec, long m, const Rational& extra_y = 0,
                                 const LogScale& twist = LogScale());
// Same lattice data with the Y order given directly.
SectionSpace build_section_space_with_order(const PairSpec& spec, long m, long order_y,
                                            const LogScale& twist = LogScale());

// Coefficient of (t - alpha)^n, as functional . x / denominator on degree <= N polynomials.
struct Restriction {
    IntVector functional;
    Integer denominator;
    long order = 0;
};
Restriction taylor_functional(const Rational& alpha, long degree, long n);
LinearMap restriction_to_Y(const PairSpec& spec, long m, long n);

// Image of the section set under the order-`order_at(Y)` restriction at Y, as units of generator/denominator.
struct RestrictedImage {
    Integer generator, denominator;
    IntervalSet units;     // certain members
    IntervalSet possible;  // certain plus boundary-uncertain members
    long order = 0;
};
RestrictedImage restricted_image(const SectionSpace& S, const Rational& alpha, Kind kind, uint64_t cap);

// a (lambda + log max(|u|, |v|)) for beta = u / v in lowest terms; (u, v) = (1, 0) is the point at infinity.
LogScale height(const PairSpec& spec, const Integer& u, const Integer& v);
LogScale height(const PairSpec& spec, const Rational& beta);

struct NormValue {
    std::optional<Integer> exact_base;  // set when the base norm is known exactly
    double base_lo = 0, base_hi = 0;
    double lo = 0, hi = 0;  // enclosure of exp(-scale) * base
};
NormValue arch_norm_eval(const IntVector& poly, NormMode mode, const LogScale& scale);

IntVector poly_mul(const IntVector& a, const IntVector& b);

}  // namespace arvol
