#pragma once

#include "arvol/lattice.hpp"
#include "arvol/numeric.hpp"
#include "arvol/report.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace arvol {

enum class NormMode { CoeffMax, CircleSup };
enum class Kind { Small, StrictlySmall };  // norm <= 1 and norm < 1

std::string to_string(NormMode m);
NormMode parse_norm_mode(const std::string& s);
std::string to_string(Kind k);

// The archimedean norm exp(-scale) * base(x), base = max |x_k| or sup over |z| = 1 of sum x_k z^k.
struct ArchNorm {
    NormMode mode = NormMode::CoeffMax;
    LogScale scale;
};

struct AdelicSpace {
    size_t ambient_dim = 0;
    IntMatrix basis;  // Hermite normal form, full column rank
    ArchNorm norm;
    std::string label;

    size_t rank() const { return basis.ncols(); }
};

AdelicSpace make_space(IntMatrix basis, ArchNorm norm, std::string label = "");

struct CountInterval {
    Integer lo, hi;
    bool exact() const { return lo == hi; }
    bool operator==(const CountInterval&) const = default;
};

// Certified enclosure of sup over |z| = 1 of |sum c_k z^k|.
struct Enclosure {
    double lo = 0, hi = 0;
};
Enclosure circle_sup(const IntVector& coeffs, size_t grid);
Enclosure circle_sup_to_width(const IntVector& coeffs, double rel_width, size_t max_grid = size_t(1) << 22);
// Exact value when the elementary bounds already coincide (monomials, same-sign coefficients...).
std::optional<Integer> circle_sup_exact(const IntVector& coeffs);

enum class Membership { In, Out, Unknown };
Membership classify(const IntVector& x, const ArchNorm& norm, Kind kind);

struct SectionList {
    std::vector<IntVector> vectors;
    std::vector<bool> certain;  // false: the norm enclosure straddles the threshold
    CountInterval count;
};

SectionList enumerate_small_sections(const AdelicSpace& V, Kind kind, uint64_t cap);
CountInterval count_small_sections(const AdelicSpace& V, Kind kind, uint64_t cap);
// Integer box radius containing every candidate section.
Integer candidate_radius(const ArchNorm& norm, Kind kind);

AdelicSpace rescale(const AdelicSpace& V, const LogScale& lambda);
AdelicSpace subspace(const AdelicSpace& V, const IntMatrix& sublattice);

struct LinearMap {
    RatMatrix matrix;
    IntMatrix kernel_basis;  // spans ker(matrix) intersected with the lattice
};
LinearMap make_linear_map(const RatMatrix& matrix, const AdelicSpace& V);
RatMatrix coordinate_projection(size_t ambient_dim, const std::vector<size_t>& coords);

CountInterval image_count(const AdelicSpace& V, const RatMatrix& map, Kind kind, uint64_t cap);

// Integer span intersected with the real convex hull; span rank at most 3.
std::vector<RatVector> cl_hull(const std::vector<RatVector>& vectors, uint64_t cap = 10000000);

struct QuotientSections {
    std::vector<RatVector> elements;  // certain members, sorted
    CountInterval count;
};
// Image lattice elements whose quotient norm (infimum over the real fibre) is < 1.
QuotientSections quotient_norm_sections(const AdelicSpace& V, const RatMatrix& map, uint64_t cap);

// Rank-1 quotient: the map x -> f.x / denominator. Image elements are u * generator / denominator;
// those with |u| <= certain_radius have quotient norm < 1, those with |u| > possible_radius do not.
struct QuotientUnits {
    Integer generator, denominator, certain_radius, possible_radius;
    CountInterval count() const { return {2 * certain_radius + 1, 2 * possible_radius + 1}; }
};
QuotientUnits quotient_units(const AdelicSpace& V, const IntVector& f, const Integer& denominator);

// sup { f(x) : x in the real span of the lattice, max |x_i| <= 1 }, with a maximizer.
struct FunctionalSup {
    Rational value;
    RatVector argmax;
};
FunctionalSup functional_sup(const IntMatrix& basis, const IntVector& f);

// ---------------------------------------------------------------------------------------------
// Counting inequalities for normed lattices.

enum class CountingKind { Rescale, ExactSeq, Combined, Filtration, QuotExact };
std::string to_string(CountingKind k);
CountingKind parse_counting_kind(const std::string& s);

struct CountingInstance {
    CountingKind kind = CountingKind::Rescale;
    AdelicSpace space;
    LogScale shift;                    // rescale amount
    RatMatrix map;                     // exact_seq, combined: V -> V''; quot_exact: r
    RatMatrix second_map;              // quot_exact: r'
    std::vector<IntMatrix> chain;      // filtration: V_1 = V, V_2, ..., V_l (V_{l+1} = 0)
    std::vector<RatMatrix> chain_maps; // r_n with kernel V_{n+1} on V_n
};

struct InequalityCheck {
    std::string label;
    Kind star = Kind::StrictlySmall;
    DiscrepancyReport report;
};

std::vector<InequalityCheck> verify_counting_inequality(const CountingInstance& inst, uint64_t cap, long index = 0);

// Random full-rank HNF sublattice of Z^n (n <= max_rank) with coordinate-flag maps.
CountingInstance random_counting_instance(CountingKind kind, std::mt19937_64& rng, int max_rank = 6);

struct LemmaEntry {
    CountingKind kind = CountingKind::Rescale;
    long index = 0;
    bool satisfied = true;
    std::vector<InequalityCheck> checks;
};

struct LemmaKindSummary {
    CountingKind kind = CountingKind::Rescale;
    long instances = 0, checks = 0, violations = 0;
};

struct LemmaSuiteReport {
    uint64_t seed = 0;
    std::vector<LemmaKindSummary> kinds;
    std::vector<LemmaEntry> entries;
    bool all_satisfied() const;
};

// One generator seeded once, consumed kind by kind in the given order.
LemmaSuiteReport run_lemma_suite(const std::vector<CountingKind>& kinds, long instances, uint64_t seed, uint64_t cap);

}  // namespace arvol
