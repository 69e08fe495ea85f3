#include "arvol/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace arvol {

namespace {

Json rational_json(const Rational& q) { return format_rational(q); }

Rational rational_from(const Json& j, const char* field) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw ConfigError(std::string(field) + ": expected a rational \"p/q\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(std::string(field) + ": " + e.what());
    }
}

Json integer_json(const Integer& n) {
    if (n.fits_slong_p()) return n.get_si();
    return n.get_str();
}

Integer integer_from(const Json& j, const char* field) {
    if (j.is_number_integer()) return Integer(j.get<long>());
    if (j.is_string()) {
        Integer n;
        if (n.set_str(j.get<std::string>(), 10) == 0) return n;
    }
    throw ConfigError(std::string(field) + ": expected an integer");
}

const Json& field(const Json& j, const char* name) {
    if (!j.is_object()) throw ConfigError("expected a JSON object");
    auto it = j.find(name);
    if (it == j.end()) throw ConfigError(std::string("missing field '") + name + "'");
    return *it;
}

template <class T>
std::vector<T> list_from(const Json& j) {
    std::vector<T> out;
    for (const auto& x : j) out.push_back(x.get<T>());
    return out;
}

Json pairs_json(const std::vector<std::pair<long, double>>& v) {
    Json a = Json::array();
    for (const auto& [m, y] : v) a.push_back(Json::array({m, float_json(y)}));
    return a;
}

std::vector<std::pair<long, double>> pairs_from(const Json& j) {
    std::vector<std::pair<long, double>> out;
    for (const auto& x : j) out.emplace_back(x.at(0).get<long>(), float_from_json(x.at(1)));
    return out;
}

Json floats_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(float_json(x));
    return a;
}

std::vector<double> floats_from(const Json& j) {
    std::vector<double> out;
    for (const auto& x : j) out.push_back(float_from_json(x));
    return out;
}

Json opt_float(const std::optional<double>& x) { return x ? float_json(*x) : Json(nullptr); }
std::optional<double> opt_float_from(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return float_from_json(j);
}

std::string kind_name(Kind k) { return k == Kind::StrictlySmall ? "ss" : "s"; }
Kind kind_from(const std::string& s) {
    if (s == "ss") return Kind::StrictlySmall;
    if (s == "s") return Kind::Small;
    throw ConfigError("unknown section kind '" + s + "'");
}

}  // namespace

std::string format_float(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Json float_json(double x) {
    if (!std::isfinite(x)) return format_float(x);
    return std::strtod(format_float(x).c_str(), nullptr);
}

double float_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return HUGE_VAL;
        if (s == "-inf") return -HUGE_VAL;
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ConfigError("expected a number");
}

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError("JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what(), e.byte);
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str());
}

PairSpec parse_pair_spec(const std::string& text) {
    PairSpec spec = parse_json_text(text).get<PairSpec>();
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid spec: ") + e.what());
    }
    return spec;
}

PairSpec load_pair_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_pair_spec(buf.str());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------------------------

void to_json(Json& j, const LogScale& x) { j = x.str(); }
void from_json(const Json& j, LogScale& x) {
    if (j.is_number_integer()) {
        x = LogScale::of(Rational(j.get<long>()));
        return;
    }
    if (!j.is_string()) throw ConfigError("lambda: expected \"p/q\" or \"q+log(r)\"");
    try {
        x = LogScale::parse(j.get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("lambda: ") + e.what());
    }
}

void to_json(Json& j, const CountInterval& x) { j = Json{{"lo", integer_json(x.lo)}, {"hi", integer_json(x.hi)}}; }
void from_json(const Json& j, CountInterval& x) {
    x.lo = integer_from(field(j, "lo"), "lo");
    x.hi = integer_from(field(j, "hi"), "hi");
}

void to_json(Json& j, const VanishingPoint& x) {
    j = Json{{"alpha", rational_json(x.alpha)}, {"mult", rational_json(x.mult)}};
}
void from_json(const Json& j, VanishingPoint& x) {
    x.alpha = rational_from(field(j, "alpha"), "alpha");
    x.mult = rational_from(field(j, "mult"), "mult");
}

void to_json(Json& j, const PairSpec& x) {
    j = Json{{"degree", x.degree},
             {"lambda", x.lambda},
             {"mode", to_string(x.mode)},
             {"E", x.E},
             {"Y", rational_json(x.Y)},
             {"rho0", x.rho0 == 0 ? Json(nullptr) : rational_json(x.rho0)}};
}
void from_json(const Json& j, PairSpec& x) {
    static const std::set<std::string> known{"degree", "lambda", "mode", "E", "Y", "rho0"};
    if (!j.is_object()) throw ConfigError("spec must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ConfigError("unknown spec field '" + k + "'");
    x = PairSpec{};
    if (j.contains("degree")) {
        if (!j["degree"].is_number_integer()) throw ConfigError("degree: expected a positive integer");
        x.degree = j["degree"].get<long>();
    }
    x.lambda = field(j, "lambda").get<LogScale>();
    if (j.contains("mode")) {
        try {
            x.mode = parse_norm_mode(j["mode"].get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(std::string("mode: ") + e.what());
        }
    }
    if (j.contains("E")) {
        if (!j["E"].is_array()) throw ConfigError("E: expected a list of {alpha, mult}");
        x.E = list_from<VanishingPoint>(j["E"]);
    }
    if (j.contains("Y")) x.Y = rational_from(j["Y"], "Y");
    if (j.contains("rho0") && !j["rho0"].is_null()) x.rho0 = rational_from(j["rho0"], "rho0");
}

void to_json(Json& j, const FlagSpec& x) {
    j = Json{{"center", rational_json(x.center)}, {"p", integer_json(x.p)}, {"variant", to_string(x.variant)}};
}
void from_json(const Json& j, FlagSpec& x) {
    x.center = rational_from(field(j, "center"), "center");
    x.p = integer_from(field(j, "p"), "p");
    x.variant = parse_flag_variant(field(j, "variant").get<std::string>());
}

void to_json(Json& j, const FlagCondition& x) { j = Json{{"name", x.name}, {"pass", x.pass}, {"detail", x.detail}}; }
void from_json(const Json& j, FlagCondition& x) {
    x.name = field(j, "name").get<std::string>();
    x.pass = field(j, "pass").get<bool>();
    x.detail = field(j, "detail").get<std::string>();
}

void to_json(Json& j, const FlagReport& x) { j = Json{{"good", x.good}, {"conditions", x.conditions}}; }
void from_json(const Json& j, FlagReport& x) {
    x.good = field(j, "good").get<bool>();
    x.conditions = list_from<FlagCondition>(field(j, "conditions"));
}

void to_json(Json& j, const ValuationCloud& x) {
    Json pts = Json::array();
    for (const auto& [w, k] : x.multiplicity) pts.push_back(Json{{"w", w}, {"multiplicity", k}});
    j = Json{{"m", x.m}, {"points", pts}};
}
void from_json(const Json& j, ValuationCloud& x) {
    x.m = field(j, "m").get<long>();
    x.multiplicity.clear();
    for (const auto& p : field(j, "points"))
        x.multiplicity[field(p, "w").get<ValuationVector>()] = field(p, "multiplicity").get<long>();
}

void to_json(Json& j, const ConstantsUsed& x) {
    j = Json{{"I", opt_float(x.I)},
             {"delta_upper", opt_float(x.delta_upper)},
             {"C", opt_float(x.C)},
             {"C_prime", opt_float(x.C_prime)},
             {"C_tilde", opt_float(x.C_tilde)},
             {"S_slack", opt_float(x.S_slack)},
             {"S_prime_slack", opt_float(x.S_prime_slack)}};
}
void from_json(const Json& j, ConstantsUsed& x) {
    x.I = opt_float_from(field(j, "I"));
    x.delta_upper = opt_float_from(field(j, "delta_upper"));
    x.C = opt_float_from(field(j, "C"));
    x.C_prime = opt_float_from(field(j, "C_prime"));
    x.C_tilde = opt_float_from(field(j, "C_tilde"));
    x.S_slack = opt_float_from(field(j, "S_slack"));
    x.S_prime_slack = opt_float_from(field(j, "S_prime_slack"));
}

void to_json(Json& j, const DiscrepancyReport& x) {
    j = Json{{"m", x.m},
             {"lhs", float_json(x.lhs)},
             {"rhs", float_json(x.rhs)},
             {"bound", float_json(x.bound)},
             {"slack", float_json(x.slack)},
             {"satisfied", x.satisfied},
             {"constants_used", x.constants_used}};
}
void from_json(const Json& j, DiscrepancyReport& x) {
    x.m = field(j, "m").get<long>();
    x.lhs = float_from_json(field(j, "lhs"));
    x.rhs = float_from_json(field(j, "rhs"));
    x.bound = float_from_json(field(j, "bound"));
    x.slack = float_from_json(field(j, "slack"));
    x.satisfied = field(j, "satisfied").get<bool>();
    x.constants_used = field(j, "constants_used").get<ConstantsUsed>();
}

void to_json(Json& j, const InequalityCheck& x) {
    j = Json{{"label", x.label}, {"star", kind_name(x.star)}, {"report", x.report}};
}
void from_json(const Json& j, InequalityCheck& x) {
    x.label = field(j, "label").get<std::string>();
    x.star = kind_from(field(j, "star").get<std::string>());
    x.report = field(j, "report").get<DiscrepancyReport>();
}

void to_json(Json& j, const LemmaEntry& x) {
    j = Json{{"kind", to_string(x.kind)}, {"index", x.index}, {"satisfied", x.satisfied}, {"checks", x.checks}};
}
void from_json(const Json& j, LemmaEntry& x) {
    x.kind = parse_counting_kind(field(j, "kind").get<std::string>());
    x.index = field(j, "index").get<long>();
    x.satisfied = field(j, "satisfied").get<bool>();
    x.checks = list_from<InequalityCheck>(field(j, "checks"));
}

void to_json(Json& j, const LemmaKindSummary& x) {
    j = Json{{"kind", to_string(x.kind)},
             {"instances", x.instances},
             {"checks", x.checks},
             {"violations", x.violations}};
}
void from_json(const Json& j, LemmaKindSummary& x) {
    x.kind = parse_counting_kind(field(j, "kind").get<std::string>());
    x.instances = field(j, "instances").get<long>();
    x.checks = field(j, "checks").get<long>();
    x.violations = field(j, "violations").get<long>();
}

void to_json(Json& j, const LemmaSuiteReport& x) {
    j = Json{{"seed", x.seed}, {"all_satisfied", x.all_satisfied()}, {"kinds", x.kinds}, {"entries", x.entries}};
}
void from_json(const Json& j, LemmaSuiteReport& x) {
    x.seed = field(j, "seed").get<uint64_t>();
    x.kinds = list_from<LemmaKindSummary>(field(j, "kinds"));
    x.entries = list_from<LemmaEntry>(field(j, "entries"));
}

void to_json(Json& j, const Series& x) {
    j = Json{{"raw", pairs_json(x.raw)},
             {"extrapolated", float_json(x.extrapolated)},
             {"fit_residual", float_json(x.fit_residual)}};
}
void from_json(const Json& j, Series& x) {
    x.raw = pairs_from(field(j, "raw"));
    x.extrapolated = float_from_json(field(j, "extrapolated"));
    x.fit_residual = float_from_json(field(j, "fit_residual"));
}

void to_json(Json& j, const VolumeEstimate& x) {
    j = Json{{"d", x.d},
             {"raw", pairs_json(x.raw)},
             {"extrapolated", float_json(x.extrapolated)},
             {"fit_residual", float_json(x.fit_residual)},
             {"upper", x.upper ? Json(*x.upper) : Json(nullptr)}};
}
void from_json(const Json& j, VolumeEstimate& x) {
    x.d = field(j, "d").get<int>();
    x.raw = pairs_from(field(j, "raw"));
    x.extrapolated = float_from_json(field(j, "extrapolated"));
    x.fit_residual = float_from_json(field(j, "fit_residual"));
    const Json& u = field(j, "upper");
    if (u.is_null())
        x.upper.reset();
    else
        x.upper = u.get<Series>();
}

void to_json(Json& j, const Constants& x) {
    j = Json{{"m", x.m},
             {"p", integer_json(x.p)},
             {"epsilon", rational_json(x.epsilon)},
             {"I", float_json(x.I)},
             {"I_witness", x.I_witness},
             {"delta_upper", float_json(x.delta_upper)},
             {"delta_argmin", rational_json(x.delta_argmin)},
             {"C", float_json(x.C)},
             {"C_prime", float_json(x.C_prime)},
             {"C_tilde", float_json(x.C_tilde)}};
}
void from_json(const Json& j, Constants& x) {
    x.m = field(j, "m").get<long>();
    x.p = integer_from(field(j, "p"), "p");
    x.epsilon = rational_from(field(j, "epsilon"), "epsilon");
    x.I = float_from_json(field(j, "I"));
    x.I_witness = field(j, "I_witness").get<long>();
    x.delta_upper = float_from_json(field(j, "delta_upper"));
    x.delta_argmin = rational_from(field(j, "delta_argmin"), "delta_argmin");
    x.C = float_from_json(field(j, "C"));
    x.C_prime = float_from_json(field(j, "C_prime"));
    x.C_tilde = float_from_json(field(j, "C_tilde"));
}

void to_json(Json& j, const YuanResult& x) {
    j = Json{{"variant", to_string(x.variant)},
             {"count", x.count},
             {"distinct_valuations", x.distinct_valuations},
             {"majorant_contains", x.majorant_contains},
             {"report", x.report}};
}
void from_json(const Json& j, YuanResult& x) {
    x.variant = parse_restricted_variant(field(j, "variant").get<std::string>());
    x.count = field(j, "count").get<CountInterval>();
    x.distinct_valuations = field(j, "distinct_valuations").get<long>();
    x.majorant_contains = field(j, "majorant_contains").get<bool>();
    x.report = field(j, "report").get<DiscrepancyReport>();
}

void to_json(Json& j, const RationalPolytope& x) {
    Json verts = Json::array();
    for (const auto& v : x.vertices) {
        Json row = Json::array();
        for (const auto& c : v) row.push_back(rational_json(c));
        verts.push_back(row);
    }
    j = Json{{"dim", x.dim}, {"vertices", verts}};
}
void from_json(const Json& j, RationalPolytope& x) {
    x.dim = field(j, "dim").get<int>();
    x.vertices.clear();
    for (const auto& row : field(j, "vertices")) {
        Point p;
        for (const auto& c : row) p.push_back(rational_from(c, "vertex"));
        x.vertices.push_back(std::move(p));
    }
}

void to_json(Json& j, const BodyStats& x) {
    j = Json{{"levels", x.levels}, {"distinct", x.distinct}, {"normalized", floats_json(x.normalized)}};
}
void from_json(const Json& j, BodyStats& x) {
    x.levels = field(j, "levels").get<std::vector<long>>();
    x.distinct = field(j, "distinct").get<std::vector<long>>();
    x.normalized = floats_from(field(j, "normalized"));
}

void to_json(Json& j, const OkounkovBody& x) {
    Rational vol = x.body.empty() ? Rational(0) : polytope_volume(x.body);
    j = Json{{"body", x.body}, {"volume", rational_json(vol)}, {"stats", x.stats}};
}
void from_json(const Json& j, OkounkovBody& x) {
    x.body = field(j, "body").get<RationalPolytope>();
    x.stats = field(j, "stats").get<BodyStats>();
}

void to_json(Json& j, const InclusionResult& x) {
    j = Json{{"m", x.m},
             {"n", x.n},
             {"quot_in_twisted", x.quot_in_twisted},
             {"untwisted_in_plain", x.untwisted_in_plain},
             {"plain_in_quot", x.plain_in_quot},
             {"quot_count", integer_json(x.quot_count)},
             {"restricted_count", integer_json(x.restricted_count)},
             {"holds", x.holds()}};
}
void from_json(const Json& j, InclusionResult& x) {
    x.m = field(j, "m").get<long>();
    x.n = field(j, "n").get<long>();
    x.quot_in_twisted = field(j, "quot_in_twisted").get<bool>();
    x.untwisted_in_plain = field(j, "untwisted_in_plain").get<bool>();
    x.plain_in_quot = field(j, "plain_in_quot").get<bool>();
    x.quot_count = integer_from(field(j, "quot_count"), "quot_count");
    x.restricted_count = integer_from(field(j, "restricted_count"), "restricted_count");
}

void to_json(Json& j, const InclusionScan& x) {
    j = Json{{"first_level", x.first_level ? Json(*x.first_level) : Json(nullptr)}, {"results", x.results}};
}
void from_json(const Json& j, InclusionScan& x) {
    const Json& f = field(j, "first_level");
    if (f.is_null())
        x.first_level.reset();
    else
        x.first_level = f.get<long>();
    x.results = list_from<InclusionResult>(field(j, "results"));
}

void to_json(Json& j, const SlopeFit& x) {
    j = Json{{"slope", float_json(x.slope)}, {"stderr", float_json(x.stderr_)}};
}
void from_json(const Json& j, SlopeFit& x) {
    x.slope = float_from_json(field(j, "slope"));
    x.stderr_ = float_from_json(field(j, "stderr"));
}

void to_json(Json& j, const EstimatesReport& x) {
    j = Json{{"r", rational_json(x.r)},
             {"epsilon", rational_json(x.epsilon)},
             {"C_tilde", float_json(x.C_tilde)},
             {"S", float_json(x.S)},
             {"S_prime", float_json(x.S_prime)},
             {"slack_bounded", x.slack_bounded},
             {"S_fit", x.S_fit},
             {"S_prime_fit", x.S_prime_fit},
             {"S_empirical", pairs_json(x.S_empirical)},
             {"S_prime_empirical", pairs_json(x.S_prime_empirical)},
             {"levels", x.levels},
             {"general_hypothesis", x.general_hypothesis},
             {"general_lower", x.general_lower}};
}
void from_json(const Json& j, EstimatesReport& x) {
    x.r = rational_from(field(j, "r"), "r");
    x.epsilon = rational_from(field(j, "epsilon"), "epsilon");
    x.C_tilde = float_from_json(field(j, "C_tilde"));
    x.S = float_from_json(field(j, "S"));
    x.S_prime = float_from_json(field(j, "S_prime"));
    x.slack_bounded = field(j, "slack_bounded").get<bool>();
    x.S_fit = field(j, "S_fit").get<SlopeFit>();
    x.S_prime_fit = field(j, "S_prime_fit").get<SlopeFit>();
    x.S_empirical = pairs_from(field(j, "S_empirical"));
    x.S_prime_empirical = pairs_from(field(j, "S_prime_empirical"));
    x.levels = list_from<DiscrepancyReport>(field(j, "levels"));
    x.general_hypothesis = field(j, "general_hypothesis").get<bool>();
    x.general_lower = list_from<DiscrepancyReport>(field(j, "general_lower"));
}

void to_json(Json& j, const ConcavityReport& x) {
    j = Json{{"concave", x.concave},
             {"slopes_nonincreasing", x.slopes_nonincreasing},
             {"tolerance", float_json(x.tolerance)},
             {"violations", x.violations},
             {"roots", floats_json(x.roots)},
             {"second_differences", floats_json(x.second_differences)},
             {"right_slopes", floats_json(x.right_slopes)}};
}
void from_json(const Json& j, ConcavityReport& x) {
    x.concave = field(j, "concave").get<bool>();
    x.slopes_nonincreasing = field(j, "slopes_nonincreasing").get<bool>();
    x.tolerance = float_from_json(field(j, "tolerance"));
    x.violations = field(j, "violations").get<std::vector<size_t>>();
    x.roots = floats_from(field(j, "roots"));
    x.second_differences = floats_from(field(j, "second_differences"));
    x.right_slopes = floats_from(field(j, "right_slopes"));
}

void to_json(Json& j, const DerivativeReport& x) {
    Json grid = Json::array(), vols = Json::array();
    for (const auto& r : x.r_grid) grid.push_back(rational_json(r));
    for (const auto& [r, v] : x.volumes) vols.push_back(Json{{"r", rational_json(r)}, {"estimate", v}});
    j = Json{{"r_grid", grid},
             {"left_slopes", floats_json(x.left_slopes)},
             {"right_slopes", floats_json(x.right_slopes)},
             {"symmetric_estimate", float_json(x.symmetric_estimate)},
             {"oracle_value", float_json(x.oracle_value)},
             {"target", float_json(x.target)},
             {"relative_gap", float_json(x.relative_gap)},
             {"left_mean", float_json(x.left_mean)},
             {"right_mean", float_json(x.right_mean)},
             {"left_right_gap", float_json(x.left_right_gap)},
             {"concavity", x.concavity},
             {"volumes", vols}};
}
void from_json(const Json& j, DerivativeReport& x) {
    x.r_grid.clear();
    for (const auto& r : field(j, "r_grid")) x.r_grid.push_back(rational_from(r, "r_grid"));
    x.left_slopes = floats_from(field(j, "left_slopes"));
    x.right_slopes = floats_from(field(j, "right_slopes"));
    x.symmetric_estimate = float_from_json(field(j, "symmetric_estimate"));
    x.oracle_value = float_from_json(field(j, "oracle_value"));
    x.target = float_from_json(field(j, "target"));
    x.relative_gap = float_from_json(field(j, "relative_gap"));
    x.left_mean = float_from_json(field(j, "left_mean"));
    x.right_mean = float_from_json(field(j, "right_mean"));
    x.left_right_gap = float_from_json(field(j, "left_right_gap"));
    x.concavity = field(j, "concavity").get<ConcavityReport>();
    x.volumes.clear();
    for (const auto& v : field(j, "volumes"))
        x.volumes.emplace_back(rational_from(field(v, "r"), "r"), field(v, "estimate").get<VolumeEstimate>());
}

void to_json(Json& j, const IdentityLevel& x) {
    j = Json{{"m", x.m}, {"scaled_count", integer_json(x.scaled_count)}, {"base_count", integer_json(x.base_count)}};
}
void from_json(const Json& j, IdentityLevel& x) {
    x.m = field(j, "m").get<long>();
    x.scaled_count = integer_from(field(j, "scaled_count"), "scaled_count");
    x.base_count = integer_from(field(j, "base_count"), "base_count");
}

void to_json(Json& j, const HomogeneityReport& x) {
    j = Json{{"a", x.a},
             {"identity_holds", x.identity_holds},
             {"identity", x.identity},
             {"base_volume", float_json(x.base_volume)},
             {"scaled_volume", float_json(x.scaled_volume)},
             {"ratio", float_json(x.ratio)},
             {"ratio_target", float_json(x.ratio_target)},
             {"ratio_rel_error", float_json(x.ratio_rel_error)},
             {"vol1", float_json(x.vol1)},
             {"vol2", float_json(x.vol2)},
             {"vol_sum", float_json(x.vol_sum)},
             {"bm_slack", float_json(x.bm_slack)},
             {"bm_holds", x.bm_holds},
             {"body_len1", rational_json(x.body_len1)},
             {"body_len2", rational_json(x.body_len2)},
             {"body_len_sum", rational_json(x.body_len_sum)},
             {"body_bm_exact", x.body_bm_exact}};
}
void from_json(const Json& j, HomogeneityReport& x) {
    x.a = field(j, "a").get<long>();
    x.identity_holds = field(j, "identity_holds").get<bool>();
    x.identity = list_from<IdentityLevel>(field(j, "identity"));
    x.base_volume = float_from_json(field(j, "base_volume"));
    x.scaled_volume = float_from_json(field(j, "scaled_volume"));
    x.ratio = float_from_json(field(j, "ratio"));
    x.ratio_target = float_from_json(field(j, "ratio_target"));
    x.ratio_rel_error = float_from_json(field(j, "ratio_rel_error"));
    x.vol1 = float_from_json(field(j, "vol1"));
    x.vol2 = float_from_json(field(j, "vol2"));
    x.vol_sum = float_from_json(field(j, "vol_sum"));
    x.bm_slack = float_from_json(field(j, "bm_slack"));
    x.bm_holds = field(j, "bm_holds").get<bool>();
    x.body_len1 = rational_from(field(j, "body_len1"), "body_len1");
    x.body_len2 = rational_from(field(j, "body_len2"), "body_len2");
    x.body_len_sum = rational_from(field(j, "body_len_sum"), "body_len_sum");
    x.body_bm_exact = field(j, "body_bm_exact").get<bool>();
}

// ---------------------------------------------------------------------------------------------

std::string reports_to_csv(const std::vector<DiscrepancyReport>& reports) {
    std::ostringstream out;
    out << "m,lhs,rhs,bound,slack,satisfied\n";
    for (const auto& r : reports)
        out << r.m << "," << format_float(r.lhs) << "," << format_float(r.rhs) << "," << format_float(r.bound) << ","
            << format_float(r.slack) << "," << (r.satisfied ? "true" : "false") << "\n";
    return out.str();
}

std::string checks_to_csv(const std::vector<InequalityCheck>& checks) {
    std::ostringstream out;
    out << "label,star,m,lhs,rhs,bound,slack,satisfied\n";
    for (const auto& c : checks) {
        const auto& r = c.report;
        out << c.label << "," << kind_name(c.star) << "," << r.m << "," << format_float(r.lhs) << ","
            << format_float(r.rhs) << "," << format_float(r.bound) << "," << format_float(r.slack) << ","
            << (r.satisfied ? "true" : "false") << "\n";
    }
    return out.str();
}

std::string volume_to_csv(const VolumeEstimate& v) {
    std::ostringstream out;
    out << "m,value" << (v.upper ? ",upper" : "") << "\n";
    for (size_t i = 0; i < v.raw.size(); ++i) {
        out << v.raw[i].first << "," << format_float(v.raw[i].second);
        if (v.upper) out << "," << format_float(v.upper->raw[i].second);
        out << "\n";
    }
    return out.str();
}

std::string derivative_to_csv(const DerivativeReport& d) {
    std::ostringstream out;
    out << "r,extrapolated,fit_residual\n";
    for (const auto& [r, v] : d.volumes)
        out << format_rational(r) << "," << format_float(v.extrapolated) << "," << format_float(v.fit_residual) << "\n";
    return out.str();
}

}  // namespace arvol
