#pragma once

#include "arvol/adelic.hpp"
#include "arvol/flags.hpp"
#include "arvol/geometry.hpp"
#include "arvol/report.hpp"
#include "arvol/toy.hpp"
#include "arvol/volume_lab.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace arvol {

using Json = nlohmann::ordered_json;

// Malformed input; `byte` is the offending position when known (0 otherwise).
struct ConfigError : std::runtime_error {
    size_t byte = 0;
    ConfigError(const std::string& what, size_t at = 0) : std::runtime_error(what), byte(at) {}
};

// Doubles are written with 12 significant digits; non-finite values as "inf", "-inf", "nan".
Json float_json(double x);
double float_from_json(const Json& j);

Json parse_json_text(const std::string& text);
Json load_json_file(const std::string& path);
PairSpec parse_pair_spec(const std::string& text);
PairSpec load_pair_spec(const std::string& path);
std::string dump(const Json& j);  // two-space indent, trailing newline

#define ARVOL_JSON_TYPE(T)                   \
    void to_json(Json& j, const T& x);       \
    void from_json(const Json& j, T& x);

ARVOL_JSON_TYPE(LogScale)
ARVOL_JSON_TYPE(CountInterval)
ARVOL_JSON_TYPE(VanishingPoint)
ARVOL_JSON_TYPE(PairSpec)
ARVOL_JSON_TYPE(FlagSpec)
ARVOL_JSON_TYPE(FlagCondition)
ARVOL_JSON_TYPE(FlagReport)
ARVOL_JSON_TYPE(ValuationCloud)
ARVOL_JSON_TYPE(ConstantsUsed)
ARVOL_JSON_TYPE(DiscrepancyReport)
ARVOL_JSON_TYPE(InequalityCheck)
ARVOL_JSON_TYPE(LemmaEntry)
ARVOL_JSON_TYPE(LemmaKindSummary)
ARVOL_JSON_TYPE(LemmaSuiteReport)
ARVOL_JSON_TYPE(Series)
ARVOL_JSON_TYPE(VolumeEstimate)
ARVOL_JSON_TYPE(Constants)
ARVOL_JSON_TYPE(YuanResult)
ARVOL_JSON_TYPE(RationalPolytope)
ARVOL_JSON_TYPE(BodyStats)
ARVOL_JSON_TYPE(OkounkovBody)
ARVOL_JSON_TYPE(InclusionResult)
ARVOL_JSON_TYPE(InclusionScan)
ARVOL_JSON_TYPE(SlopeFit)
ARVOL_JSON_TYPE(EstimatesReport)
ARVOL_JSON_TYPE(ConcavityReport)
ARVOL_JSON_TYPE(DerivativeReport)
ARVOL_JSON_TYPE(IdentityLevel)
ARVOL_JSON_TYPE(HomogeneityReport)

#undef ARVOL_JSON_TYPE

// CSV tables with a header row.
std::string reports_to_csv(const std::vector<DiscrepancyReport>& reports);
std::string checks_to_csv(const std::vector<InequalityCheck>& checks);
std::string volume_to_csv(const VolumeEstimate& v);
std::string derivative_to_csv(const DerivativeReport& d);
std::string format_float(double x);

}  // namespace arvol
