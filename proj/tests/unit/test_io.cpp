#include "arvol/io.hpp"

#include "doctest.h"

#include <cmath>

using namespace arvol;

namespace {

const uint64_t kCap = 10000000;

PairSpec toy1() {
    PairSpec s;
    s.lambda = LogScale::of(1);
    s.E = {{Rational(0), Rational(1, 4)}};
    return s;
}

const FlagSpec kFlag{Rational(0), Integer(2), FlagVariant::Full};

// Serialized values are canonical: reading and re-writing them changes nothing.
template <class T>
void check_round_trip(const T& value) {
    Json j = value;
    Json again = j.get<T>();
    CHECK(again == j);
    CHECK(parse_json_text(dump(j)) == j);
}

}  // namespace

TEST_CASE("floats") {
    CHECK(float_json(HUGE_VAL) == "inf");
    CHECK(float_json(-HUGE_VAL) == "-inf");
    CHECK(float_json(std::nan("")) == "nan");
    CHECK(std::isinf(float_from_json(Json("inf"))));
    CHECK(std::isnan(float_from_json(Json("nan"))));
    CHECK(float_from_json(float_json(0.1)) == 0.1);
    CHECK(format_float(0.5) == "0.5");
}

TEST_CASE("pair spec parsing") {
    auto s = parse_pair_spec(R"({"degree": 1, "lambda": "1", "mode": "coeff-max",
                                 "E": [{"alpha": "0", "mult": "1/4"}], "Y": "0"})");
    CHECK(s == toy1());
    auto logs = parse_pair_spec(R"j({"degree": 2, "lambda": "1/2+log(3)"})j");
    CHECK(logs.lambda == LogScale::of(Rational(1, 2)) + LogScale::log(3));
    CHECK_THROWS_AS(parse_pair_spec(R"j({"degree": 1, "colour": "red"})j"), ConfigError);
    CHECK_THROWS(parse_pair_spec(R"j({"degree": 1, "E": [{"alpha": "0", "mult": "2"}]})j"));
    try {
        parse_pair_spec("{\"degree\": 1,, }");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK(e.byte > 0);
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("report fields") {
    DiscrepancyReport r = one_sided(7, 1.0, 2.0, 0.5);
    Json j = r;
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"m", "lhs", "rhs", "bound", "slack", "satisfied", "constants_used"});
    CHECK(j["constants_used"]["C"].is_null());
    CHECK(j["satisfied"] == true);
}

TEST_CASE("round trips") {
    auto s = toy1();
    check_round_trip(s);
    auto with_rho = s;
    with_rho.rho0 = Rational(1, 2);
    check_round_trip(with_rho);
    check_round_trip(kFlag);
    check_round_trip(LogScale::of(Rational(-3, 2)) + LogScale::log(5));
    check_round_trip(CountInterval{Integer(3), Integer("123456789012345678901234567890")});
    check_round_trip(validate_good_flag(kFlag));

    auto lemmas = run_lemma_suite({CountingKind::Rescale, CountingKind::QuotExact}, 3, 7, kCap);
    check_round_trip(lemmas);

    check_round_trip(evaluate_constants(s, 10, 2, Rational(1, 10)));
    check_round_trip(yuan_discrepancy(s, kFlag, RestrictedVariant::CL, 5, kCap));
    Window w{4, 8};
    check_round_trip(truncated_avol(s, 0, w, kCap));
    check_round_trip(build_okounkov_body(s, kFlag, BodyVariant::YMFull, w, 0, kCap));
    check_round_trip(scan_inclusions(s, Rational(1), {2, 4}, kCap));
    check_round_trip(check_fe_bounds(s, 1, 4, kCap));
    check_round_trip(check_estimates_II(s, kFlag, Rational(1, 4), Rational(1, 10), {8, 10}, kCap));
    check_round_trip(derivative_experiment(s, {Rational(-1, 8), Rational(1, 8)}, w, kCap));
    check_round_trip(check_homogeneity_bm(s, 2, w, {1, 3}, std::nullopt, 2, kCap));

    ValuationCloud cloud = valuation_cloud({{0, 1}, {0, 2}}, kFlag, 1);
    check_round_trip(cloud);
}

TEST_CASE("CSV tables") {
    auto v = truncated_avol(toy1(), 0, {4, 5}, kCap);
    auto csv = volume_to_csv(v);
    CHECK(csv.rfind("m,value\n4,", 0) == 0);
    auto checks = check_fe_bounds(toy1(), 1, 4, kCap);
    CHECK(checks_to_csv(checks).rfind("label,star,m,", 0) == 0);
    CHECK(reports_to_csv({one_sided(3, 1, 1, 1)}).rfind("m,lhs,rhs,bound,slack,satisfied\n3,1,1,1,", 0) == 0);
}
