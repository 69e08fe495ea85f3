// arvol run <command> [options]: batch driver over the experiment library.
// Exit status: 0 all checks satisfied, 2 some check violated, 1 usage or configuration error,
// 3 enumeration cap exceeded.

#include "arvol/io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace arvol;

namespace {

const std::vector<std::string> kCommands{"enumerate", "body",        "volume",     "restricted",  "discrepancy",
                                         "inclusions", "fe",         "estimates2", "derivative",  "lemmas",
                                         "homogeneity", "constants", "height",     "validate-flag"};

// Every option is held as text so a JSON config can fill in whatever the command line left unset.
struct Options {
    std::string command;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> handles;

    bool has(const std::string& k) const { return values.count(k) && !values.at(k).empty(); }
    const std::string& text(const std::string& k) const { return values.at(k); }

    long integer(const std::string& k, long fallback) const {
        if (!has(k)) return fallback;
        try {
            size_t used = 0;
            long v = std::stol(text(k), &used);
            if (used != text(k).size()) throw std::invalid_argument(k);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("--" + k + ": expected an integer, got '" + text(k) + "'");
        }
    }
    Rational rational(const std::string& k, const Rational& fallback) const {
        if (!has(k)) return fallback;
        try {
            return parse_rational(text(k));
        } catch (const std::exception&) {
            throw ConfigError("--" + k + ": expected a rational p/q, got '" + text(k) + "'");
        }
    }
    Window window(long lo, long hi) const {
        Window w{integer("m-lo", lo), integer("m-hi", hi)};
        if (w.lo < 1 || w.lo > w.hi) throw ConfigError("m window must satisfy 1 <= m-lo <= m-hi");
        return w;
    }
};

std::string json_to_option_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (const auto& x : v) out += (out.empty() ? "" : ",") + json_to_option_text(x);
        return out;
    }
    if (v.is_number_float()) return format_float(v.get<double>());
    return v.dump();
}

void apply_config(Options& o, const std::string& path) {
    Json cfg = load_json_file(path);
    if (!cfg.is_object()) throw ConfigError("config must be a flat JSON object");
    for (const auto& [key, v] : cfg.items()) {
        std::string k = key;
        std::replace(k.begin(), k.end(), '_', '-');
        if (k == "command") {
            if (v.get<std::string>() != o.command)
                throw ConfigError("config command '" + v.get<std::string>() + "' differs from '" + o.command + "'");
            continue;
        }
        auto it = o.handles.find(k);
        if (it == o.handles.end() || k == "config") throw ConfigError("unknown config key '" + key + "'");
        if (it->second->count() == 0) o.values[k] = json_to_option_text(v);
    }
}

PairSpec require_spec(const Options& o) {
    if (!o.has("spec")) throw ConfigError(o.command + " needs --spec");
    return load_pair_spec(o.text("spec"));
}

Integer prime(const Options& o) {
    Integer p(o.integer("prime", 2));
    if (!is_prime(p)) throw ConfigError("--prime must be prime");
    return p;
}

uint64_t cap_of(const Options& o) {
    if (!o.has("cap")) return default_cap();
    long c = o.integer("cap", 0);
    if (c < 1) throw ConfigError("--cap must be positive");
    return static_cast<uint64_t>(c);
}

std::vector<Rational> rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_rational(item));
    return out;
}

struct Outcome {
    Json json;
    std::string csv;
    bool violated = false;
};

Outcome run_enumerate(const Options& o) {
    PairSpec spec = require_spec(o);
    long m = o.integer("m", 1);
    uint64_t cap = cap_of(o);
    SectionSpace S = build_section_space(spec, m, o.rational("r", 0));
    SectionList L = enumerate_small_sections(S.space, Kind::StrictlySmall, cap);
    FlagSpec flag{spec.Y, prime(o), FlagVariant::Full};
    require_good_flag(flag);
    std::vector<IntVector> sure;
    for (size_t i = 0; i < L.vectors.size(); ++i)
        if (L.certain[i]) sure.push_back(L.vectors[i]);
    ValuationCloud cloud = valuation_cloud(sure, flag, m);
    Json sections = Json::array();
    for (const auto& v : sure) {
        Json row = Json::array();
        for (const auto& c : v) row.push_back(c.fits_slong_p() ? Json(c.get_si()) : Json(c.get_str()));
        sections.push_back(row);
    }
    Outcome out;
    out.json = Json{{"spec", spec}, {"m", m},           {"rank", S.rank()},       {"count", L.count},
                    {"flag", flag}, {"cloud", cloud},   {"sections", sections}};
    out.csv = cloud_to_csv({cloud});
    return out;
}

Outcome run_body(const Options& o) {
    PairSpec spec = require_spec(o);
    BodyVariant v = parse_body_variant(o.has("variant") ? o.text("variant") : "YM-full");
    FlagSpec flag{spec.Y, prime(o), v == BodyVariant::YMFull ? FlagVariant::Full : FlagVariant::Restricted};
    OkounkovBody B = build_okounkov_body(spec, flag, v, o.window(8, 40), o.rational("r", 0), cap_of(o));
    Outcome out;
    out.json = Json{{"spec", spec}, {"variant", to_string(v)}, {"flag", flag}, {"result", B}};
    out.csv = polytope_to_csv(B.body);
    return out;
}

Outcome run_volume(const Options& o) {
    PairSpec spec = require_spec(o);
    VolumeEstimate v = truncated_avol(spec, o.rational("r", 0), o.window(8, 40), cap_of(o));
    Outcome out;
    out.json = Json{{"spec", spec}, {"r", format_rational(o.rational("r", 0))}, {"estimate", v}};
    out.csv = volume_to_csv(v);
    return out;
}

Outcome run_restricted(const Options& o) {
    PairSpec spec = require_spec(o);
    RestrictedVariant var = parse_restricted_variant(o.has("variant") ? o.text("variant") : "CL");
    VolumeEstimate v = truncated_restricted_vol(spec, var, o.window(8, 40), cap_of(o), o.rational("r", 0));
    Outcome out;
    out.json = Json{{"spec", spec}, {"variant", to_string(var)}, {"estimate", v}};
    out.csv = volume_to_csv(v);
    return out;
}

Outcome run_discrepancy(const Options& o) {
    PairSpec spec = require_spec(o);
    RestrictedVariant var = parse_restricted_variant(o.has("variant") ? o.text("variant") : "CL");
    FlagSpec flag{spec.Y, prime(o), FlagVariant::Restricted};
    Window w = o.window(2, 30);
    Outcome out;
    Json levels = Json::array();
    std::vector<DiscrepancyReport> reps;
    for (long m = w.lo; m <= w.hi; ++m) {
        YuanResult y = yuan_discrepancy(spec, flag, var, m, cap_of(o));
        out.violated = out.violated || !y.report.satisfied;
        reps.push_back(y.report);
        levels.push_back(y);
    }
    out.json = Json{{"spec", spec}, {"variant", to_string(var)}, {"flag", flag}, {"levels", levels}};
    out.csv = reports_to_csv(reps);
    return out;
}

Outcome run_inclusions(const Options& o) {
    PairSpec spec = require_spec(o);
    Rational eps = o.rational("eps", Rational(1, 10));
    Outcome out;
    std::vector<InclusionResult> rows;
    if (o.has("m") || o.has("n")) {
        InclusionResult r = check_inclusions(spec, eps, o.integer("m", 1), o.integer("n", 1), cap_of(o));
        out.violated = !r.holds();
        rows.push_back(r);
        out.json = Json{{"spec", spec}, {"epsilon", format_rational(eps)}, {"result", r}};
    } else {
        InclusionScan s = scan_inclusions(spec, eps, o.window(2, 20), cap_of(o));
        rows = s.results;
        out.json = Json{{"spec", spec}, {"epsilon", format_rational(eps)}, {"scan", s}};
    }
    std::ostringstream csv;
    csv << "m,n,quot_in_twisted,untwisted_in_plain,plain_in_quot\n";
    for (const auto& r : rows)
        csv << r.m << "," << r.n << "," << r.quot_in_twisted << "," << r.untwisted_in_plain << "," << r.plain_in_quot
            << "\n";
    out.csv = csv.str();
    return out;
}

Outcome run_fe(const Options& o) {
    PairSpec spec = require_spec(o);
    Window w = o.window(2, 20);
    std::vector<long> ns{0, 1, 2};
    if (o.has("n")) ns = {o.integer("n", 0)};
    Outcome out;
    std::vector<InequalityCheck> all;
    Json levels = Json::array();
    for (long m = w.lo; m <= w.hi; ++m)
        for (long n : ns) {
            auto checks = check_fe_bounds(spec, n, m, cap_of(o));
            for (const auto& c : checks) out.violated = out.violated || !c.report.satisfied;
            levels.push_back(Json{{"m", m}, {"n", n}, {"checks", checks}});
            all.insert(all.end(), checks.begin(), checks.end());
        }
    out.json = Json{{"spec", spec}, {"aux", Json{{"degree", default_aux_divisor(spec).degree},
                                                 {"scale", default_aux_divisor(spec).scale}}},
                    {"levels", levels}};
    out.csv = checks_to_csv(all);
    return out;
}

Outcome run_estimates2(const Options& o) {
    PairSpec spec = require_spec(o);
    FlagSpec flag{spec.Y, prime(o), FlagVariant::Full};
    EstimatesReport e = check_estimates_II(spec, flag, o.rational("r", Rational(1, 4)),
                                           o.rational("eps", Rational(1, 10)), o.window(8, 32), cap_of(o));
    Outcome out;
    for (const auto& l : e.levels) out.violated = out.violated || !l.satisfied;
    out.json = Json{{"spec", spec}, {"flag", flag}, {"report", e}};
    out.csv = reports_to_csv(e.levels);
    return out;
}

Outcome run_derivative(const Options& o) {
    PairSpec spec = require_spec(o);
    std::vector<Rational> grid = rational_list(o.has("r-grid") ? o.text("r-grid") : "-1/8,-1/16,1/16,1/8");
    DerivativeReport d = derivative_experiment(spec, grid, o.window(8, 40), cap_of(o));
    Outcome out;
    out.json = Json{{"spec", spec}, {"report", d}};
    out.csv = derivative_to_csv(d);
    return out;
}

Outcome run_lemmas(const Options& o) {
    std::vector<CountingKind> kinds{CountingKind::Rescale, CountingKind::Combined, CountingKind::Filtration,
                                    CountingKind::QuotExact};
    if (o.has("kinds")) {
        kinds.clear();
        std::stringstream ss(o.text("kinds"));
        std::string k;
        while (std::getline(ss, k, ',')) kinds.push_back(parse_counting_kind(k));
    }
    long n = o.integer("instances", 300);
    uint64_t seed = static_cast<uint64_t>(o.integer("seed", 7));
    LemmaSuiteReport r = run_lemma_suite(kinds, n, seed, cap_of(o));
    Outcome out;
    out.violated = !r.all_satisfied();
    out.json = r;
    std::ostringstream csv;
    csv << "kind,instances,checks,violations\n";
    for (const auto& k : r.kinds)
        csv << to_string(k.kind) << "," << k.instances << "," << k.checks << "," << k.violations << "\n";
    out.csv = csv.str();
    return out;
}

Outcome run_homogeneity(const Options& o) {
    PairSpec spec = require_spec(o);
    std::optional<PairSpec> spec2;
    if (o.has("spec2")) spec2 = load_pair_spec(o.text("spec2"));
    long a = o.integer("a", 2);
    if (a < 1) throw ConfigError("--a must be a positive integer");
    HomogeneityReport h = check_homogeneity_bm(spec, a, o.window(8, 40), Window{1, 20}, spec2, prime(o), cap_of(o));
    Outcome out;
    out.violated = !h.identity_holds || !h.bm_holds || !h.body_bm_exact;
    out.json = Json{{"spec", spec}, {"report", h}};
    std::ostringstream csv;
    csv << "m,scaled_count,base_count\n";
    for (const auto& l : h.identity) csv << l.m << "," << l.scaled_count.get_str() << "," << l.base_count.get_str() << "\n";
    out.csv = csv.str();
    return out;
}

Outcome run_constants(const Options& o) {
    PairSpec spec = require_spec(o);
    Constants c = evaluate_constants(spec, o.integer("m", 1), prime(o), o.rational("eps", Rational(1, 10)));
    Outcome out;
    out.json = Json{{"spec", spec}, {"constants", c}};
    std::ostringstream csv;
    csv << "name,value\n";
    for (const auto& [k, v] : out.json["constants"].items()) csv << k << "," << json_to_option_text(v) << "\n";
    out.csv = csv.str();
    return out;
}

Outcome run_height(const Options& o) {
    PairSpec spec = require_spec(o);
    if (!o.has("point")) throw ConfigError("height needs --point u:v or a rational");
    const std::string& pt = o.text("point");
    Integer u, v;
    auto colon = pt.find(':');
    if (colon != std::string::npos) {
        if (u.set_str(pt.substr(0, colon), 10) != 0 || v.set_str(pt.substr(colon + 1), 10) != 0)
            throw ConfigError("--point: expected integers u:v");
    } else {
        Rational b = parse_rational(pt);
        u = b.get_num();
        v = b.get_den();
    }
    LogScale h = height(spec, u, v);
    Outcome out;
    out.json = Json{{"spec", spec}, {"point", u.get_str() + ":" + v.get_str()}, {"height", h},
                    {"value", float_json(h.value())}};
    out.csv = "point,height,value\n" + u.get_str() + ":" + v.get_str() + "," + h.str() + "," + format_float(h.value()) +
              "\n";
    return out;
}

Outcome run_validate_flag(const Options& o) {
    FlagSpec flag;
    flag.center = o.rational("center", 0);
    flag.p = Integer(o.integer("prime", 2));
    flag.variant = parse_flag_variant(o.has("variant") ? o.text("variant") : "full");
    FlagReport r = validate_good_flag(flag);
    Outcome out;
    out.violated = !r.good;
    out.json = Json{{"flag", flag}, {"report", r}};
    std::ostringstream csv;
    csv << "condition,pass,detail\n";
    for (const auto& c : r.conditions) csv << c.name << "," << (c.pass ? "true" : "false") << ",\"" << c.detail << "\"\n";
    out.csv = csv.str();
    return out;
}

Outcome dispatch(const Options& o) {
    static const std::map<std::string, Outcome (*)(const Options&)> table{
        {"enumerate", run_enumerate},     {"body", run_body},
        {"volume", run_volume},           {"restricted", run_restricted},
        {"discrepancy", run_discrepancy}, {"inclusions", run_inclusions},
        {"fe", run_fe},                   {"estimates2", run_estimates2},
        {"derivative", run_derivative},   {"lemmas", run_lemmas},
        {"homogeneity", run_homogeneity}, {"constants", run_constants},
        {"height", run_height},           {"validate-flag", run_validate_flag}};
    return table.at(o.command)(o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-arithmetic lab for pairs (D; E) on the projective line over Q"};
    app.require_subcommand(1);
    CLI::App* run = app.add_subcommand("run", "Run one experiment and emit its report");
    Options o;
    run->add_option("command", o.command, "Experiment to run")->required()->check(CLI::IsMember(kCommands));
    const std::vector<std::pair<std::string, std::string>> flags{
        {"spec", "Pair spec JSON file"},
        {"spec2", "Second pair spec (homogeneity)"},
        {"out", "Output file (default: stdout)"},
        {"format", "json or csv"},
        {"seed", "Seed for randomized instances (default 7)"},
        {"m-lo", "First level of the m window"},
        {"m-hi", "Last level of the m window"},
        {"cap", "Enumeration cap (default: ARVOL_CAP or 10000000)"},
        {"config", "Flat JSON config supplying any of these options"},
        {"instances", "Instances per lemma kind (default 300)"},
        {"kinds", "Comma-separated lemma kinds"},
        {"prime", "Residue characteristic of the flag (default 2)"},
        {"variant", "Body, restricted or flag variant"},
        {"r", "Extra order along Y, rational"},
        {"eps", "Epsilon, rational (default 1/10)"},
        {"n", "Twist order along Y"},
        {"m", "Single level"},
        {"r-grid", "Comma-separated rationals, symmetric around 0"},
        {"a", "Homogeneity factor (default 2)"},
        {"point", "Point u:v or rational for height"},
        {"center", "Flag center (validate-flag)"}};
    for (const auto& [name, help] : flags) {
        o.values[name] = "";
        o.handles[name] = run->add_option("--" + name, o.values[name], help);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (o.has("config")) apply_config(o, o.text("config"));
        std::string format = o.has("format") ? o.text("format") : "json";
        if (format != "json" && format != "csv") throw ConfigError("--format must be json or csv");
        Outcome res = dispatch(o);
        std::string text = format == "json" ? dump(res.json) : res.csv;
        if (o.has("out")) {
            std::ofstream f(o.text("out"), std::ios::binary);
            if (!f) throw ConfigError("cannot write '" + o.text("out") + "'");
            f << text;
            if (!f) throw ConfigError("write to '" + o.text("out") + "' failed");
        } else {
            std::cout << text;
        }
        return res.violated ? 2 : 0;
    } catch (const CapExceeded& e) {
        std::cerr << "arvol: enumeration cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "arvol: " << e.what() << "\n";
        return 1;
    }
}
