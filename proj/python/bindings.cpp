// Thin bindings: specs go in as JSON text, reports come back as JSON text.
#include "arvol/io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace arvol;

namespace {

PairSpec spec_from(const std::string& text) { return parse_pair_spec(text); }

FlagSpec flag_from(const std::string& center, long p, const std::string& variant) {
    return FlagSpec{parse_rational(center), Integer(p), parse_flag_variant(variant)};
}

uint64_t cap_or_default(uint64_t cap) { return cap ? cap : default_cap(); }

template <class T>
std::string out(const T& value) {
    return Json(value).dump();
}

}  // namespace

PYBIND11_MODULE(_arvol, m) {
    m.doc() = "Exact-arithmetic lab for pairs (D; E) on the projective line over Q";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);

    m.def("normalize_spec", [](const std::string& s) { return out(spec_from(s)); });

    m.def("validate_flag", [](const std::string& center, long p, const std::string& variant) {
        return out(validate_good_flag(flag_from(center, p, variant)));
    });

    m.def(
        "section_count",
        [](const std::string& s, long level, const std::string& kind, uint64_t cap) {
            Kind k = kind == "ss" ? Kind::StrictlySmall : kind == "s" ? Kind::Small
                                                                      : throw ConfigError("kind must be 'ss' or 's'");
            return out(count_small_sections(build_section_space(spec_from(s), level).space, k, cap_or_default(cap)));
        },
        py::arg("spec"), py::arg("m"), py::arg("kind") = "ss", py::arg("cap") = 0);

    m.def(
        "lemma_suite",
        [](const std::vector<std::string>& kinds, long instances, uint64_t seed, uint64_t cap) {
            std::vector<CountingKind> ks;
            for (const auto& k : kinds) ks.push_back(parse_counting_kind(k));
            return out(run_lemma_suite(ks, instances, seed, cap_or_default(cap)));
        },
        py::arg("kinds"), py::arg("instances") = 300, py::arg("seed") = 7, py::arg("cap") = 0);

    m.def(
        "avol",
        [](const std::string& s, long lo, long hi, uint64_t cap) {
            return out(truncated_avol(spec_from(s), 0, Window{lo, hi}, cap_or_default(cap)));
        },
        py::arg("spec"), py::arg("m_lo") = 8, py::arg("m_hi") = 40, py::arg("cap") = 0);

    m.def(
        "restricted_volume",
        [](const std::string& s, const std::string& variant, long lo, long hi, uint64_t cap) {
            return out(truncated_restricted_vol(spec_from(s), parse_restricted_variant(variant), Window{lo, hi},
                                                cap_or_default(cap)));
        },
        py::arg("spec"), py::arg("variant") = "CL", py::arg("m_lo") = 8, py::arg("m_hi") = 40, py::arg("cap") = 0);

    m.def(
        "okounkov_body",
        [](const std::string& s, const std::string& variant, const std::string& center, long p, long lo, long hi,
           uint64_t cap) {
            FlagSpec f = flag_from(center, p, "full");
            return out(build_okounkov_body(spec_from(s), f, parse_body_variant(variant), Window{lo, hi}, 0,
                                           cap_or_default(cap)));
        },
        py::arg("spec"), py::arg("variant") = "YM-full", py::arg("center") = "0", py::arg("p") = 2,
        py::arg("m_lo") = 8, py::arg("m_hi") = 40, py::arg("cap") = 0);

    m.def(
        "yuan",
        [](const std::string& s, long level, long p, const std::string& variant, uint64_t cap) {
            PairSpec spec = spec_from(s);
            FlagSpec f{spec.Y, Integer(p), FlagVariant::Restricted};
            return out(yuan_discrepancy(spec, f, parse_restricted_variant(variant), level, cap_or_default(cap)));
        },
        py::arg("spec"), py::arg("m"), py::arg("p") = 2, py::arg("variant") = "CL", py::arg("cap") = 0);

    m.def(
        "derivative",
        [](const std::string& s, const std::vector<std::string>& grid, long lo, long hi, uint64_t cap) {
            std::vector<Rational> r;
            for (const auto& g : grid) r.push_back(parse_rational(g));
            return out(derivative_experiment(spec_from(s), r, Window{lo, hi}, cap_or_default(cap)));
        },
        py::arg("spec"), py::arg("r_grid") = std::vector<std::string>{"-1/8", "-1/16", "1/16", "1/8"},
        py::arg("m_lo") = 8, py::arg("m_hi") = 40, py::arg("cap") = 0);

    m.def(
        "homogeneity",
        [](const std::string& s, long a, long lo, long hi, long p, uint64_t cap) {
            return out(check_homogeneity_bm(spec_from(s), a, Window{lo, hi}, Window{1, 20}, std::nullopt, Integer(p),
                                            cap_or_default(cap)));
        },
        py::arg("spec"), py::arg("a") = 2, py::arg("m_lo") = 8, py::arg("m_hi") = 40, py::arg("p") = 2,
        py::arg("cap") = 0);

    m.def(
        "fe_bounds",
        [](const std::string& s, long n, long level, uint64_t cap) {
            return out(check_fe_bounds(spec_from(s), n, level, cap_or_default(cap)));
        },
        py::arg("spec"), py::arg("n"), py::arg("m"), py::arg("cap") = 0);

    m.def(
        "estimates_ii",
        [](const std::string& s, const std::string& r, const std::string& eps, long p, long lo, long hi,
           uint64_t cap) {
            PairSpec spec = spec_from(s);
            FlagSpec f{spec.Y, Integer(p), FlagVariant::Full};
            return out(check_estimates_II(spec, f, parse_rational(r), parse_rational(eps), Window{lo, hi},
                                          cap_or_default(cap)));
        },
        py::arg("spec"), py::arg("r") = "1/4", py::arg("eps") = "1/10", py::arg("p") = 2, py::arg("m_lo") = 8,
        py::arg("m_hi") = 32, py::arg("cap") = 0);

    m.def("restricted_oracle", [](const std::string& s) { return restricted_intersection_oracle(spec_from(s)); });
}
