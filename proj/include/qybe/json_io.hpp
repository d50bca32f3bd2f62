#pragma once

// JSON (de)serialization. Complex numbers are [re, im] arrays everywhere;
// plain numbers are accepted on input as real values.

#include <string>

#include <json.hpp>

#include "chains.hpp"
#include "verify.hpp"

namespace qybe {

using json = nlohmann::json;

namespace detail {
[[noreturn]] inline void schema_error(const std::string& what) { fail(ErrorKind::Schema, what); }
}  // namespace detail

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j, const std::string& key = "value") {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return require_finite({j[0].get<double>(), j[1].get<double>()}, key.c_str());
    detail::schema_error(key + ": expected a number or [re, im]");
}

inline json to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return {{"dim", m.dim()}, {"entries", std::move(rows)}};
}

inline Matrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) detail::schema_error("matrix: need dim and entries");
    const auto n = j.at("dim").get<std::size_t>();
    const json& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != n) detail::schema_error("matrix: row count does not match dim");
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n) detail::schema_error("matrix: column count does not match dim");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = complex_from_json(rows[i][k], "matrix entry");
    }
    return m;
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

inline json to_json(const Site& s) {
    json j = {{"epsilon", to_json(s.p.epsilon)}, {"x_aut", to_json(s.p.x_aut)}, {"x0", to_json(s.p.x0)},
              {"c0", to_json(s.p.c0)},           {"casimir_sign", s.p.casimir_sign}, {"u", to_json(s.u)},
              {"w", to_json(s.w)}};
    if (s.p.pinned_x) j["x"] = to_json(*s.p.pinned_x);
    if (s.p.pinned_c) j["c"] = to_json(*s.p.pinned_c);
    return j;
}

inline Site site_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) detail::schema_error(where + ": expected an object");
    static const char* known[] = {"epsilon", "x_aut", "x0", "c0", "casimir_sign", "u", "w", "x", "c"};
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* name : known) ok = ok || k == name;
        if (!ok) detail::schema_error(where + ": unknown key '" + k + "'");
    }
    Site s;
    auto get = [&](const char* k, cplx def) { return j.contains(k) ? complex_from_json(j.at(k), where + "." + k) : def; };
    s.p.epsilon = get("epsilon", 0.0);
    s.p.x_aut = get("x_aut", 1.0);
    s.p.x0 = get("x0", 0.0);
    s.p.c0 = get("c0", 0.0);
    if (j.contains("casimir_sign")) {
        if (!j.at("casimir_sign").is_number_integer()) detail::schema_error(where + ".casimir_sign: expected +1 or -1");
        s.p.casimir_sign = j.at("casimir_sign").get<int>();
        if (s.p.casimir_sign != 1 && s.p.casimir_sign != -1) detail::schema_error(where + ".casimir_sign: expected +1 or -1");
    }
    s.u = get("u", 0.0);
    s.w = get("w", 0.0);
    if (j.contains("x") != j.contains("c")) detail::schema_error(where + ": pinned x and c must be given together");
    if (j.contains("x")) {
        s.p.pinned_x = get("x", 0.0);
        s.p.pinned_c = get("c", 0.0);
    }
    return s;
}

inline json to_json(const FunctionHandle& f) {
    using P = FunctionHandle::Preset;
    json j = {{"preset", to_string(f.preset())}};
    switch (f.preset()) {
        case P::Const: j["a"] = to_json(f.a()); break;
        case P::ExpSpectral:
            j["k"] = to_json(f.k());
            j["a"] = to_json(f.a());
            j["b"] = to_json(f.b());
            break;
        case P::ReciprocalCosh: break;
        case P::ExpOverCosh: j["k"] = to_json(f.k()); break;
        case P::Custom: detail::schema_error("custom function handles cannot be serialized");
    }
    return j;
}

inline FunctionHandle function_from_json(const json& j, const std::string& where) {
    if (j.is_number() || j.is_array()) return FunctionHandle::constant(complex_from_json(j, where));
    if (!j.is_object() || !j.contains("preset") || !j.at("preset").is_string())
        detail::schema_error(where + ": expected {\"preset\": ...}");
    const std::string p = j.at("preset").get<std::string>();
    auto get = [&](const char* k, cplx def) { return j.contains(k) ? complex_from_json(j.at(k), where + "." + k) : def; };
    if (p == "Const") return FunctionHandle::constant(get("a", 1.0));
    if (p == "ExpSpectral") return FunctionHandle::exp_spectral(get("k", 1.0), get("a", 1.0), get("b", 0.0));
    if (p == "ReciprocalCosh") return FunctionHandle::reciprocal_cosh();
    if (p == "ExpOverCosh") return FunctionHandle::exp_over_cosh(get("k", 0.0));
    detail::schema_error(where + ": unknown preset '" + p + "'");
}

/// A fully specified build request.
struct BuildRequest {
    FamilyParams params;
    Site si, sj;
};

inline json to_json(const BuildRequest& r) {
    const FamilyDescriptor& d = describe(r.params.family);
    json funcs = json::object();
    auto put_fn = [&](const std::string& name, const FunctionHandle& f) {
        for (const auto& used : d.functions)
            if (used == name) funcs[name] = to_json(f);
    };
    put_fn("f", r.params.funcs.f);
    put_fn("g", r.params.funcs.g);
    put_fn("h", r.params.funcs.h);
    const Constants& c = r.params.constants;
    return {{"family", d.name},
            {"site_i", to_json(r.si)},
            {"site_j", to_json(r.sj)},
            {"functions", funcs},
            {"constants", {{"f0", to_json(c.f0)}, {"g0", to_json(c.g0)}, {"h0", to_json(c.h0)}, {"u0", to_json(c.u0)}}},
            {"branch", r.params.branch},
            {"normalize", r.params.normalize},
            {"perturb", r.params.perturb}};
}

/// Parse a build request. Accepts the full form (site_i/site_j, ...), the
/// short forms listed in the family schema ({u, u0} for XXTrig, {x_i, x_j,
/// c_i, c_j} for CoshZeroConst, {u_i, u_j, w_i, w_j} for CoshZeroTwoParam), or
/// a previous `build` output (its "params" block).
inline BuildRequest request_from_json(const json& in, std::optional<FamilyId> family_override = std::nullopt) {
    if (!in.is_object()) detail::schema_error("params: expected a JSON object");
    if (in.contains("params") && in.contains("matrix")) return request_from_json(in.at("params"), family_override);

    BuildRequest r;
    std::optional<FamilyId> fam = family_override;
    if (in.contains("family")) {
        if (!in.at("family").is_string()) detail::schema_error("family: expected a string");
        const auto named = family_from_string(in.at("family").get<std::string>());
        if (!named) detail::schema_error("unknown family '" + in.at("family").get<std::string>() + "'");
        if (fam && *fam != *named) detail::schema_error("family in params differs from --family");
        fam = named;
    }
    if (!fam) detail::schema_error("no family given");
    r.params.family = *fam;
    const FamilyDescriptor& d = describe(*fam);

    static const char* known[] = {"family", "site_i", "site_j", "functions", "constants", "branch", "normalize",
                                  "perturb", "u", "u0", "x_i", "x_j", "c_i", "c_j", "u_i", "u_j", "w_i", "w_j",
                                  "x_aut_i", "x_aut_j"};
    for (const auto& [k, v] : in.items()) {
        bool ok = false;
        for (const char* name : known) ok = ok || k == name;
        if (!ok) detail::schema_error("params: unknown key '" + k + "'");
    }
    auto num = [&](const char* k) {
        if (!in.contains(k)) detail::schema_error(std::string(d.name) + " needs '" + k + "'");
        return complex_from_json(in.at(k), k);
    };
    auto opt = [&](const char* k, cplx def) { return in.contains(k) ? complex_from_json(in.at(k), k) : def; };

    if (in.contains("constants")) {
        const json& c = in.at("constants");
        if (!c.is_object()) detail::schema_error("constants: expected an object");
        for (const auto& [k, v] : c.items()) {
            if (k == "f0") r.params.constants.f0 = complex_from_json(v, "constants.f0");
            else if (k == "g0") r.params.constants.g0 = complex_from_json(v, "constants.g0");
            else if (k == "h0") r.params.constants.h0 = complex_from_json(v, "constants.h0");
            else if (k == "u0") r.params.constants.u0 = complex_from_json(v, "constants.u0");
            else detail::schema_error("constants: unknown key '" + k + "'");
        }
    }
    if (in.contains("functions")) {
        const json& f = in.at("functions");
        if (!f.is_object()) detail::schema_error("functions: expected an object");
        for (const auto& [k, v] : f.items()) {
            if (k == "f") r.params.funcs.f = function_from_json(v, "functions.f");
            else if (k == "g") r.params.funcs.g = function_from_json(v, "functions.g");
            else if (k == "h") r.params.funcs.h = function_from_json(v, "functions.h");
            else detail::schema_error("functions: unknown key '" + k + "'");
        }
    }
    if (in.contains("branch")) {
        if (!in.at("branch").is_number_integer()) detail::schema_error("branch: expected +1 or -1");
        r.params.branch = in.at("branch").get<int>();
        if (r.params.branch != 1 && r.params.branch != -1) detail::schema_error("branch: expected +1 or -1");
    }
    if (in.contains("normalize")) {
        if (!in.at("normalize").is_boolean()) detail::schema_error("normalize: expected a boolean");
        r.params.normalize = in.at("normalize").get<bool>();
    }
    if (in.contains("perturb")) {
        if (!in.at("perturb").is_number()) detail::schema_error("perturb: expected a number");
        r.params.perturb = in.at("perturb").get<double>();
    }

    if (in.contains("site_i") || in.contains("site_j")) {
        if (!in.contains("site_i") || !in.contains("site_j")) detail::schema_error("need both site_i and site_j");
        r.si = site_from_json(in.at("site_i"), "site_i");
        r.sj = site_from_json(in.at("site_j"), "site_j");
        return r;
    }
    switch (*fam) {
        case FamilyId::XXTrig: {
            r.params.constants.u0 = num("u0");
            r.si = xx_site(num("u"), r.params.constants.u0);
            r.sj = xx_site(0.0, r.params.constants.u0);
            return r;
        }
        case FamilyId::CoshZeroConst:
            r.si = Site{coshzero_params(num("x_i"), num("c_i"), opt("x_aut_i", 1.0)), 0.0, 0.0};
            r.sj = Site{coshzero_params(num("x_j"), num("c_j"), opt("x_aut_j", 1.0)), 0.0, 0.0};
            return r;
        case FamilyId::CoshZeroTwoParam:
            r.si = two_param_site(num("u_i"), num("w_i"), opt("x_aut_i", 1.0));
            r.sj = two_param_site(num("u_j"), num("w_j"), opt("x_aut_j", 1.0));
            return r;
        default: detail::schema_error(std::string(d.name) + " needs site_i and site_j");
    }
}

/// Parse an explicit triple: the build-request keys plus "sites": [s1, s2, s3].
inline Sample sample_from_json(const json& in, std::optional<FamilyId> family_override = std::nullopt) {
    if (!in.is_object() || !in.contains("sites")) detail::schema_error("triple: expected an object with \"sites\"");
    const json& sites = in.at("sites");
    if (!sites.is_array() || sites.size() != 3) detail::schema_error("sites: expected an array of three sites");
    json pair = in;
    pair.erase("sites");
    pair["site_i"] = sites[0];
    pair["site_j"] = sites[1];
    const BuildRequest r = request_from_json(pair, family_override);
    return Sample{{r.si, r.sj, site_from_json(sites[2], "sites[2]")}, r.params};
}

// ---------------------------------------------------------------------------
// Outputs
// ---------------------------------------------------------------------------

inline json to_json(const CoefficientSet& c) {
    return {{"f", to_json(c.f)},      {"g", to_json(c.g)},         {"h", to_json(c.h)},
            {"pp", to_json(c.pp)},    {"scale", to_json(c.scale)}, {"case", to_string(c.cls)},
            {"branch", c.branch}};
}

inline json build_output(const BuildRequest& req, const RMatrix& r) {
    return {{"matrix", to_json(r.m)},
            {"form", r.form == Form::Braid ? "braid" : "plain"},
            {"coefficients", to_json(r.coeffs)},
            {"params", to_json(req)}};
}

inline json to_json(const FamilyDescriptor& d) {
    return {{"family", d.name},
            {"case", to_string(d.cls)},
            {"anchor", d.anchor},
            {"schema", d.schema},
            {"functions", d.functions},
            {"constants", d.constants},
            {"branches", d.has_branch ? json::array({1, -1}) : json::array()},
            {"homogeneous", d.homogeneous},
            {"baxterized", d.baxterized},
            {"ybe_form", to_string(d.ybe)}};
}

inline json to_json(const Sample& s) {
    BuildRequest pair{s.params, s.sites[0], s.sites[1]};
    json j = to_json(pair);
    j.erase("site_i");
    j.erase("site_j");
    j["sites"] = json::array({to_json(s.sites[0]), to_json(s.sites[1]), to_json(s.sites[2])});
    return j;
}

inline json to_json(const ResidualSummary& r) { return {{"max", r.max}, {"mean", r.mean}}; }

inline json to_json(const VerificationReport& r) {
    json failures = json::array();
    for (const auto& f : r.failures)
        failures.push_back({{"sample", f.sample}, {"check", f.check}, {"residual", f.residual}, {"params", to_json(f.params)}});
    return {{"family", to_string(r.family)},
            {"seed", r.seed},
            {"samples", r.samples},
            {"tol", r.tol},
            {"perturb", r.perturb},
            {"branch", r.branch},
            {"residuals",
             {{"intertwining", to_json(r.intertwining)}, {"ybe", to_json(r.ybe)}, {"free_fermion", to_json(r.free_fermion)}}},
            {"failures", failures},
            {"failure_count", r.failure_count},
            {"rejected", r.rejected},
            {"sampler", r.sampler},
            {"pass", r.pass}};
}

inline json to_json(const PauliDecomposition& p) {
    json c = json::object();
    const auto v = p.values();
    for (std::size_t k = 0; k < v.size(); ++k) c[PauliDecomposition::names[k]] = to_json(v[k]);
    return {{"coefficients", c}, {"residual", p.residual}, {"free_fermion", std::abs(p.szsz) <= 1e-8}};
}

}  // namespace qybe
