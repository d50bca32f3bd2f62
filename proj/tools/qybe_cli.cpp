// qybe: command-line front end for the R-matrix catalog.
//
//   qybe catalog [--family NAME] [--json]
//   qybe build --family NAME --params FILE|JSON
//   qybe verify --family NAME [--samples N] [--seed S] [--tol T] [--perturb D]
//               [--branch B] [--threads K] [--output PATH]
//   qybe hamiltonian --family NAME [--params FILE|JSON] [--variable auto|u|epsilon]
//   qybe ybe-check --params FILE|JSON          (three explicit sites)
//
// Exit codes: 0 pass, 1 verification failure, 2 usage/schema error,
// 3 degenerate construction.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <qybe/json_io.hpp>

namespace {

using qybe::json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kDegenerate = 3;

struct Options {
    std::string family;
    std::string params;
    int samples = 100;
    std::uint64_t seed = 42;
    double tol = 1e-9;
    double perturb = 0.0;
    int branch = 0;
    unsigned threads = 1;
    std::string output;
    std::string format = "pretty";
    std::string variable = "auto";
    double step = 1e-5;
    bool catalog_json = false;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string dump(const json& j, const Options& o) { return o.format == "json" ? j.dump() : j.dump(2); }

void emit(const std::string& body, const Options& o) {
    if (o.output.empty()) {
        std::cout << body << '\n';
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    if (!out) throw UsageError("cannot write " + o.output);
    out << body << '\n';
}

/// --params is either inline JSON (starts with '{') or a file path.
json load_params(const std::string& arg) {
    if (arg.empty()) throw UsageError("--params is required");
    std::string text = arg;
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || arg[first] != '{') {
        std::ifstream in(arg, std::ios::binary);
        if (!in) throw UsageError("cannot read params file " + arg);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return json::parse(text);
}

std::optional<qybe::FamilyId> family_arg(const Options& o, bool required) {
    if (o.family.empty()) {
        if (required) throw UsageError("--family is required");
        return std::nullopt;
    }
    const auto id = qybe::family_from_string(o.family);
    if (!id) throw UsageError("unknown family '" + o.family + "' (see `catalog`)");
    return id;
}

int cmd_catalog(const Options& o) {
    std::vector<qybe::FamilyId> ids;
    if (const auto id = family_arg(o, false)) ids.push_back(*id);
    else ids = qybe::all_families();

    if (o.catalog_json) {
        json arr = json::array();
        for (auto id : ids) arr.push_back(qybe::to_json(qybe::describe(id)));
        emit(o.format == "json" ? arr.dump() : arr.dump(2), o);
        return kPass;
    }
    std::ostringstream s;
    for (auto id : ids) {
        const auto& d = qybe::describe(id);
        s << d.name << "\n  case:     " << qybe::to_string(d.cls) << "\n  schema:   {";
        for (std::size_t k = 0; k < d.schema.size(); ++k) s << (k ? ", " : "") << d.schema[k];
        s << "}";
        if (!d.functions.empty()) {
            s << "\n  functions:";
            for (const auto& f : d.functions) s << ' ' << f;
        }
        if (!d.constants.empty()) {
            s << "\n  constants:";
            for (const auto& c : d.constants) s << ' ' << c;
        }
        if (d.has_branch) s << "\n  branches: +1, -1";
        s << "\n  ybe:      " << qybe::to_string(d.ybe) << (d.baxterized ? ", baxterized" : "")
          << "\n  anchor:   " << d.anchor << "\n";
    }
    s << ids.size() << (ids.size() == 1 ? " family" : " families");
    emit(s.str(), o);
    return kPass;
}

int cmd_build(const Options& o) {
    const qybe::BuildRequest req = qybe::request_from_json(load_params(o.params), family_arg(o, false));
    const qybe::RMatrix r = qybe::build(req.params, req.si, req.sj);
    emit(dump(qybe::build_output(req, r), o), o);
    return kPass;
}

int cmd_verify(const Options& o) {
    qybe::ScanConfig cfg;
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    cfg.tol = o.tol;
    cfg.threads = o.threads;
    cfg.sampler.perturb = o.perturb;
    cfg.sampler.branch = o.branch;
    if (o.samples < 1) throw UsageError("--samples must be positive");
    const auto report = qybe::scan_family(*family_arg(o, true), cfg);
    emit(dump(qybe::to_json(report), o), o);
    return report.pass ? kPass : kFail;
}

int cmd_hamiltonian(const Options& o) {
    const auto fam = family_arg(o, true);
    qybe::BuildRequest req;
    if (!o.params.empty()) {
        req = qybe::request_from_json(load_params(o.params), fam);
    } else {
        req.params.family = *fam;
        if (*fam == qybe::FamilyId::XXTrig) req.si = qybe::xx_site(0.0, req.params.constants.u0);
        else if (*fam == qybe::FamilyId::CoshZeroTwoParam) req.si = qybe::two_param_site(0.0, 0.3);
        else {
            req.si.p.epsilon = 0.3;
            req.si.p.x0 = 1.0;
            req.si.p.c0 = 1.0;
        }
    }
    if (!qybe::describe(*fam).baxterized)
        qybe::fail(qybe::ErrorKind::NotNormalizable, std::string(o.family) + " has no spectral expansion point");

    qybe::ExpansionVariable var = qybe::ExpansionVariable::Spectral;
    if (o.variable == "epsilon" || (o.variable == "auto" && *fam == qybe::FamilyId::PlusGeneral))
        var = qybe::ExpansionVariable::Epsilon;
    const auto h = qybe::hamiltonian_density(req.params, req.si, var, o.step);

    json out = qybe::to_json(h);
    out["family"] = qybe::to_string(*fam);
    out["variable"] = var == qybe::ExpansionVariable::Spectral ? "u" : "epsilon";
    out["base_site"] = qybe::to_json(req.si);
    const double hop = std::max(std::abs(h.pm), std::abs(h.mp));
    const bool has_hop = hop > 1e-8;
    out["patterns"] = {{"symmetric_hopping", has_hop && std::abs(h.pm - h.mp) <= 1e-7 * hop},
                       {"antisymmetric_hopping", has_hop && std::abs(h.pm + h.mp) <= 1e-7 * hop}};
    emit(dump(out, o), o);
    return kPass;
}

int cmd_ybe_check(const Options& o) {
    const qybe::Sample s = qybe::sample_from_json(load_params(o.params), family_arg(o, false));
    const qybe::TripleMatrices t = qybe::build_triple(s);
    double inter = 0.0, ff = 0.0;
    for (const qybe::RMatrix* r : {&t.r12, &t.r13, &t.r23}) {
        inter = std::max(inter, qybe::intertwining_residual(*r));
        ff = std::max(ff, qybe::free_fermion_residual(*r));
    }
    const bool mixed = qybe::describe(s.params.family).ybe == qybe::YbeForm::Mixed;
    const double ybe = mixed ? qybe::mixed_ybe_residual(t.r12, t.r13, t.r23) : qybe::ybe_residual(t.r12, t.r13, t.r23);
    const bool pass = ybe <= o.tol && inter <= 1e-10 && ff <= 1e-11;
    json out = {{"family", qybe::to_string(s.params.family)},
                {"tol", o.tol},
                {"residuals", {{"intertwining", inter}, {"ybe", ybe}, {"free_fermion", ff}}},
                {"pass", pass}};
    emit(dump(out, o), o);
    return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Invariant R-matrices of sl_q(2) at q = i on two-dimensional cyclic representations"};
    app.require_subcommand(1);
    Options o;

    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", o.format, "json (compact) or pretty (indented)")
            ->check(CLI::IsMember({"json", "pretty"}));
        c->add_option("--output,-o", o.output, "Write the result here instead of stdout");
    };

    auto* catalog = app.add_subcommand("catalog", "List the families and their parameter schemas");
    catalog->add_option("--family", o.family, "Show a single family");
    catalog->add_flag("--json", o.catalog_json, "Machine-readable array");
    add_format(catalog);

    auto* build = app.add_subcommand("build", "Build one R-matrix from a parameter set");
    build->add_option("--family", o.family, "Family name (optional if given in params)");
    build->add_option("--params", o.params, "Parameter JSON file, or inline JSON object")->required();
    add_format(build);

    auto* verify = app.add_subcommand("verify", "Seeded verification scan of a family");
    verify->add_option("--family", o.family, "Family name")->required();
    verify->add_option("--samples", o.samples, "Number of random triples");
    auto* seed_opt = verify->add_option("--seed", o.seed, "RNG seed (default 42, or $QYBE_SEED)");
    verify->add_option("--tol", o.tol, "Yang-Baxter tolerance");
    verify->add_option("--perturb", o.perturb, "Relative perturbation injected into every R-matrix (negative control)");
    verify->add_option("--branch", o.branch, "Sign branch for families that have one (0 = random)")
        ->check(CLI::IsMember({-1, 0, 1}));
    verify->add_option("--threads", o.threads, "Worker threads (results do not depend on this)");
    add_format(verify);

    auto* ham = app.add_subcommand("hamiltonian", "Two-site Hamiltonian density of a baxterized family");
    ham->add_option("--family", o.family, "Family name")->required();
    ham->add_option("--params", o.params, "Base site parameters (file or inline JSON)");
    ham->add_option("--variable", o.variable, "Expansion variable")->check(CLI::IsMember({"auto", "u", "epsilon"}));
    ham->add_option("--step", o.step, "Finite-difference step");
    add_format(ham);

    auto* ybe = app.add_subcommand("ybe-check", "Check one explicit triple of sites");
    ybe->add_option("--family", o.family, "Family name (optional if given in params)");
    ybe->add_option("--params", o.params, "Triple JSON: family keys plus \"sites\": [s1, s2, s3]")->required();
    ybe->add_option("--tol", o.tol, "Yang-Baxter tolerance");
    add_format(ybe);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (seed_opt->count() == 0) {
            if (const char* env = std::getenv("QYBE_SEED")) {
                try {
                    std::size_t used = 0;
                    o.seed = std::stoull(env, &used);
                    if (used != std::string(env).size()) throw std::invalid_argument(env);
                } catch (const std::exception&) {
                    throw UsageError(std::string("QYBE_SEED is not an unsigned integer: ") + env);
                }
            }
        }
        if (catalog->parsed()) return cmd_catalog(o);
        if (build->parsed()) return cmd_build(o);
        if (verify->parsed()) return cmd_verify(o);
        if (ham->parsed()) return cmd_hamiltonian(o);
        if (ybe->parsed()) return cmd_ybe_check(o);
    } catch (const qybe::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_degenerate() || e.kind() == qybe::ErrorKind::Construction ? kDegenerate : kUsage;
    } catch (const json::exception& e) {
        std::cerr << "error (Schema): " << e.what() << '\n';
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
