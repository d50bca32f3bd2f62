#pragma once

// Numerical verification: intertwining, Yang-Baxter (homogeneous,
// inhomogeneous and mixed), free-fermion residuals, and seeded randomized
// family scans.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "catalog.hpp"

namespace qybe {

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

/// Braid form: max over g in {e, f, k} of |Delta_ji[g] R - R Delta_ij[g]|.
/// Plain form: |R Delta_ij[g] - DeltaBar_ij[g] R|. The matrix is normalized
/// to unit max entry first.
inline double intertwining_residual(const RMatrix& r, const GeneratorTriple& gi, const GeneratorTriple& gj) {
    if (r.m.dim() != 4) fail(ErrorKind::Dimension, "intertwining_residual expects a 4x4 matrix");
    const Matrix m = unit_max(r.m);
    const GeneratorTriple dij = coproduct2(gi, gj);
    const GeneratorTriple lhs = r.form == Form::Braid ? coproduct2(gj, gi) : coproduct2(gi, gj, CoproductVariant::DeltaBar);
    double res = 0.0;
    res = std::max(res, max_abs_diff(lhs.e * m, m * dij.e));
    res = std::max(res, max_abs_diff(lhs.f * m, m * dij.f));
    res = std::max(res, max_abs_diff(lhs.k * m, m * dij.k));
    return res;
}

inline double intertwining_residual(const RMatrix& r) {
    return intertwining_residual(r, build_irrep2(r.si.p), build_irrep2(r.sj.p));
}

/// Residual of R12 R13 R23 = R23 R13 R12 on three plain-form 4x4 matrices,
/// each normalized to unit max entry.
inline double ybe_residual(const Matrix& r12, const Matrix& r13, const Matrix& r23) {
    const Matrix a = embed_pair(unit_max(r12), Slot::S12), b = embed_pair(unit_max(r13), Slot::S13),
                 c = embed_pair(unit_max(r23), Slot::S23);
    return max_abs_diff(a * b * c, c * b * a);
}

/// Same, on catalog matrices; checks that r12, r13, r23 live on the pairs
/// (1,2), (1,3), (2,3) of one triple and converts braid forms to plain form.
inline double ybe_residual(const RMatrix& r12, const RMatrix& r13, const RMatrix& r23) {
    if (!(r12.si == r13.si && r12.sj == r23.si && r13.sj == r23.sj))
        fail(ErrorKind::Pairing, "YBE factors are not built on (1,2), (1,3), (2,3) of one triple");
    return ybe_residual(to_plain(r12).m, to_plain(r13).m, to_plain(r23).m);
}

/// Mixed equation R+_12 R-_13 R-_23 = R-_23 R-_13 R+_12: site 1 and 2 form a
/// plus pair, site 3 has the opposite Casimir relation to both.
inline double mixed_ybe_residual(const RMatrix& rp12, const RMatrix& rm13, const RMatrix& rm23) {
    if (classify_pair(rp12.si.p, rp12.sj.p) != CompatibilityClass::PlusCase ||
        classify_pair(rm13.si.p, rm13.sj.p) != CompatibilityClass::MinusCase ||
        classify_pair(rm23.si.p, rm23.sj.p) != CompatibilityClass::MinusCase)
        fail(ErrorKind::Pairing, "mixed YBE needs a (+, +, -) sign pattern");
    return ybe_residual(rp12, rm13, rm23);
}

/// |R00 R33 + R21 R12 - R11 R22 - R30 R03| after unit-max normalization
/// (indices are matrix positions in the fixed basis).
inline double free_fermion_residual(const Matrix& r) {
    if (r.dim() != 4) fail(ErrorKind::Dimension, "free_fermion_residual expects a 4x4 matrix");
    const Matrix m = unit_max(r);
    return std::abs(m(0, 0) * m(3, 3) + m(2, 1) * m(1, 2) - m(1, 1) * m(2, 2) - m(3, 0) * m(0, 3));
}
inline double free_fermion_residual(const RMatrix& r) { return free_fermion_residual(r.m); }

// ---------------------------------------------------------------------------
// Deterministic random streams
// ---------------------------------------------------------------------------

/// Random source for one sample. Each sample index gets its own stream, so a
/// scan gives identical results in any order and on any number of threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    static Rng for_sample(std::uint64_t seed, std::uint64_t index) {
        return Rng(splitmix(splitmix(seed) ^ (index + 0x9e3779b97f4a7c15ULL)));
    }

    /// Uniform in [0, 1) from the top 53 bits (portable across libraries).
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    /// a + b i with a in [-1, 1], b in [-1, 1].
    cplx unit_box() { return {uniform(-1, 1), uniform(-1, 1)}; }
    /// Magnitude in [lo, hi] (log-uniform), uniform phase.
    cplx magnitude(double lo, double hi) {
        const double m = std::exp(uniform(std::log(lo), std::log(hi)));
        return std::polar(m, uniform(-std::numbers::pi, std::numbers::pi));
    }
    /// eps = a + b i with a in [-1, 1], b in [-pi, pi].
    cplx epsilon() { return {uniform(-1, 1), uniform(-std::numbers::pi, std::numbers::pi)}; }
    int sign() { return uniform() < 0.5 ? 1 : -1; }

    static std::uint64_t splitmix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// A compatible triple of sites plus the family parameters for one draw.
struct Sample {
    std::array<Site, 3> sites;
    FamilyParams params;
};

struct SamplerConfig {
    /// Branch for families with a +/- choice; 0 draws it per sample.
    int branch = 0;
    double perturb = 0.0;
    /// Rejection threshold for |sinh(eps_i+eps_j)|, |1 +/- e^{eps_i+eps_j}| and family denominators.
    double min_denominator = 1e-6;
    /// Draws whose matrices have an entry ratio above this are rejected as near-degenerate.
    double max_dynamic_range = 1e6;
    int max_attempts = 1000;
};

inline std::string sampler_description() {
    return "eps = a+bi, a in [-1,1], b in [-pi,pi]; x0, c0, x_aut, function scales with magnitude in [0.2,5]; "
           "u in [-1,1]^2 (complex); rejection of |sinh(eps_i+eps_j)|, |1 +/- e^{eps_i+eps_j}| and family "
           "denominators below 1e-6";
}

namespace detail {

inline FunctionHandle random_function(Rng& rng) {
    return FunctionHandle::exp_spectral(rng.unit_box(), rng.magnitude(0.5, 2.0), 0.3 * rng.unit_box());
}

inline Sample draw_sample(FamilyId id, Rng& rng, const SamplerConfig& cfg) {
    const FamilyDescriptor& d = describe(id);
    Sample s;
    s.params.family = id;
    s.params.perturb = cfg.perturb;
    s.params.branch = d.has_branch ? (cfg.branch != 0 ? cfg.branch : rng.sign()) : 1;
    s.params.funcs.f = random_function(rng);
    s.params.funcs.g = random_function(rng);
    s.params.funcs.h = random_function(rng);
    s.params.constants.f0 = rng.magnitude(0.2, 5.0);
    s.params.constants.g0 = rng.magnitude(0.2, 5.0);
    s.params.constants.h0 = rng.magnitude(0.2, 5.0);
    s.params.constants.u0 = cplx(rng.uniform(0.2, 1.4), rng.uniform(-0.3, 0.3));

    if (id == FamilyId::CoshZeroConst) {
        for (auto& st : s.sites) st = Site{coshzero_params(rng.magnitude(0.2, 5.0), rng.magnitude(0.2, 5.0), rng.magnitude(0.5, 2.0)), 0.0, 0.0};
        return s;
    }
    if (id == FamilyId::CoshZeroTwoParam) {
        for (auto& st : s.sites) st = two_param_site(rng.unit_box(), rng.unit_box());
        return s;
    }
    if (id == FamilyId::XXTrig) {
        const cplx xa = rng.magnitude(0.5, 2.0), x0 = rng.magnitude(0.2, 5.0), c0 = rng.magnitude(0.2, 5.0);
        for (auto& st : s.sites) st = xx_site(rng.unit_box(), s.params.constants.u0, xa, x0, c0);
        return s;
    }
    const cplx x0 = rng.magnitude(0.2, 5.0);
    const cplx c0 = d.cls == CompatibilityClass::ZeroCasimir ? cplx{} : rng.magnitude(0.2, 5.0);
    const cplx eps_h = rng.epsilon(), xa_h = rng.magnitude(0.5, 2.0);
    for (std::size_t k = 0; k < 3; ++k) {
        Site& st = s.sites[k];
        st.p.epsilon = d.homogeneous ? eps_h : rng.epsilon();
        st.p.x_aut = d.homogeneous ? xa_h : rng.magnitude(0.5, 2.0);
        st.p.x0 = x0;
        st.p.c0 = c0;
        st.p.casimir_sign = (id == FamilyId::MinusPair && k == 2) ? -1 : 1;
        st.u = rng.unit_box();
    }
    return s;
}

inline bool denominators_ok(const Sample& s, double tol) {
    for (std::size_t a = 0; a < 3; ++a) {
        const cplx ch = s.sites[a].p.cosh_eps();
        const bool coshzero = s.sites[a].p.pinned_x.has_value();
        if (!coshzero && std::abs(ch) < tol) return false;
        for (std::size_t b = a + 1; b < 3; ++b) {
            if (coshzero) continue;
            const cplx sum = s.sites[a].p.epsilon + s.sites[b].p.epsilon, e = std::exp(sum);
            if (std::abs(std::sinh(sum)) < tol || std::abs(1.0 + e) < tol || std::abs(1.0 - e) < tol) return false;
        }
    }
    return true;
}

/// Ratio of largest to smallest entry, ignoring entries that are zero up to
/// rounding (below 1e-10 of the largest).
inline double dynamic_range(const Matrix& m) {
    const double hi = m.max_abs();
    if (hi == 0.0) return 1.0;
    double lo = hi;
    for (cplx v : m.data()) {
        const double a = std::abs(v);
        if (a > 1e-10 * hi) lo = std::min(lo, a);
    }
    return hi / lo;
}

}  // namespace detail

/// The three pair matrices (12, 13, 23) of a sample.
struct TripleMatrices {
    RMatrix r12, r13, r23;
};

inline TripleMatrices build_triple(const Sample& s) {
    return {build(s.params, s.sites[0], s.sites[1]), build(s.params, s.sites[0], s.sites[2]),
            build(s.params, s.sites[1], s.sites[2])};
}

/// Draw a compatible, non-degenerate sample for `id` (rejection sampling).
/// `rejected` counts discarded draws.
inline Sample sample_family(FamilyId id, Rng& rng, const SamplerConfig& cfg, int* rejected = nullptr) {
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        Sample s = detail::draw_sample(id, rng, cfg);
        bool ok = detail::denominators_ok(s, cfg.min_denominator);
        if (ok) {
            try {
                Sample probe = s;
                probe.params.perturb = 0.0;
                const TripleMatrices t = build_triple(probe);
                for (const RMatrix* r : {&t.r12, &t.r13, &t.r23})
                    if (detail::dynamic_range(r->m) > cfg.max_dynamic_range) ok = false;
            } catch (const Error& e) {
                if (!e.is_degenerate() && e.kind() != ErrorKind::InvalidParams) throw;
                ok = false;
            }
        }
        if (ok) return s;
        if (rejected) ++*rejected;
    }
    fail(ErrorKind::Construction, std::string("could not draw a non-degenerate sample for ") + to_string(id));
}

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

struct ResidualSummary {
    double max = 0.0;
    double mean = 0.0;
};

struct Failure {
    int sample = 0;
    std::string check;
    double residual = 0.0;
    Sample params;
};

struct VerificationReport {
    FamilyId family = FamilyId::PlusGeneral;
    int samples = 0;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    double perturb = 0.0;
    int branch = 0;
    ResidualSummary intertwining, ybe, free_fermion;
    std::vector<Failure> failures;
    int failure_count = 0;
    int rejected = 0;
    bool pass = false;
    std::string sampler;
};

struct ScanConfig {
    int samples = 100;
    std::uint64_t seed = 42;
    double tol = 1e-9;
    /// Intertwining tolerance; the scan fails on either threshold.
    double intertwining_tol = 1e-10;
    double free_fermion_tol = 1e-11;
    unsigned threads = 1;
    int max_failures_listed = 10;
    SamplerConfig sampler;
};

struct SampleResult {
    double intertwining = 0.0, ybe = 0.0, free_fermion = 0.0;
    int rejected = 0;
    Sample sample;
};

inline SampleResult evaluate_sample(FamilyId id, std::uint64_t seed, int index, const SamplerConfig& cfg) {
    Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(index));
    SampleResult out;
    out.sample = sample_family(id, rng, cfg, &out.rejected);
    const TripleMatrices t = build_triple(out.sample);
    for (const RMatrix* r : {&t.r12, &t.r13, &t.r23}) {
        out.intertwining = std::max(out.intertwining, intertwining_residual(*r));
        out.free_fermion = std::max(out.free_fermion, free_fermion_residual(*r));
    }
    out.ybe = describe(id).ybe == YbeForm::Mixed ? mixed_ybe_residual(t.r12, t.r13, t.r23)
                                                  : ybe_residual(t.r12, t.r13, t.r23);
    return out;
}

/// Run intertwining, YBE (in the family's form) and free-fermion checks on
/// `samples` seeded draws. Aggregation is in sample order, so the report does
/// not depend on the thread count.
inline VerificationReport scan_family(FamilyId id, const ScanConfig& cfg) {
    std::vector<SampleResult> results(static_cast<std::size_t>(std::max(cfg.samples, 0)));
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        try {
            for (int k = next++; k < cfg.samples; k = next++)
                results[static_cast<std::size_t>(k)] = evaluate_sample(id, cfg.seed, k, cfg.sampler);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            next = cfg.samples;
        }
    };
    const unsigned nthreads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(std::max(cfg.samples, 1))));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    VerificationReport rep;
    rep.family = id;
    rep.samples = cfg.samples;
    rep.seed = cfg.seed;
    rep.tol = cfg.tol;
    rep.perturb = cfg.sampler.perturb;
    rep.branch = cfg.sampler.branch;
    rep.sampler = sampler_description();
    auto add = [](ResidualSummary& s, double v) {
        s.max = std::max(s.max, v);
        s.mean += v;
    };
    for (std::size_t k = 0; k < results.size(); ++k) {
        const SampleResult& r = results[k];
        add(rep.intertwining, r.intertwining);
        add(rep.ybe, r.ybe);
        add(rep.free_fermion, r.free_fermion);
        rep.rejected += r.rejected;
        const std::pair<const char*, bool> checks[] = {{"intertwining", r.intertwining > cfg.intertwining_tol},
                                                       {"ybe", r.ybe > cfg.tol},
                                                       {"free_fermion", r.free_fermion > cfg.free_fermion_tol}};
        for (const auto& [name, failed] : checks) {
            if (!failed) continue;
            ++rep.failure_count;
            if (static_cast<int>(rep.failures.size()) < cfg.max_failures_listed) {
                const double v = std::string(name) == "intertwining" ? r.intertwining
                                 : std::string(name) == "ybe"        ? r.ybe
                                                                     : r.free_fermion;
                rep.failures.push_back({static_cast<int>(k), name, v, r.sample});
            }
        }
    }
    if (!results.empty()) {
        const double n = static_cast<double>(results.size());
        rep.intertwining.mean /= n;
        rep.ybe.mean /= n;
        rep.free_fermion.mean /= n;
    }
    rep.pass = rep.failure_count == 0;
    return rep;
}

}  // namespace qybe
