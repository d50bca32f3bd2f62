#pragma once

// The catalog of sl_q(2)-invariant R-matrices at q = i on two-dimensional
// cyclic irreps. Every family is built as
//     R = Exchange * (sum of projector-type operators weighted by coefficients)
// from a pair of sites (irrep parameters plus spectral parameters).
//
// Orientation: catalog matrices are intertwiners in the convention
//     Delta_ji[g] R = R Delta_ij[g].
// Printed tables of these solutions use the transposed layout; display_form()
// converts a matrix to that layout for side-by-side comparison.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "projectors.hpp"

namespace qybe {

// ---------------------------------------------------------------------------
// Sites and arbitrary functions
// ---------------------------------------------------------------------------

/// One tensor factor of a chain/triple: irrep parameters plus the spectral
/// parameters u (additive) and w (used only by the two-parameter family).
struct Site {
    IrrepParams2 p;
    cplx u{};
    cplx w{};
    bool operator==(const Site&) const = default;
};

/// An "arbitrary function" of the site data (eps, x_aut, u).
class FunctionHandle {
public:
    enum class Preset { Const, ExpSpectral, ReciprocalCosh, ExpOverCosh, Custom };
    using Callable = std::function<cplx(cplx eps, cplx x_aut, cplx u)>;

    FunctionHandle() = default;

    /// u -> a
    static FunctionHandle constant(cplx a) {
        FunctionHandle h;
        h.preset_ = Preset::Const;
        h.a_ = a;
        return h;
    }
    /// u -> e^{k u} (a + b eps). The affine eps factor defaults to 1.
    static FunctionHandle exp_spectral(cplx k, cplx a = 1.0, cplx b = 0.0) {
        FunctionHandle h;
        h.preset_ = Preset::ExpSpectral;
        h.k_ = k;
        h.a_ = a;
        h.b_ = b;
        return h;
    }
    /// eps -> 1/cosh(eps)
    static FunctionHandle reciprocal_cosh() {
        FunctionHandle h;
        h.preset_ = Preset::ReciprocalCosh;
        return h;
    }
    /// eps -> e^{k eps}/cosh(eps)
    static FunctionHandle exp_over_cosh(cplx k) {
        FunctionHandle h;
        h.preset_ = Preset::ExpOverCosh;
        h.k_ = k;
        return h;
    }
    /// Opaque user callable; must be reentrant (scans call it concurrently).
    static FunctionHandle custom(Callable fn, std::string label = "custom") {
        FunctionHandle h;
        h.preset_ = Preset::Custom;
        h.fn_ = std::move(fn);
        h.label_ = std::move(label);
        return h;
    }

    cplx operator()(cplx eps, cplx x_aut, cplx u) const {
        cplx v;
        switch (preset_) {
            case Preset::Const: v = a_; break;
            case Preset::ExpSpectral: v = std::exp(k_ * u) * (a_ + b_ * eps); break;
            case Preset::ReciprocalCosh: v = 1.0 / std::cosh(eps); break;
            case Preset::ExpOverCosh: v = std::exp(k_ * eps) / std::cosh(eps); break;
            case Preset::Custom:
                if (!fn_) fail(ErrorKind::InvalidParams, "custom function handle has no callable");
                v = fn_(eps, x_aut, u);
                break;
        }
        if (!is_finite(v)) fail(ErrorKind::InvalidParams, "function handle returned a non-finite value");
        return v;
    }
    cplx operator()(const Site& s) const { return (*this)(s.p.epsilon, s.p.x_aut, s.u); }

    Preset preset() const { return preset_; }
    cplx k() const { return k_; }
    cplx a() const { return a_; }
    cplx b() const { return b_; }
    const std::string& label() const { return label_; }

private:
    Preset preset_ = Preset::Const;
    cplx k_{}, a_{1.0}, b_{};
    Callable fn_;
    std::string label_;
};

inline const char* to_string(FunctionHandle::Preset p) {
    switch (p) {
        case FunctionHandle::Preset::Const: return "Const";
        case FunctionHandle::Preset::ExpSpectral: return "ExpSpectral";
        case FunctionHandle::Preset::ReciprocalCosh: return "ReciprocalCosh";
        case FunctionHandle::Preset::ExpOverCosh: return "ExpOverCosh";
        case FunctionHandle::Preset::Custom: return "Custom";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Family identifiers and descriptors
// ---------------------------------------------------------------------------

enum class FamilyId {
    PlusGeneral,
    XXTrig,
    MinusPair,
    ZeroF0,
    ZeroIsingStar,
    ZeroIsingStarStar,
    ZeroArbitraryF,
    ZeroStar1,
    ZeroStar2,
    ZeroGeneral_HbarZero,
    ZeroGeneral_G0Zero,
    ZeroGeneral_G0Nonzero,
    ZeroSpecial_1,
    ZeroSpecial_2,
    ZeroSpecial_3,
    ZeroSpecial_4,
    ZeroSpecial_5,
    ZeroSpecial_6,
    ZeroDoubleStar_Tanh,
    ZeroDoubleStar_GmhPlus,
    ZeroDoubleStar_GmhMinus,
    ZeroTripleStar_1,
    ZeroTripleStar_2,
    ZeroTripleStar_3,
    ZeroPmmFamily_1,
    ZeroPmmFamily_2,
    ZeroPmmFamily_3,
    CoshZeroConst,
    CoshZeroTwoParam,
};

/// Which Yang-Baxter equation a family satisfies.
enum class YbeForm {
    Homogeneous,    ///< one spectral parameter, R12(u-v) R13(u) R23(v)
    Inhomogeneous,  ///< site-dependent parameters on all three factors
    Mixed,          ///< R+_12 R-_13 R-_23 with sign pattern (+, +, -)
};

inline const char* to_string(YbeForm f) {
    switch (f) {
        case YbeForm::Homogeneous: return "homogeneous";
        case YbeForm::Inhomogeneous: return "inhomogeneous";
        case YbeForm::Mixed: return "mixed";
    }
    return "?";
}

/// What a family needs, for listing, validation and sampling.
struct FamilyDescriptor {
    FamilyId id;
    const char* name;
    CompatibilityClass cls;
    const char* anchor;                  ///< short description of the solution
    std::vector<std::string> schema;     ///< parameter keys
    std::vector<std::string> functions;  ///< arbitrary functions used ("f", "g", "h")
    std::vector<std::string> constants;  ///< constants used ("f0", "g0", "h0", "u0")
    bool has_branch = false;             ///< takes an explicit +/- branch
    bool homogeneous = false;            ///< all sites share eps and x_aut
    bool baxterized = false;             ///< has a spectral-parameter expansion point
    YbeForm ybe = YbeForm::Inhomogeneous;
};

inline const std::vector<FamilyDescriptor>& family_table() {
    using C = CompatibilityClass;
    static const std::vector<std::string> pair{"site_i", "site_j"};
    auto with = [](std::vector<std::string> base, std::initializer_list<const char*> extra) {
        for (const char* e : extra) base.emplace_back(e);
        return base;
    };
    static const std::vector<FamilyDescriptor> table = {
        {FamilyId::PlusGeneral, "PlusGeneral", C::PlusCase, "plus case: general solution, one arbitrary function",
         with(pair, {"functions.f"}), {"f"}, {}, false, false, true, YbeForm::Inhomogeneous},
        {FamilyId::XXTrig, "XXTrig", C::PlusCase, "plus case: XX model in a transverse field (trigonometric)",
         {"u", "u0"}, {}, {"u0"}, false, true, true, YbeForm::Homogeneous},
        {FamilyId::MinusPair, "MinusPair", C::MinusCase,
         "minus case: R+/R- pair of the mixed Yang-Baxter equation, one function per Casimir sign",
         with(pair, {"functions.f", "functions.g"}), {"f", "g"}, {}, false, false, false, YbeForm::Mixed},
        {FamilyId::ZeroF0, "ZeroF0", C::ZeroCasimir, "zero Casimir: factorizable f with constant f0",
         with(pair, {"constants.f0", "branch"}), {}, {"f0"}, true, false, false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroIsingStar, "ZeroIsingStar", C::ZeroCasimir,
         "zero Casimir, homogeneous: f = 1, g = -h = tanh u (Ising type)", with(pair, {}), {}, {}, false, true, true,
         YbeForm::Homogeneous},
        {FamilyId::ZeroIsingStarStar, "ZeroIsingStarStar", C::ZeroCasimir,
         "zero Casimir, homogeneous: f = 1, g = h = tanh u tanh eps (trigonometric Ising limit)", with(pair, {}), {},
         {}, false, true, true, YbeForm::Homogeneous},
        {FamilyId::ZeroArbitraryF, "ZeroArbitraryF", C::ZeroCasimir,
         "zero Casimir: arbitrary factorizable f with g, h fixed by it", with(pair, {"functions.f"}), {"f"}, {}, false,
         false, true, YbeForm::Inhomogeneous},
        {FamilyId::ZeroStar1, "ZeroStar1", C::ZeroCasimir,
         "zero Casimir: g = -h with one arbitrary function h (first star branch)",
         with(pair, {"functions.h", "branch"}), {"h"}, {}, true, false, false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroStar2, "ZeroStar2", C::ZeroCasimir,
         "zero Casimir: g - h fixed, one arbitrary function h (second star branch)",
         with(pair, {"functions.h", "branch"}), {"h"}, {}, true, false, false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroGeneral_HbarZero, "ZeroGeneral_HbarZero", C::ZeroCasimir,
         "zero Casimir general: vanishing h-bar, arbitrary h-tilde and constant f0",
         with(pair, {"functions.h", "constants.f0", "branch"}), {"h"}, {"f0"}, true, false, false,
         YbeForm::Inhomogeneous},
        {FamilyId::ZeroGeneral_G0Zero, "ZeroGeneral_G0Zero", C::ZeroCasimir,
         "zero Casimir general: g0 = 0, arbitrary f and constant f0",
         with(pair, {"functions.f", "constants.f0", "branch"}), {"f"}, {"f0"}, true, false, false,
         YbeForm::Inhomogeneous},
        {FamilyId::ZeroGeneral_G0Nonzero, "ZeroGeneral_G0Nonzero", C::ZeroCasimir,
         "zero Casimir general: arbitrary f with constants g0 != 0 and h0",
         with(pair, {"functions.f", "constants.g0", "constants.h0", "branch"}), {"f"}, {"g0", "h0"}, true, false,
         false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroSpecial_1, "ZeroSpecial_1", C::ZeroCasimir, "zero Casimir special: h = 0, f = 1/cosh eps",
         with(pair, {}), {}, {}, false, false, false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroSpecial_2, "ZeroSpecial_2", C::ZeroCasimir,
         "zero Casimir special: g = 0, f = e^{-2 eps}/cosh eps", with(pair, {}), {}, {}, false, false, false,
         YbeForm::Inhomogeneous},
        {FamilyId::ZeroSpecial_3, "ZeroSpecial_3", C::ZeroCasimir, "zero Casimir special: h = 0, root in f0",
         with(pair, {"constants.f0", "branch"}), {}, {"f0"}, true, false, false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroSpecial_4, "ZeroSpecial_4", C::ZeroCasimir, "zero Casimir special: g = 0, root in f0",
         with(pair, {"constants.f0", "branch"}), {}, {"f0"}, true, false, false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroSpecial_5, "ZeroSpecial_5", C::ZeroCasimir,
         "zero Casimir special: h = 0, root in f0, 1/cosh^2 weight", with(pair, {"constants.f0", "branch"}), {},
         {"f0"}, true, false, false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroSpecial_6, "ZeroSpecial_6", C::ZeroCasimir,
         "zero Casimir special: g = 0, root in f0, 1/cosh^2 weight", with(pair, {"constants.f0", "branch"}), {},
         {"f0"}, true, false, false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroDoubleStar_Tanh, "ZeroDoubleStar_Tanh", C::ZeroCasimir,
         "zero Casimir double star: g_ii = h_ii = +/- tanh eps", with(pair, {"branch"}), {}, {}, true, false, false,
         YbeForm::Inhomogeneous},
        {FamilyId::ZeroDoubleStar_GmhPlus, "ZeroDoubleStar_GmhPlus", C::ZeroCasimir,
         "zero Casimir double star: g = -h, (i - e^eps_j)/(i - e^eps_i)", with(pair, {}), {}, {}, false, false,
         false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroDoubleStar_GmhMinus, "ZeroDoubleStar_GmhMinus", C::ZeroCasimir,
         "zero Casimir double star: g = -h, (i + e^eps_j)/(i + e^eps_i)", with(pair, {}), {}, {}, false, false,
         false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroTripleStar_1, "ZeroTripleStar_1", C::ZeroCasimir,
         "zero Casimir triple star (f = 0): 1/(2 cosh eps_i) weights", with(pair, {}), {}, {}, false, false, false,
         YbeForm::Inhomogeneous},
        {FamilyId::ZeroTripleStar_2, "ZeroTripleStar_2", C::ZeroCasimir,
         "zero Casimir triple star (f = 0): 1/(i +/- e^eps_i) weights", with(pair, {"branch"}), {}, {}, true, false,
         false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroTripleStar_3, "ZeroTripleStar_3", C::ZeroCasimir,
         "zero Casimir triple star (f = 0): 1/(1 + e^{2 eps_i}) weights", with(pair, {"branch"}), {}, {}, true, false,
         false, YbeForm::Inhomogeneous},
        {FamilyId::ZeroPmmFamily_1, "ZeroPmmFamily_1", C::ZeroCasimir,
         "zero Casimir without P++: 1/(2 cosh eps_j) weights", with(pair, {}), {}, {}, false, false, false,
         YbeForm::Inhomogeneous},
        {FamilyId::ZeroPmmFamily_2, "ZeroPmmFamily_2", C::ZeroCasimir,
         "zero Casimir without P++: 1/(i +/- e^eps_j) weights", with(pair, {"branch"}), {}, {}, true, false, false,
         YbeForm::Inhomogeneous},
        {FamilyId::ZeroPmmFamily_3, "ZeroPmmFamily_3", C::ZeroCasimir,
         "zero Casimir without P++: 1/(1 + e^{2 eps_j}) weights", with(pair, {"branch"}), {}, {}, true, false, false,
         YbeForm::Inhomogeneous},
        {FamilyId::CoshZeroConst, "CoshZeroConst", C::CoshZero,
         "cosh eps = 0: constant solution (f = 1), corner -1 and swapped middle block",
         {"x_i", "x_j", "c_i", "c_j"}, {}, {}, false, false, false, YbeForm::Inhomogeneous},
        {FamilyId::CoshZeroTwoParam, "CoshZeroTwoParam", C::CoshZero,
         "cosh eps = 0: two-parameter hyperbolic solution (f = -1), c = e^{2u}, x = e^{2w}",
         {"u_i", "u_j", "w_i", "w_j"}, {}, {}, false, false, true, YbeForm::Inhomogeneous},
    };
    return table;
}

inline const FamilyDescriptor& describe(FamilyId id) {
    for (const auto& d : family_table())
        if (d.id == id) return d;
    fail(ErrorKind::InvalidParams, "unknown family id");
}

inline const char* to_string(FamilyId id) { return describe(id).name; }

inline std::optional<FamilyId> family_from_string(std::string_view name) {
    for (const auto& d : family_table())
        if (name == d.name) return d.id;
    return std::nullopt;
}

inline std::vector<FamilyId> all_families() {
    std::vector<FamilyId> v;
    for (const auto& d : family_table()) v.push_back(d.id);
    return v;
}

// ---------------------------------------------------------------------------
// Parameters, coefficients, matrices
// ---------------------------------------------------------------------------

struct FunctionSet {
    FunctionHandle f = FunctionHandle::constant(1.0);
    FunctionHandle g = FunctionHandle::constant(1.0);
    FunctionHandle h = FunctionHandle::constant(1.0);
};

struct Constants {
    cplx f0{};
    cplx g0{1.0};
    cplx h0{};
    cplx u0{0.7};
};

/// Everything beyond the two sites that selects one member of a family.
struct FamilyParams {
    FamilyId family = FamilyId::PlusGeneral;
    FunctionSet funcs;
    Constants constants;
    int branch = 1;
    bool normalize = false;
    /// Negative control: perturb * max|R| is added to entries (0,0), (0,3) and
    /// (1,2) of every matrix.
    double perturb = 0.0;
};

/// Weights of the projector-type operators, with `pp` the weight of the
/// leading operator (P+ / P++ / braid P+) and `scale` an overall factor.
/// Plus pairs use f; minus pairs use g; zero-Casimir pairs use f, g, h.
struct CoefficientSet {
    cplx f{1.0}, g{}, h{};
    cplx pp{1.0};
    cplx scale{1.0};
    FamilyId family = FamilyId::PlusGeneral;
    CompatibilityClass cls = CompatibilityClass::PlusCase;
    int branch = 1;
};

enum class Form { Braid, Plain };

struct RMatrix {
    Matrix m;
    Form form = Form::Braid;
    FamilyId family = FamilyId::PlusGeneral;
    Site si, sj;
    CoefficientSet coeffs;
};

/// Transposed layout used by printed tables of these matrices.
inline Matrix display_form(const Matrix& m) { return m.transpose(); }

/// Plain form R = P * braid form.
inline RMatrix to_plain(const RMatrix& r) {
    if (r.form == Form::Plain) return r;
    RMatrix out = r;
    out.m = swap4() * r.m;
    out.form = Form::Plain;
    return out;
}

inline RMatrix to_braid(const RMatrix& r) {
    if (r.form == Form::Braid) return r;
    RMatrix out = r;
    out.m = swap4() * r.m;
    out.form = Form::Braid;
    return out;
}

// ---------------------------------------------------------------------------
// Coefficient formulas
// ---------------------------------------------------------------------------

namespace detail {

inline cplx checked_div(cplx num, cplx den, const char* what) {
    if (!(std::abs(den) > 1e-13)) {
        if (std::abs(num) <= 1e-13)
            fail(ErrorKind::Branch, std::string(what) + ": 0/0, the chosen branch is ambiguous here");
        fail(ErrorKind::ZeroDivision, std::string(what) + ": vanishing denominator");
    }
    return num / den;
}

inline void check_branch(int s) {
    if (s != 1 && s != -1) fail(ErrorKind::InvalidParams, "branch must be +1 or -1");
}

/// Site quantities used by all zero-Casimir formulas.
struct Pair {
    cplx ei, ej, chi, chj, r;  // r = x_aut_i / x_aut_j
};

inline Pair pair_data(const Site& a, const Site& b) {
    return {std::exp(a.p.epsilon), std::exp(b.p.epsilon), std::cosh(a.p.epsilon), std::cosh(b.p.epsilon),
            a.p.x_aut / b.p.x_aut};
}

/// Families whose formulas are written without x_aut: f -> r^2 f, g -> r g, h -> r h.
inline void restore_gauge(CoefficientSet& c, cplx r) {
    c.f *= r * r;
    c.g *= r;
    c.h *= r;
}

inline cplx plus_weight(cplx F, cplx e2) { return checked_div(F + e2, e2 * F + 1.0, "plus weight"); }

inline cplx root(cplx z) { return std::sqrt(z); }

}  // namespace detail

/// Coefficients (f, g, h, ...) of `fp.family` on the ordered pair (si, sj).
inline CoefficientSet build_coefficients(const FamilyParams& fp, const Site& si, const Site& sj) {
    using detail::checked_div;
    const FamilyDescriptor& d = describe(fp.family);
    if (d.has_branch) detail::check_branch(fp.branch);
    const int s = fp.branch;
    const cplx i = I_UNIT;

    CoefficientSet c;
    c.family = fp.family;
    c.branch = s;
    c.cls = classify_pair(si.p, sj.p);
    const bool mixed_ok = fp.family == FamilyId::MinusPair &&
                          (c.cls == CompatibilityClass::PlusCase || c.cls == CompatibilityClass::MinusCase);
    if (c.cls != d.cls && !mixed_ok)
        fail(ErrorKind::InvalidParams, std::string(d.name) + " needs a " + to_string(d.cls) + " pair, got " +
                                           to_string(c.cls));
    if (d.homogeneous && (!detail::near(si.p.epsilon, sj.p.epsilon, 1e-9) ||
                          !detail::near(si.p.x_aut, sj.p.x_aut, 1e-9)))
        fail(ErrorKind::InvalidParams, std::string(d.name) + " is homogeneous: sites must share eps and x_aut");

    const auto [ei, ej, chi, chj, r] = detail::pair_data(si, sj);
    const cplx e2 = ei * ej;
    const cplx ui = si.u, uj = sj.u;

    switch (fp.family) {
        case FamilyId::PlusGeneral: {
            const cplx F = checked_div(fp.funcs.f(si), fp.funcs.f(sj), "f_i/f_j");
            c.f = detail::plus_weight(F, e2);
            break;
        }
        case FamilyId::XXTrig: {
            const cplx u = ui - uj, u0 = fp.constants.u0;
            const cplx e2xx = -std::exp(2.0 * i * u0);
            if (!detail::near(e2, e2xx, 1e-9))
                fail(ErrorKind::InconsistentParams, "XXTrig sites need eps = i u0 - i pi/2");
            c.f = detail::plus_weight(std::exp(2.0 * i * u), e2);
            c.scale = std::sin(u + u0);
            break;
        }
        case FamilyId::MinusPair: {
            auto v = [&](const Site& st) { return st.p.casimir_sign > 0 ? fp.funcs.f(st) : fp.funcs.g(st); };
            const cplx vi = v(si), vj = v(sj);
            if (c.cls == CompatibilityClass::PlusCase) {
                c.f = checked_div(vi + e2 * vj, vi * e2 + vj, "f_ij");
            } else {
                c.f = 0.0;
                c.g = checked_div(vi - e2 * vj, -vi * e2 + vj, "g_ij");
            }
            break;
        }
        case FamilyId::ZeroF0: {
            const cplx f0 = fp.constants.f0;
            const cplx num = ej * (chj * si.p.x_aut) * (chj * si.p.x_aut) * (1.0 + double(s) * detail::root(1.0 + f0 * chi * chi));
            const cplx den = ei * (chi * sj.p.x_aut) * (chi * sj.p.x_aut) * (1.0 + double(s) * detail::root(1.0 + f0 * chj * chj));
            c.f = checked_div(num, den, "f_ij");
            break;
        }
        case FamilyId::ZeroIsingStar: {
            const cplx t = std::tanh(ui - uj);
            c.f = 1.0;
            c.g = t;
            c.h = -t;
            break;
        }
        case FamilyId::ZeroIsingStarStar: {
            const cplx t = std::tanh(ui - uj) * std::tanh(si.p.epsilon);
            c.f = 1.0;
            c.g = t;
            c.h = t;
            break;
        }
        case FamilyId::ZeroArbitraryF: {
            const cplx F = checked_div(fp.funcs.f(si), fp.funcs.f(sj), "f_i/f_j");
            const cplx dd = (1.0 + ei * ei) * (1.0 + ej * ej);
            c.f = r * r * F;
            c.g = checked_div(i * r * (ei * (1.0 + ei * ei) * F - ej * (1.0 + ej * ej)), dd, "g_ij");
            c.h = checked_div(i * r * (ej * (1.0 + ei * ei) * F - ei * (1.0 + ej * ej)), dd, "h_ij");
            break;
        }
        case FamilyId::ZeroStar1: {
            const cplx hi = fp.funcs.h(si), hj = fp.funcs.h(sj), si_ = double(s) * i;
            const cplx G = checked_div((1.0 + ej * ej) * r * double(s) * (hi - hj),
                                       hi * (si_ + ei) * (ej - si_) + hj * (si_ + ej) * (ei - si_), "g_ij");
            c.f = r * r * checked_div(1.0 + ej * ej, 1.0 + ei * ei, "f_ij");
            c.g = G;
            c.h = -G;
            break;
        }
        case FamilyId::ZeroStar2: {
            const cplx hi = fp.funcs.h(si), hj = fp.funcs.h(sj), sd = double(s);
            const cplx H = checked_div(r * (hi * (1.0 + sd * i * (ej - ei) - e2) - hj * (1.0 + sd * i * (ei - ej) - e2)),
                                       sd * (1.0 + ei * ei) * (hi + hj), "h_ij");
            c.f = r * r * checked_div(1.0 + ej * ej, 1.0 + ei * ei, "f_ij");
            c.h = H;
            c.g = H + checked_div(2.0 * i * r * (ei - ej), 1.0 + ei * ei, "g_ij");
            break;
        }
        case FamilyId::ZeroGeneral_HbarZero: {
            const cplx f0 = fp.constants.f0;
            auto fe = [&](const Site& st) {
                const cplx h = fp.funcs.h(st);
                return checked_div((1.0 + f0) * h + double(s) * detail::root((1.0 + f0 * f0) * h * h - 2.0 * f0),
                                   1.0 + std::exp(2.0 * st.p.epsilon), "f(eps)");
            };
            const cplx F = checked_div(fe(si), fe(sj), "f_i/f_j");
            const cplx hti = fp.funcs.h(si), htj = fp.funcs.h(sj);
            const cplx H = checked_div(i * r * ((ej - htj) * (1.0 + ei * ei) * F - (ei - hti) * (1.0 + ej * ej)),
                                       (1.0 + ei * ei) * (1.0 + ej * ej), "h_ij");
            c.f = r * r * F;
            c.h = H;
            c.g = -e2 * H + i * r * (ei * F - ej);
            break;
        }
        case FamilyId::ZeroGeneral_G0Zero: {
            const cplx f0 = fp.constants.f0, sd = double(s);
            const cplx fi = fp.funcs.f(si), fj = fp.funcs.f(sj);
            const cplx F = checked_div(fi, fj, "f_i/f_j");
            const cplx H = checked_div(r * (i * (chi * fi - chj * fj) + sd * detail::root(f0 + ei * ei * (chi * fi) * (chi * fi)) -
                                            sd * detail::root(f0 + ej * ej * (chj * fj) * (chj * fj))),
                                       2.0 * fj * chi * chj, "h_ij");
            const cplx gbar = checked_div(-ej * (1.0 + ei * ei) * (1.0 + ei * ei) * F, i * (1.0 + ej * ej), "g-bar");
            c.f = r * r * F;
            c.h = H;
            c.g = checked_div(checked_div((gbar - i * ei * (1.0 + ej * ej)) * r, 1.0 + ei * ei, "g_ij") - H, e2, "g_ij");
            break;
        }
        case FamilyId::ZeroGeneral_G0Nonzero: {
            const cplx g0 = fp.constants.g0, h0 = fp.constants.h0, sd = double(s);
            if (std::abs(g0) < 1e-13) fail(ErrorKind::InvalidParams, "G0Nonzero needs g0 != 0");
            const cplx fi = fp.funcs.f(si), fj = fp.funcs.f(sj);
            const cplx F = checked_div(fi, fj, "f_i/f_j");
            const cplx fbi = (1.0 + ei * ei) * fi, fbj = (1.0 + ej * ej) * fj;
            auto hbar = [&](cplx fb) {
                const cplx disc = (fb * h0) * (fb * h0) - (fb * fb - g0 * g0) * (fb * fb - 1.0);
                return checked_div(fb * fb - 1.0, fb * h0 + sd * detail::root(disc), "h-bar(eps)");
            };
            const cplx hbi = hbar(fbi), hbj = hbar(fbj);
            const cplx num = (1.0 - e2 * e2) * fj * (fbj * ei * (fbj * hbj - fbi * hbi) + g0 * (fbi * hbj - fbj * hbi));
            const cplx den = g0 * (1.0 + fbi * fbj * hbi * hbj) + ei * fbj * (fbi * fbj + g0 * g0 * hbi * hbj);
            const cplx hbij = checked_div(num, den, "h-bar_ij");
            // Solve e2 h + g = A, e2 g + h = B (x_aut-free), then restore.
            const cplx A = (hbij * F - ei * F + ej) / i;
            const cplx gbar = checked_div(hbij * g0 / (fj * fj) - ej * (1.0 + ei * ei) * (1.0 + ei * ei) * F,
                                          i * (1.0 + ej * ej), "g-bar");
            const cplx B = checked_div(gbar - i * ei * (1.0 + ej * ej), 1.0 + ei * ei, "g-bar");
            const cplx det = 1.0 - e2 * e2;
            c.f = F;
            c.g = checked_div(A - e2 * B, det, "g_ij");
            c.h = checked_div(B - e2 * A, det, "h_ij");
            detail::restore_gauge(c, r);
            break;
        }
        case FamilyId::ZeroSpecial_1:
        case FamilyId::ZeroSpecial_2:
        case FamilyId::ZeroSpecial_3:
        case FamilyId::ZeroSpecial_4:
        case FamilyId::ZeroSpecial_5:
        case FamilyId::ZeroSpecial_6: {
            const cplx f0 = fp.constants.f0, sd = double(s);
            auto fe = [&](const Site& st) -> cplx {
                const cplx eps = st.p.epsilon, e = std::exp(eps), ch = std::cosh(eps);
                switch (fp.family) {
                    case FamilyId::ZeroSpecial_1: return 1.0 / ch;
                    case FamilyId::ZeroSpecial_2: return std::exp(-2.0 * eps) / ch;
                    case FamilyId::ZeroSpecial_3: return (1.0 + sd / e * detail::root(f0 * e * ch - 1.0)) / ch;
                    case FamilyId::ZeroSpecial_4:
                        return std::exp(-2.0 * eps) * (1.0 + sd * detail::root(1.0 + f0 * e * ch)) / ch;
                    case FamilyId::ZeroSpecial_5: return (1.0 + sd * detail::root(1.0 + f0 * e * ch)) / (e * ch * ch);
                    default: return (e + sd * detail::root(f0 * e * ch - 1.0)) / (e * e * ch * ch);
                }
            };
            const cplx F = checked_div(fe(si), fe(sj), "f_i/f_j");
            c.f = F;
            c.g = 0.0;
            c.h = 0.0;
            switch (fp.family) {
                case FamilyId::ZeroSpecial_1: c.g = i * std::sinh(si.p.epsilon - sj.p.epsilon) / chi; break;
                case FamilyId::ZeroSpecial_2:
                    c.h = -i * (ej / ei) * std::sinh(si.p.epsilon - sj.p.epsilon) / chi;
                    break;
                case FamilyId::ZeroSpecial_3: c.g = i * (ei * F - ej); break;
                case FamilyId::ZeroSpecial_4: c.h = i * (F / ej - 1.0 / ei); break;
                case FamilyId::ZeroSpecial_5: c.g = i * (F / ej * chi / chj - chj / (ei * chi)); break;
                default: c.h = i * (ei * F * chi / chj - ej * chj / chi); break;
            }
            detail::restore_gauge(c, r);
            break;
        }
        case FamilyId::ZeroDoubleStar_Tanh:
        case FamilyId::ZeroDoubleStar_GmhPlus:
        case FamilyId::ZeroDoubleStar_GmhMinus: {
            c.f = checked_div(1.0 + ej * ej, 1.0 + ei * ei, "f_ij");
            if (fp.family == FamilyId::ZeroDoubleStar_Tanh) {
                const cplx sd = double(s);
                c.g = checked_div(sd * (1.0 - e2) + i * (ei - ej), 1.0 + ei * ei, "g_ij");
                c.h = checked_div(sd * (1.0 - e2) - i * (ei - ej), 1.0 + ei * ei, "h_ij");
            } else if (fp.family == FamilyId::ZeroDoubleStar_GmhPlus) {
                c.h = checked_div(i - ej, i - ei, "h_ij");
                c.g = -c.h;
            } else {
                c.g = checked_div(i + ej, i + ei, "g_ij");
                c.h = -c.g;
            }
            detail::restore_gauge(c, r);
            break;
        }
        case FamilyId::ZeroTripleStar_1:
        case FamilyId::ZeroTripleStar_2:
        case FamilyId::ZeroTripleStar_3: {
            const cplx sd = double(s);
            c.f = 0.0;
            if (fp.family == FamilyId::ZeroTripleStar_1) {
                c.g = checked_div(-i * ej, ei * 2.0 * chi, "g_ij");
                c.h = checked_div(-i, 2.0 * chi, "h_ij");
            } else if (fp.family == FamilyId::ZeroTripleStar_2) {
                c.g = checked_div(ej, i + sd * ei, "g_ij");
                c.h = checked_div(-i, sd * i + ei, "h_ij");
            } else {
                c.g = checked_div(sd - i * ej, 1.0 + ei * ei, "g_ij");
                c.h = checked_div((-i - sd * ej) * ei, 1.0 + ei * ei, "h_ij");
            }
            detail::restore_gauge(c, r);
            break;
        }
        case FamilyId::ZeroPmmFamily_1:
        case FamilyId::ZeroPmmFamily_2:
        case FamilyId::ZeroPmmFamily_3: {
            const cplx sd = double(s);
            c.pp = 0.0;
            c.f = 1.0;
            if (fp.family == FamilyId::ZeroPmmFamily_1) {
                c.g = checked_div(i * ei, ej * 2.0 * chj, "g_ij");
                c.h = checked_div(i, 2.0 * chj, "h_ij");
            } else if (fp.family == FamilyId::ZeroPmmFamily_2) {
                c.g = checked_div(-ei, i + sd * ej, "g_ij");
                c.h = checked_div(i, sd * i + ej, "h_ij");
            } else {
                c.g = checked_div(i * ei + sd, 1.0 + ej * ej, "g_ij");
                c.h = checked_div((i - sd * ei) * ej, 1.0 + ej * ej, "h_ij");
            }
            detail::restore_gauge(c, r);
            break;
        }
        case FamilyId::CoshZeroConst: c.f = 1.0; break;
        case FamilyId::CoshZeroTwoParam: {
            const cplx ci = si.p.c(), cj = sj.p.c();
            const cplx cij = coshzero_projectors(ci, cj, si.p.x(), sj.p.x()).cij;
            c.f = -1.0;
            c.scale = checked_div(-cij, 2.0 * std::sqrt(ci) * std::sqrt(cj), "two-parameter scale");
            break;
        }
    }
    for (cplx v : {c.f, c.g, c.h, c.scale})
        if (!is_finite(v)) fail(ErrorKind::ZeroDivision, std::string(d.name) + ": non-finite coefficient");
    return c;
}

/// Exchange * (projector sum) for the coefficient set's class.
inline Matrix assemble(const Site& si, const Site& sj, const CoefficientSet& c) {
    Matrix m(4);
    switch (c.cls) {
        case CompatibilityClass::PlusCase:
        case CompatibilityClass::MinusCase: {
            const auto cp = casimir_projectors(si.p, sj.p);
            const cplx w = c.cls == CompatibilityClass::PlusCase ? c.f : c.g;
            m = exchange_operator(si.p, sj.p, c.cls) * (cp.plus * c.pp + cp.minus * w);
            break;
        }
        case CompatibilityClass::ZeroCasimir: {
            const auto b = zero_casimir_blocks(si.p, sj.p);
            m = b[0] * c.pp + b[1] * c.f + b[2] * c.g + b[3] * c.h;
            break;
        }
        case CompatibilityClass::CoshZero: {
            const auto cz = coshzero_projectors(si.p.c(), sj.p.c(), si.p.x(), sj.p.x());
            m = gauge_lift(cz.braid_plus * c.pp + cz.braid_minus * c.f, si.p.x_aut, sj.p.x_aut);
            break;
        }
        case CompatibilityClass::Incompatible:
            fail(ErrorKind::InvalidParams, "incompatible pair: no intertwiner");
    }
    return m * c.scale;
}

/// The XX matrix: corners sin(u+u0), sin(u0-u); middle block
/// [[e^{iu} sin u0, sin u], [sin u, e^{-iu} sin u0]]. It is symmetric, so it is
/// its own display form.
inline Matrix r_xx(cplx u, cplx u0) {
    const cplx i = I_UNIT;
    Matrix m(4);
    m(0, 0) = std::sin(u + u0);
    m(1, 1) = std::exp(i * u) * std::sin(u0);
    m(1, 2) = std::sin(u);
    m(2, 1) = std::sin(u);
    m(2, 2) = std::exp(-i * u) * std::sin(u0);
    m(3, 3) = std::sin(u0 - u);
    return m;
}

/// Two-parameter hyperbolic solution (intertwiner orientation), with
/// u = u_i - u_j and w = w_i - w_j.
inline Matrix r_two_param(cplx ui, cplx uj, cplx wi, cplx wj) {
    const cplx u = ui - uj, w = wi - wj;
    Matrix m(4);
    m(0, 0) = std::cosh(u);
    m(3, 3) = std::cosh(u);
    m(3, 0) = std::exp(wi + wj) * std::sinh(w - u);
    m(0, 3) = std::exp(-wi - wj) * std::sinh(u - w);
    m(1, 1) = std::exp(w) * std::cosh(u - w);
    m(2, 1) = std::sinh(u);
    m(1, 2) = std::sinh(-u);
    m(2, 2) = std::exp(-w) * std::cosh(u - w);
    return m;
}

/// Site on the cosh(eps) = 0 line with c = e^{2u}, x = e^{2w}.
inline Site two_param_site(cplx u, cplx w, cplx x_aut = 1.0) {
    return Site{coshzero_params(std::exp(2.0 * w), std::exp(2.0 * u), x_aut), u, w};
}

/// Sites on which the XX matrix r_xx(u, u0) intertwines (u = u_i with u_j = 0).
inline Site xx_site(cplx u, cplx u0, cplx x_aut = 1.0, cplx x0 = 1.0, cplx c0 = 1.0) {
    IrrepParams2 p;
    p.epsilon = I_UNIT * u0 - I_UNIT * (std::numbers::pi / 2);
    p.x_aut = x_aut;
    p.x0 = x0;
    p.c0 = c0;
    return Site{p, u, 0.0};
}

namespace detail {

inline Matrix build_raw(const FamilyParams& fp, const Site& si, const Site& sj, CoefficientSet* out) {
    CoefficientSet c = build_coefficients(fp, si, sj);
    Matrix m = assemble(si, sj, c);
    if (fp.perturb != 0.0) {
        // Relative to the largest entry, and off the diagonal too: diagonal
        // plain-form solutions stay solutions under any diagonal change.
        const cplx d = fp.perturb * m.max_abs();
        m(0, 0) += d;
        m(0, 3) += d;
        m(1, 2) += d;
    }
    if (out) *out = c;
    return m;
}

}  // namespace detail

/// Build the braid-form matrix of a family on the ordered pair (si, sj).
inline RMatrix build(const FamilyParams& fp, const Site& si, const Site& sj) {
    RMatrix r;
    r.family = fp.family;
    r.si = si;
    r.sj = sj;
    r.m = detail::build_raw(fp, si, sj, &r.coeffs);
    if (fp.normalize) {
        FamilyParams clean = fp;
        clean.normalize = false;
        clean.perturb = 0.0;
        const Matrix at = detail::build_raw(clean, si, si, nullptr);
        const cplx s = at(0, 0);
        if (std::abs(s) < 1e-12 || max_abs_diff(at, Matrix::identity(4) * s) > 1e-9 * std::abs(s))
            fail(ErrorKind::NotNormalizable, std::string(to_string(fp.family)) + " is not proportional to I at coinciding sites");
        r.m = r.m / s;
    }
    if (!r.m.all_finite()) fail(ErrorKind::ZeroDivision, "non-finite matrix entry");
    return r;
}

/// Diagonal gauge: entry (p_i p_j; n_i n_j) of the plain form is multiplied by
/// f_{n_i} f_{n_j} / (f_{p_i} f_{p_j}), with index weights (f0, f1_i) on the
/// first factor and (f0, f1_j) on the second.
inline RMatrix gauge_transform(const RMatrix& r, cplx f0, cplx f1_i, cplx f1_j) {
    if (f0 == cplx{} || f1_i == cplx{} || f1_j == cplx{}) fail(ErrorKind::InvalidGauge, "gauge factors must be nonzero");
    const Matrix di = Matrix::diag({f0, f1_i}), dj = Matrix::diag({f0, f1_j});
    const Matrix d = kron(di, dj);
    RMatrix plain = to_plain(r);
    plain.m = d.inverse() * plain.m * d;
    return r.form == Form::Plain ? plain : to_braid(plain);
}

/// Rescale so the largest entry has magnitude one.
inline RMatrix normalize(const RMatrix& r) {
    RMatrix out = r;
    out.m = unit_max(r.m);
    return out;
}

}  // namespace qybe
