#pragma once

// sl_q(2) at roots of unity: cyclic irreps, coproducts, center values and the
// compatibility classification of pairs of two-dimensional irreps.
//
// Relations:  k e k^-1 = q^2 e,  k f k^-1 = q^-2 f,  [e,f] = (k - k^-1)/lambda,
// Casimir:    c = e f + (q^-1 k + q k^-1)/lambda^2,   lambda = q - q^-1.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace qybe {

// ---------------------------------------------------------------------------
// q-number context for general N
// ---------------------------------------------------------------------------

/// A root of unity with q^N = qsign (qsign = +1 or -1), plus lambda.
struct QContext {
    int N = 2;
    int qsign = -1;
    cplx log_q;  // principal logarithm used for complex powers
    cplx q;
    cplx lambda;

    cplx pow(cplx a) const { return std::exp(a * log_q); }
    /// [a]_q = (q^a - q^-a) / lambda
    cplx qnum(cplx a) const { return (pow(a) - pow(-a)) / lambda; }
};

/// q = e^{i pi/N} when q^N = -1, q = e^{2 pi i/N} (N odd) when q^N = +1.
inline QContext make_qcontext(int N, int qsign) {
    if (N < 2) fail(ErrorKind::InvalidParams, "N must be at least 2");
    if (qsign != 1 && qsign != -1) fail(ErrorKind::InvalidParams, "qsign must be +1 or -1");
    QContext c;
    c.N = N;
    c.qsign = qsign;
    const double pi = std::numbers::pi;
    if (qsign == -1) {
        c.log_q = cplx(0.0, pi / N);
    } else {
        if (N % 2 == 0)
            fail(ErrorKind::DegenerateQ, "q^N = +1 with even N makes q^2 non-primitive (degenerate k spectrum)");
        c.log_q = cplx(0.0, 2.0 * pi / N);
    }
    c.q = std::exp(c.log_q);
    c.lambda = c.q - 1.0 / c.q;
    if (std::abs(c.lambda) < 1e-14) fail(ErrorKind::DegenerateQ, "lambda = q - 1/q vanishes");
    return c;
}

/// Closed form of prod_{k=1..N} [alpha + k]_q.
inline cplx phi_product(cplx alpha, int N, int qsign) {
    const QContext c = make_qcontext(N, qsign);
    const cplx shift = cplx(N) * alpha + 0.5 * N * (N + 1);
    const double sgn = (N % 2 == 0) ? 1.0 : -1.0;
    return std::pow(c.lambda, -N) * (c.pow(shift) + sgn * c.pow(-shift));
}

/// Direct product prod_{k=1..N} [alpha + k]_q (used as an independent check).
inline cplx phi_product_direct(cplx alpha, int N, int qsign) {
    const QContext c = make_qcontext(N, qsign);
    cplx p = 1.0;
    for (int k = 1; k <= N; ++k) p *= c.qnum(alpha + cplx(k));
    return p;
}

// ---------------------------------------------------------------------------
// Generator triples
// ---------------------------------------------------------------------------

/// Matrices e, f, k and the central values e^N = x, f^N = y, k^N = z, c.
/// On reducible modules (coproducts) c is not a scalar and is left empty.
struct GeneratorTriple {
    Matrix e, f, k;
    cplx x, y, z;
    std::optional<cplx> c;
};

inline Matrix matrix_power(const Matrix& m, int n) {
    Matrix r = Matrix::identity(m.dim());
    for (int i = 0; i < n; ++i) r = r * m;
    return r;
}

/// Casimir operator e f + (q^-1 k + q k^-1)/lambda^2.
inline Matrix casimir_matrix(const GeneratorTriple& g, cplx q = Q_MAIN) {
    const cplx lam = q - 1.0 / q;
    const Matrix ki = g.k.inverse();
    return g.e * g.f + (g.k * (1.0 / q) + ki * q) * (1.0 / (lam * lam));
}

/// Max residual of the three defining relations.
inline double algebra_relation_residual(const GeneratorTriple& g, cplx q = Q_MAIN) {
    const cplx lam = q - 1.0 / q;
    const Matrix ki = g.k.inverse();
    double r = max_abs_diff(g.k * g.e * ki, g.e * (q * q));
    r = std::max(r, max_abs_diff(g.k * g.f * ki, g.f * (1.0 / (q * q))));
    r = std::max(r, max_abs_diff(g.e * g.f - g.f * g.e, (g.k - ki) * (1.0 / lam)));
    return r;
}

// ---------------------------------------------------------------------------
// General-N cyclic irreps
// ---------------------------------------------------------------------------

struct GeneralCyclicIrrep {
    int N = 2;
    int qsign = -1;
    cplx epsilon, xi, omega;
    std::vector<cplx> beta, gamma, alpha;  // index i = 1..N stored at i-1
    GeneratorTriple gens;
    QContext ctx;
};

/// alpha_i = [i + (1+eps+xi)/2]_q [(xi-eps-1)/2 - i]_q
inline cplx cyclic_alpha(const QContext& c, int i, cplx eps, cplx xi) {
    return c.qnum(cplx(i) + 0.5 * (1.0 + eps + xi)) * c.qnum(0.5 * (xi - eps - 1.0) - cplx(i));
}

/// Residual of xy = lambda^{-2N}(q^{N xi} + q^{-N xi} + (-q^N)^N (z + 1/z)).
inline double center_constraint_residual(const GeneralCyclicIrrep& r) {
    const QContext& c = r.ctx;
    const int N = r.N;
    const double sgn = std::pow(-static_cast<double>(r.qsign), N);
    const cplx rhs = std::pow(c.lambda, -2 * N) *
                     (c.pow(cplx(N) * r.xi) + c.pow(-cplx(N) * r.xi) + sgn * (r.gens.z + 1.0 / r.gens.z));
    const cplx lhs = r.gens.x * r.gens.y;
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

/// Full residual: relations, Casimir scalar, e^N, f^N, k^N, alpha_i = gamma_{i+1} beta_i.
inline double general_irrep_residual(const GeneralCyclicIrrep& r) {
    const QContext& c = r.ctx;
    const GeneratorTriple& g = r.gens;
    const std::size_t n = static_cast<std::size_t>(r.N);
    const Matrix id = Matrix::identity(n);
    double res = algebra_relation_residual(g, c.q);
    res = std::max(res, max_abs_diff(casimir_matrix(g, c.q), id * *g.c));
    res = std::max(res, max_abs_diff(matrix_power(g.e, r.N), id * g.x) / std::max(1.0, std::abs(g.x)));
    res = std::max(res, max_abs_diff(matrix_power(g.f, r.N), id * g.y) / std::max(1.0, std::abs(g.y)));
    res = std::max(res, max_abs_diff(matrix_power(g.k, r.N), id * g.z) / std::max(1.0, std::abs(g.z)));
    for (int i = 1; i <= r.N; ++i) {
        const cplx prod = r.gamma[static_cast<std::size_t>(i % r.N)] * r.beta[static_cast<std::size_t>(i - 1)];
        res = std::max(res, std::abs(prod - r.alpha[static_cast<std::size_t>(i - 1)]));
    }
    return res;
}

namespace detail {
inline GeneralCyclicIrrep assemble_general(const QContext& c, cplx eps, cplx xi, cplx omega, std::vector<cplx> beta,
                                           std::vector<cplx> gamma, double tol) {
    const int N = c.N;
    const std::size_t n = static_cast<std::size_t>(N);
    GeneralCyclicIrrep r;
    r.N = N;
    r.qsign = c.qsign;
    r.ctx = c;
    r.epsilon = eps;
    r.xi = xi;
    r.omega = omega;
    r.beta = std::move(beta);
    r.gamma = std::move(gamma);
    r.alpha.resize(n);
    for (int i = 1; i <= N; ++i) r.alpha[static_cast<std::size_t>(i - 1)] = cyclic_alpha(c, i, eps, xi);

    Matrix e(n), f(n), k(n);
    cplx x = 1.0, y = 1.0;
    for (int i = 1; i <= N; ++i) {
        const std::size_t col = static_cast<std::size_t>(i - 1);
        k(col, col) = c.pow(eps + 2.0 * i);
        e(static_cast<std::size_t>(i % N), col) = r.beta[col];               // e v_i = beta_i v_{i+1}
        f(static_cast<std::size_t>((i - 2 + N) % N), col) = r.gamma[col];    // f v_i = gamma_i v_{i-1}
        x *= r.beta[col];
        y *= r.gamma[col];
    }
    r.gens = GeneratorTriple{e, f, k, x, y, c.pow(cplx(N) * eps), (c.pow(xi) + c.pow(-xi)) / (c.lambda * c.lambda)};
    if (!(general_irrep_residual(r) <= tol))
        fail(ErrorKind::Construction, "cyclic irrep fails the algebra relations (internal error)");
    return r;
}
}  // namespace detail

/// Cyclic irrep with beta_i = [i+(1+eps+xi)/2]_q [omega+i]_q and
/// gamma_i = [(xi-eps+1)/2 - i]_q / [omega+i-1]_q on v_1..v_N.
inline GeneralCyclicIrrep build_general_irrep(int N, cplx epsilon, cplx xi, cplx omega, int qsign,
                                              double tol = 1e-8) {
    const QContext c = make_qcontext(N, qsign);
    std::vector<cplx> beta(static_cast<std::size_t>(N)), gamma(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i) {
        const cplx den = c.qnum(omega + cplx(i - 1));
        if (std::abs(den) < 1e-12) fail(ErrorKind::SingularOmega, "[omega+i-1]_q vanishes for i=" + std::to_string(i));
        beta[static_cast<std::size_t>(i - 1)] = c.qnum(cplx(i) + 0.5 * (1.0 + epsilon + xi)) * c.qnum(omega + cplx(i));
        gamma[static_cast<std::size_t>(i - 1)] = c.qnum(0.5 * (xi - epsilon + 1.0) - cplx(i)) / den;
    }
    return detail::assemble_general(c, epsilon, xi, omega, std::move(beta), std::move(gamma), tol);
}

/// Semi-cyclic irrep (alpha_N = 0). With a highest weight (x = 0):
/// beta_i = alpha_i, gamma_i = 1 + (y-1) delta_{i,1}. With a lowest weight
/// (y = 0): beta_i = 1 + (x-1) delta_{i,N}, gamma_{i+1} = alpha_i.
/// `other` is the surviving center value (y or x respectively).
inline GeneralCyclicIrrep build_semicyclic_irrep(int N, cplx epsilon, cplx xi, cplx other, int qsign,
                                                 bool highest_weight, double tol = 1e-8) {
    const QContext c = make_qcontext(N, qsign);
    if (std::abs(cyclic_alpha(c, N, epsilon, xi)) > 1e-10)
        fail(ErrorKind::InvalidParams, "semi-cyclic irreps require alpha_N = 0 (e.g. xi = eps + 1)");
    const std::size_t n = static_cast<std::size_t>(N);
    std::vector<cplx> beta(n), gamma(n);
    for (int i = 1; i <= N; ++i) {
        const std::size_t s = static_cast<std::size_t>(i - 1);
        if (highest_weight) {
            beta[s] = cyclic_alpha(c, i, epsilon, xi);
            gamma[s] = (i == 1) ? other : cplx(1.0);
        } else {
            beta[s] = (i == N) ? other : cplx(1.0);
            gamma[static_cast<std::size_t>(i % N)] = cyclic_alpha(c, i, epsilon, xi);
        }
    }
    return detail::assemble_general(c, epsilon, xi, cplx(0.0), std::move(beta), std::move(gamma), tol);
}

// ---------------------------------------------------------------------------
// Two-dimensional irreps at q = i
// ---------------------------------------------------------------------------

/// Parameters of a two-dimensional cyclic irrep at q = i.
///
/// Center values are derived: x = x0 (1 + e^{2 eps}), z = -e^{2 eps},
/// c = casimir_sign * c0 * cosh(eps). At cosh(eps) = 0 both x and c vanish
/// identically, so that case needs the pinned values `pinned_x`, `pinned_c`.
struct IrrepParams2 {
    cplx epsilon{};
    cplx x_aut{1.0};
    cplx x0{};
    cplx c0{};
    int casimir_sign = 1;
    std::optional<cplx> pinned_x;
    std::optional<cplx> pinned_c;

    cplx cosh_eps() const { return std::cosh(epsilon); }
    cplx x() const { return pinned_x ? *pinned_x : x0 * (1.0 + std::exp(2.0 * epsilon)); }
    cplx z() const { return -std::exp(2.0 * epsilon); }
    cplx c() const { return pinned_c ? *pinned_c : double(casimir_sign) * c0 * cosh_eps(); }
    cplx y_aut() const { return (0.5 * cosh_eps() + c()) / x_aut; }
    /// From x y = c^2 - cosh^2(eps)/4; set to 0 at the degenerate point x = 0.
    cplx y() const {
        const cplx xx = x();
        if (xx == cplx{}) return 0.0;
        const cplx ch = cosh_eps();
        return (c() * c() - 0.25 * ch * ch) / xx;
    }

    bool operator==(const IrrepParams2&) const = default;
};

/// Parameters for the cosh(eps) = 0 pathway: eps = i pi/2 (k = diag(-1,1)).
inline IrrepParams2 coshzero_params(cplx x, cplx c, cplx x_aut = 1.0) {
    IrrepParams2 p;
    p.epsilon = cplx(0.0, std::numbers::pi / 2);
    p.x_aut = x_aut;
    p.pinned_x = x;
    p.pinned_c = c;
    return p;
}

/// e = [[0,xa],[x/xa,0]], f = [[0,y/ya],[ya,0]], k = e^eps diag(i,-i).
inline GeneratorTriple build_irrep2(const IrrepParams2& p) {
    require_finite(p.epsilon, "epsilon");
    require_finite(p.x_aut, "x_aut");
    if (p.x_aut == cplx{}) fail(ErrorKind::InvalidGauge, "x_aut must be nonzero");
    const bool coshzero = std::abs(p.cosh_eps()) < 1e-12;
    if (coshzero && !(p.pinned_x && p.pinned_c))
        fail(ErrorKind::CoshZeroCase, "cosh(eps) = 0 requires pinned x and c");
    const cplx x = p.x(), y = p.y(), ya = p.y_aut(), c = p.c();
    if (ya == cplx{} && y != cplx{}) fail(ErrorKind::InconsistentParams, "y_aut = 0 with y != 0");
    const cplx ee = std::exp(p.epsilon);
    GeneratorTriple g;
    g.e = Matrix(2, {0.0, p.x_aut, x / p.x_aut, 0.0});
    g.f = Matrix(2, {0.0, ya == cplx{} ? cplx{} : y / ya, ya, 0.0});
    g.k = Matrix(2, {ee * I_UNIT, 0.0, 0.0, -ee * I_UNIT});
    g.x = x;
    g.y = y;
    g.z = p.z();
    g.c = c;
    return g;
}

/// Gauge matrix U = diag(sqrt(xa), 1/sqrt(xa)); build_irrep2(p) = U g1 U^-1
/// where g1 is the x_aut = 1 triple.
inline Matrix gauge_matrix(cplx x_aut) {
    const cplx s = std::sqrt(x_aut);
    return Matrix::diag({s, 1.0 / s});
}

enum class CoproductVariant { Delta, DeltaBar };

/// Delta[k] = k(x)k, Delta[e] = k(x)e + e(x)1, Delta[f] = 1(x)f + f(x)k^-1 on
/// V_i (x) V_j. DeltaBar = P Delta_{ji} P, the factor-swapped coproduct.
inline GeneratorTriple coproduct2(const GeneratorTriple& gi, const GeneratorTriple& gj,
                                  CoproductVariant variant = CoproductVariant::Delta) {
    if (gi.e.dim() != 2 || gj.e.dim() != 2) fail(ErrorKind::Dimension, "coproduct2 expects 2x2 generators");
    if (variant == CoproductVariant::DeltaBar) {
        const GeneratorTriple d = coproduct2(gj, gi);
        const Matrix P = swap4();
        return GeneratorTriple{P * d.e * P, P * d.f * P, P * d.k * P, d.x, d.y, d.z, std::nullopt};
    }
    const Matrix i2 = Matrix::identity(2);
    GeneratorTriple d;
    d.k = kron(gi.k, gj.k);
    d.e = kron(gi.k, gj.e) + kron(gi.e, i2);
    d.f = kron(i2, gj.f) + kron(gi.f, gj.k.inverse());
    d.x = gi.z * gj.x + gi.x;
    d.y = gj.y + gi.y / gj.z;
    d.z = gi.z * gj.z;
    return d;
}

// ---------------------------------------------------------------------------
// Compatibility of a pair of irreps
// ---------------------------------------------------------------------------

enum class CompatibilityClass { PlusCase, MinusCase, ZeroCasimir, CoshZero, Incompatible };

inline const char* to_string(CompatibilityClass c) {
    switch (c) {
        case CompatibilityClass::PlusCase: return "PlusCase";
        case CompatibilityClass::MinusCase: return "MinusCase";
        case CompatibilityClass::ZeroCasimir: return "ZeroCasimir";
        case CompatibilityClass::CoshZero: return "CoshZero";
        case CompatibilityClass::Incompatible: return "Incompatible";
    }
    return "?";
}

namespace detail {
inline bool near(cplx a, cplx b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace detail

/// Intertwiners exist when x_j(1+e^{2eps_i}) = x_i(1+e^{2eps_j}) and
/// c_j cosh(eps_i) = +/- c_i cosh(eps_j).
inline CompatibilityClass classify_pair(const IrrepParams2& pi, const IrrepParams2& pj, double tol = 1e-9) {
    if (std::abs(pi.cosh_eps()) < tol && std::abs(pj.cosh_eps()) < tol) return CompatibilityClass::CoshZero;
    const bool xrel = detail::near(pj.x() * (1.0 + std::exp(2.0 * pi.epsilon)),
                                   pi.x() * (1.0 + std::exp(2.0 * pj.epsilon)), tol);
    if (!xrel) return CompatibilityClass::Incompatible;
    if (std::abs(pi.c()) < tol && std::abs(pj.c()) < tol) return CompatibilityClass::ZeroCasimir;
    const cplx lhs = pj.c() * pi.cosh_eps(), rhs = pi.c() * pj.cosh_eps();
    if (detail::near(lhs, rhs, tol)) return CompatibilityClass::PlusCase;
    if (detail::near(lhs, -rhs, tol)) return CompatibilityClass::MinusCase;
    return CompatibilityClass::Incompatible;
}

/// Casimir value c_ij on the two summands of V_i (x) V_j (eigenvalues +/- c_ij).
/// Plus case: -i c_i sinh(eps_i+eps_j)/cosh(eps_i). The minus case is the plus
/// case with eps_j -> eps_j + i pi, which flips the sign.
inline cplx fused_casimir(const IrrepParams2& pi, const IrrepParams2& pj, double tol = 1e-9) {
    if (std::abs(pi.cosh_eps()) < 1e-12) fail(ErrorKind::CoshZeroCase, "cosh(eps_i) = 0; use the cosh-zero projectors");
    const CompatibilityClass cls = classify_pair(pi, pj, tol);
    const cplx base = -I_UNIT * pi.c() * std::sinh(pi.epsilon + pj.epsilon) / pi.cosh_eps();
    switch (cls) {
        case CompatibilityClass::PlusCase: return base;
        case CompatibilityClass::MinusCase: return -base;
        case CompatibilityClass::ZeroCasimir: return 0.0;
        default: fail(ErrorKind::InvalidParams, std::string("no fused Casimir for class ") + to_string(cls));
    }
}

}  // namespace qybe
