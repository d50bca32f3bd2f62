#pragma once

// Invariant projectors and exchange operators on V_i (x) V_j for each
// compatibility class. Every R-matrix of the catalog is a combination
//     R = Exchange * (sum of projector-type operators).
//
// All matrices here follow the intertwining convention
//     Delta_ji[g] * R = R * Delta_ij[g],
// i.e. they act from V_i (x) V_j to V_j (x) V_i in the fixed basis order.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"

namespace qybe {

namespace detail {
inline void require_nonzero(cplx d, const char* what, double tol = 1e-12) {
    if (!(std::abs(d) > tol)) fail(ErrorKind::DegenerateFusion, std::string(what) + " vanishes");
}
}  // namespace detail

/// Casimir projectors P+ = -(C - c_ij)/(2 c_ij), P- = (C + c_ij)/(2 c_ij).
struct CasimirProjectors {
    Matrix plus, minus;
    cplx cij;
};

inline CasimirProjectors casimir_projectors(const IrrepParams2& pi, const IrrepParams2& pj) {
    const CompatibilityClass cls = classify_pair(pi, pj);
    if (cls != CompatibilityClass::PlusCase && cls != CompatibilityClass::MinusCase)
        fail(ErrorKind::InvalidParams, std::string("casimir projectors need a plus/minus pair, got ") + to_string(cls));
    const cplx cij = fused_casimir(pi, pj);
    detail::require_nonzero(std::sinh(pi.epsilon + pj.epsilon), "sinh(eps_i + eps_j)");
    detail::require_nonzero(cij, "fused Casimir c_ij");
    const Matrix C = casimir_matrix(coproduct2(build_irrep2(pi), build_irrep2(pj)));
    const Matrix id = Matrix::identity(4);
    return {(C - id * cij) * (-1.0 / (2.0 * cij)), (C + id * cij) * (1.0 / (2.0 * cij)), cij};
}

/// Exchange operator for the plus case (depends on eps and x_aut only).
inline Matrix exchange_plus(const IrrepParams2& pi, const IrrepParams2& pj) {
    const cplx ei = std::exp(pi.epsilon), ej = std::exp(pj.epsilon);
    const cplx d = 1.0 + ei * ej;
    detail::require_nonzero(d, "1 + e^{eps_i + eps_j}");
    const cplx r = pj.x_aut / pi.x_aut;
    Matrix m(4);
    m(0, 0) = 1.0;
    m(3, 3) = 1.0;
    m(1, 1) = r * (1.0 + ei * ei) / d;
    m(1, 2) = I_UNIT * (ej - ei) / d;
    m(2, 1) = I_UNIT * (ei - ej) / d;
    m(2, 2) = (1.0 + ej * ej) / (r * d);
    return m;
}

/// Exchange operator for the minus case; the corner entries involve the
/// shared constant x0 = x_i / (1 + e^{2 eps_i}).
inline Matrix exchange_minus(const IrrepParams2& pi, const IrrepParams2& pj) {
    const cplx ei = std::exp(pi.epsilon), ej = std::exp(pj.epsilon);
    const cplx d = 1.0 - ei * ej;
    detail::require_nonzero(d, "1 - e^{eps_i + eps_j}");
    const cplx x0 = pi.x() / (1.0 + ei * ei);
    detail::require_nonzero(x0, "x0");
    const cplx aa = pi.x_aut * pj.x_aut;
    Matrix m(4);
    m(0, 0) = I_UNIT * (ei + ej) / d;
    m(3, 3) = -I_UNIT * (ei + ej) / d;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(0, 3) = aa / (x0 * d);
    m(3, 0) = x0 * (1.0 + ei * ei) * (1.0 + ej * ej) / (d * aa);
    return m;
}

/// The four zero-Casimir building blocks, in the order (++, --, +-, -+).
/// Exchange * (P++ + f P-- + g P+- + h P-+) = B++ + f B-- + g B+- + h B-+.
inline std::array<Matrix, 4> zero_casimir_blocks(const IrrepParams2& pi, const IrrepParams2& pj) {
    const cplx ei = std::exp(pi.epsilon), ej = std::exp(pj.epsilon);
    const cplx ci = pi.cosh_eps(), cj = pj.cosh_eps();
    const cplx sh = std::sinh(pi.epsilon + pj.epsilon);
    const cplx xi = pi.x_aut, xj = pj.x_aut, x0 = pi.x0;
    detail::require_nonzero(sh, "sinh(eps_i + eps_j)");
    detail::require_nonzero(x0, "x0");
    const cplx i = I_UNIT;
    std::array<Matrix, 4> b{Matrix(4), Matrix(4), Matrix(4), Matrix(4)};
    Matrix& pp = b[0];
    Matrix& mm = b[1];
    Matrix& pm = b[2];
    Matrix& mp = b[3];

    pp(0, 0) = xi * ej * cj / (xj * sh);
    pp(3, 0) = 2.0 * x0 * ej * cj * cj / (i * xj * xj * sh);
    pp(1, 1) = 1.0;
    pp(0, 3) = xi * xi / ei / (2.0 * i * x0 * sh);
    pp(3, 3) = -xi / ei * cj / (xj * sh);

    mm(0, 0) = -xj / ej * ci / (xi * sh);
    mm(3, 0) = 2.0 * i * x0 * ei * ci * ci / (xi * xi * sh);
    mm(2, 2) = 1.0;
    mm(0, 3) = i * xj * xj / ej / (2.0 * x0 * sh);
    mm(3, 3) = xj * ei * ci / (xi * sh);

    pm(0, 0) = cj / (i * sh);
    pm(3, 0) = -2.0 * x0 * ei * ej * cj * ci / (xi * xj * sh);
    pm(2, 1) = 1.0;
    pm(0, 3) = -xi * xj / (ei * ej) / (2.0 * x0 * sh);
    pm(3, 3) = i * ci / sh;

    mp(0, 0) = ci / (i * sh);
    mp(3, 0) = -2.0 * x0 * cj * ci / (xi * xj * sh);
    mp(1, 2) = 1.0;
    mp(0, 3) = -xi * xj / (2.0 * x0 * sh);
    mp(3, 3) = i * cj / sh;
    return b;
}

/// Zero-Casimir exchange operator (= B++ + B--).
inline Matrix exchange_zero(const IrrepParams2& pi, const IrrepParams2& pj) {
    const auto b = zero_casimir_blocks(pi, pj);
    return b[0] + b[1];
}

inline Matrix exchange_operator(const IrrepParams2& pi, const IrrepParams2& pj, CompatibilityClass cls) {
    switch (cls) {
        case CompatibilityClass::PlusCase: return exchange_plus(pi, pj);
        case CompatibilityClass::MinusCase: return exchange_minus(pi, pj);
        case CompatibilityClass::ZeroCasimir: return exchange_zero(pi, pj);
        default:
            fail(ErrorKind::InvalidParams, std::string("no exchange operator for class ") + to_string(cls));
    }
}

/// Four zero-Casimir operators with P++ + P-- = I. Under multiplication,
/// P+- carries the + summand into the - summand and P-+ the reverse:
/// P-+ P+- = P++, P+- P-+ = P--, P+- P++ = P+-, P-- P+- = P+-.
struct DegenerateProjectors {
    Matrix pp, mm, pm, mp;
    Matrix exchange;
};

inline DegenerateProjectors degenerate_projectors(const IrrepParams2& pi, const IrrepParams2& pj) {
    const CompatibilityClass cls = classify_pair(pi, pj);
    if (cls != CompatibilityClass::ZeroCasimir)
        fail(ErrorKind::InvalidParams, std::string("degenerate projectors need c_i = c_j = 0, got ") + to_string(cls));
    const auto b = zero_casimir_blocks(pi, pj);
    const Matrix ex = b[0] + b[1];
    Matrix inv(4);
    try {
        inv = ex.inverse();
    } catch (const Error&) {
        fail(ErrorKind::DegenerateFusion, "zero-Casimir exchange operator is singular");
    }
    return {inv * b[0], inv * b[1], inv * b[2], inv * b[3], ex};
}

/// Projectors for cosh(eps_i) = cosh(eps_j) = 0, with c_ij^2 = (x_i+x_j)(c_i^2 x_j + c_j^2 x_i)/(x_i x_j).
/// `plus`/`minus` are the spectral projectors (idempotent, orthogonal, sum I);
/// `braid_plus`/`braid_minus` = exchange * plus/minus are the intertwiners, and
/// `exchange` = braid_plus + braid_minus is the constant matrix diag(-1, swap, 1).
struct CoshZeroProjectors {
    Matrix plus, minus;
    Matrix braid_plus, braid_minus;
    Matrix exchange;
    cplx cij;
};

inline CoshZeroProjectors coshzero_projectors(cplx ci, cplx cj, cplx xi, cplx xj) {
    if (xi == cplx{} || xj == cplx{}) fail(ErrorKind::InvalidParams, "x_i x_j must be nonzero");
    const cplx cij = std::sqrt((xi + xj) * (ci * ci * xj + cj * cj * xi) / (xi * xj));
    detail::require_nonzero(cij, "c_ij");
    auto braid = [&](double s) {
        Matrix m(4);
        m(0, 0) = (ci + cj + s * cij) / (-s * 2.0 * cij);
        m(3, 0) = (ci * xj - cj * xi) / (s * 2.0 * cij);
        m(1, 1) = (ci * xj + cj * xi) / (-s * 2.0 * cij * xj);
        m(2, 1) = (cj - ci + s * cij) / (s * 2.0 * cij);
        m(1, 2) = (ci - cj + s * cij) / (s * 2.0 * cij);
        m(2, 2) = (ci * xj + cj * xi) / (-s * 2.0 * cij * xi);
        m(0, 3) = (cj * xi - ci * xj) / (s * 2.0 * cij * xi * xj);
        m(3, 3) = (ci + cj - s * cij) / (-s * 2.0 * cij);
        return m;
    };
    CoshZeroProjectors r;
    r.braid_plus = braid(1.0);
    r.braid_minus = braid(-1.0);
    r.exchange = r.braid_plus + r.braid_minus;
    // The exchange matrix is an involution, so it is its own inverse.
    r.plus = r.exchange * r.braid_plus;
    r.minus = r.exchange * r.braid_minus;
    r.cij = cij;
    return r;
}

/// Transport an intertwiner built at x_aut = 1 to general gauge parameters:
/// R' = (U_j (x) U_i) R (U_i (x) U_j)^-1 with U = diag(sqrt(xa), 1/sqrt(xa)).
inline Matrix gauge_lift(const Matrix& r, cplx xa_i, cplx xa_j) {
    const Matrix ui = gauge_matrix(xa_i), uj = gauge_matrix(xa_j);
    return kron(uj, ui) * r * kron(ui.inverse(), uj.inverse());
}

// ---------------------------------------------------------------------------
// Uniform view used by verification and the CLI
// ---------------------------------------------------------------------------

struct ProjectorSet {
    CompatibilityClass cls = CompatibilityClass::Incompatible;
    std::vector<std::pair<std::string, Matrix>> ops;

    const Matrix& get(const std::string& name) const {
        for (const auto& [n, m] : ops)
            if (n == name) return m;
        fail(ErrorKind::InvalidParams, "no operator named " + name);
    }
};

inline ProjectorSet make_projector_set(const IrrepParams2& pi, const IrrepParams2& pj) {
    ProjectorSet s;
    s.cls = classify_pair(pi, pj);
    switch (s.cls) {
        case CompatibilityClass::PlusCase:
        case CompatibilityClass::MinusCase: {
            const auto cp = casimir_projectors(pi, pj);
            s.ops = {{"P+", cp.plus}, {"P-", cp.minus}, {"Exchange", exchange_operator(pi, pj, s.cls)}};
            break;
        }
        case CompatibilityClass::ZeroCasimir: {
            const auto d = degenerate_projectors(pi, pj);
            s.ops = {{"P++", d.pp}, {"P--", d.mm}, {"P+-", d.pm}, {"P-+", d.mp}, {"Exchange", d.exchange}};
            break;
        }
        case CompatibilityClass::CoshZero: {
            const auto c = coshzero_projectors(pi.c(), pj.c(), pi.x(), pj.x());
            s.ops = {{"P+", c.plus},
                     {"P-", c.minus},
                     {"BraidP+", gauge_lift(c.braid_plus, pi.x_aut, pj.x_aut)},
                     {"BraidP-", gauge_lift(c.braid_minus, pi.x_aut, pj.x_aut)}};
            break;
        }
        case CompatibilityClass::Incompatible:
            fail(ErrorKind::InvalidParams, "irrep pair is incompatible; no intertwiner exists");
    }
    return s;
}

/// Scale-aware residual of A*B against C: |AB - C| / max(1, |A||B|).
inline double product_residual(const Matrix& a, const Matrix& b, const Matrix& c) {
    return max_abs_diff(a * b, c) / std::max(1.0, a.max_abs() * b.max_abs());
}

/// Completeness, idempotence, orthogonality (and, for the zero-Casimir case,
/// the transposition algebra), as a single scale-aware residual.
inline double projector_algebra_residual(const ProjectorSet& s) {
    const Matrix id = Matrix::identity(4), zero(4);
    double r = 0.0;
    auto check_pair = [&](const Matrix& p, const Matrix& m) {
        r = std::max(r, max_abs_diff(p + m, id) / std::max(1.0, std::max(p.max_abs(), m.max_abs())));
        r = std::max(r, product_residual(p, p, p));
        r = std::max(r, product_residual(m, m, m));
        r = std::max(r, product_residual(p, m, zero));
        r = std::max(r, product_residual(m, p, zero));
    };
    if (s.cls == CompatibilityClass::ZeroCasimir) {
        const Matrix &pp = s.get("P++"), &mm = s.get("P--"), &pm = s.get("P+-"), &mp = s.get("P-+");
        check_pair(pp, mm);
        // P_ab maps summand a to summand b: P_ab P_cd = delta_{a d} P_cb
        // (read right to left: first c->d, then a->b).
        const std::array<const Matrix*, 4> op{&pp, &pm, &mp, &mm};  // index = 2a + b
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) {
                        const Matrix expect = (a == d) ? *op[static_cast<std::size_t>(2 * c + b)] : zero;
                        r = std::max(r, product_residual(*op[static_cast<std::size_t>(2 * a + b)],
                                                         *op[static_cast<std::size_t>(2 * c + d)], expect));
                    }
    } else {
        check_pair(s.get("P+"), s.get("P-"));
    }
    return r;
}

}  // namespace qybe
