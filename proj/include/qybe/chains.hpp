#pragma once

// Spin chains from baxterized R-matrices: two-site Hamiltonian densities
// (logarithmic derivative at the normalization point) decomposed over the
// Pauli basis, and periodic transfer matrices.

#include <array>
#include <functional>
#include <string>

#include "catalog.hpp"

namespace qybe {

/// Coefficients over {I, sz_i, sz_{i+1}, sz sz, s+ s-, s- s+, s+ s+, s- s-}
/// with sz = diag(1,-1)/2 and s+ s- meaning sigma+_i sigma-_{i+1}.
struct PauliDecomposition {
    cplx identity{}, sz_i{}, sz_j{}, szsz{};
    cplx pm{}, mp{}, pp{}, mm{};
    /// Largest entry of the input not representable in this basis.
    double residual = 0.0;

    static constexpr std::array<const char*, 8> names = {"identity", "sz_i", "sz_i+1", "sz_sz",
                                                         "sp_sm",    "sm_sp", "sp_sp",  "sm_sm"};
    std::array<cplx, 8> values() const { return {identity, sz_i, sz_j, szsz, pm, mp, pp, mm}; }
};

namespace detail {
inline std::array<Matrix, 8> pauli_basis() {
    const Matrix i2 = Matrix::identity(2), z = sigma_z_half(), p = sigma_plus(), m = sigma_minus();
    return {Matrix::identity(4), kron(z, i2), kron(i2, z), kron(z, z), kron(p, m), kron(m, p), kron(p, p), kron(m, m)};
}
}  // namespace detail

/// Orthogonal (Hilbert-Schmidt) projection onto the eight basis operators.
inline PauliDecomposition decompose(const Matrix& h) {
    if (h.dim() != 4) fail(ErrorKind::Dimension, "decompose expects a 4x4 matrix");
    const auto basis = detail::pauli_basis();
    std::array<cplx, 8> c{};
    for (std::size_t k = 0; k < 8; ++k) {
        const Matrix& b = basis[k];
        cplx num{}, den{};
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                num += std::conj(b(i, j)) * h(i, j);
                den += std::conj(b(i, j)) * b(i, j);
            }
        c[k] = num / den;
    }
    PauliDecomposition d{c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7], 0.0};
    Matrix rec(4);
    for (std::size_t k = 0; k < 8; ++k) rec = rec + basis[k] * c[k];
    d.residual = max_abs_diff(rec, h);
    return d;
}

inline Matrix reconstruct(const PauliDecomposition& d) {
    const auto basis = detail::pauli_basis();
    const auto v = d.values();
    Matrix rec(4);
    for (std::size_t k = 0; k < 8; ++k) rec = rec + basis[k] * v[k];
    return rec;
}

/// The same coefficients written directly in terms of the derivative entries
/// (diagonal a, b, c, d; hopping entries as they stand).
inline PauliDecomposition pauli_from_entries(const Matrix& dr) {
    const cplx a = dr(0, 0), b = dr(1, 1), c = dr(2, 2), d = dr(3, 3);
    PauliDecomposition p;
    p.identity = (a + b + c + d) / 4.0;
    p.sz_i = (a + b - c - d) / 2.0;
    p.sz_j = (a - b + c - d) / 2.0;
    p.szsz = a - b - c + d;
    p.pm = dr(1, 2);
    p.mp = dr(2, 1);
    p.pp = dr(0, 3);
    p.mm = dr(3, 0);
    return p;
}

/// The site with its spectral parameter moved by t. Two-parameter sites keep
/// c = e^{2u} in step with u.
inline Site shift_spectral(const Site& s, cplx t, FamilyId family) {
    if (family == FamilyId::CoshZeroTwoParam) return two_param_site(s.u + t, s.w, s.p.x_aut);
    Site out = s;
    out.u += t;
    return out;
}

/// A one-parameter curve t -> braid-form R(t) with R(0) proportional to I.
using SpectralCurve = std::function<Matrix(cplx)>;

/// Derivative of R(t)/R(0)[0,0] at t = 0 by central differences, decomposed
/// over the Pauli basis. Throws NotNormalizable if R(0) is not proportional to I.
inline PauliDecomposition hamiltonian_density(const SpectralCurve& curve, double step = 1e-5, double tol = 1e-9) {
    const Matrix r0 = curve(0.0);
    const cplx s = r0(0, 0);
    if (std::abs(s) < 1e-12 || max_abs_diff(r0, Matrix::identity(4) * s) > tol * std::abs(s))
        fail(ErrorKind::NotNormalizable, "R is not proportional to the identity at the expansion point");
    const Matrix d = (curve(step) - curve(-step)) / (2.0 * step * s);
    return decompose(d);
}

/// Which site parameter is varied when expanding a family.
enum class ExpansionVariable { Spectral, Epsilon };

/// Curve for a family: site i is the base site shifted by t in u (or eps),
/// site j is the base site itself.
inline SpectralCurve family_curve(const FamilyParams& fp, const Site& base, ExpansionVariable var) {
    FamilyParams clean = fp;
    clean.normalize = false;
    return [clean, base, var](cplx t) {
        Site si = base;
        if (var == ExpansionVariable::Spectral) {
            si = shift_spectral(base, t, clean.family);
        } else {
            if (clean.family == FamilyId::XXTrig) fail(ErrorKind::InvalidParams, "XXTrig ties eps to u0");
            si.p.epsilon += t;
        }
        return build(clean, si, base).m;
    };
}

inline PauliDecomposition hamiltonian_density(const FamilyParams& fp, const Site& base,
                                              ExpansionVariable var = ExpansionVariable::Spectral,
                                              double step = 1e-5) {
    if (!describe(fp.family).baxterized)
        fail(ErrorKind::NotNormalizable, std::string(to_string(fp.family)) + " has no spectral expansion point");
    return hamiltonian_density(family_curve(fp, base, var), step);
}

/// Periodic transfer matrix tau(u) = tr_a R_a1(u) R_a2(u) ... R_aL(u) on 2^L
/// states, with R = plain(R(u)) acting on (auxiliary, site) and the same matrix at
/// every site.
inline Matrix transfer_matrix(const Matrix& r_plain, int L) {
    if (L < 2 || L > 12) fail(ErrorKind::Dimension, "transfer_matrix supports 2 <= L <= 12");
    if (r_plain.dim() != 4) fail(ErrorKind::Dimension, "transfer_matrix expects a 4x4 R");
    const std::size_t n = std::size_t{1} << L;
    // Auxiliary 2x2 blocks: blk[s'][s](a', a) = R[(a' s'), (a s)].
    cplx blk[2][2][2][2];
    for (int sp = 0; sp < 2; ++sp)
        for (int s = 0; s < 2; ++s)
            for (int ap = 0; ap < 2; ++ap)
                for (int a = 0; a < 2; ++a)
                    blk[sp][s][ap][a] = r_plain(static_cast<std::size_t>(ap * 2 + sp), static_cast<std::size_t>(a * 2 + s));
    Matrix tau(n);
    for (std::size_t row = 0; row < n; ++row)
        for (std::size_t col = 0; col < n; ++col) {
            // Site 1 is the most significant bit.
            cplx m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
            bool zero = false;
            for (int k = 0; k < L && !zero; ++k) {
                const int sh = L - 1 - k;
                const int sp = static_cast<int>((row >> sh) & 1u), s = static_cast<int>((col >> sh) & 1u);
                const auto& b = blk[sp][s];
                const cplx n00 = m00 * b[0][0] + m01 * b[1][0], n01 = m00 * b[0][1] + m01 * b[1][1];
                const cplx n10 = m10 * b[0][0] + m11 * b[1][0], n11 = m10 * b[0][1] + m11 * b[1][1];
                m00 = n00;
                m01 = n01;
                m10 = n10;
                m11 = n11;
                zero = m00 == cplx{} && m01 == cplx{} && m10 == cplx{} && m11 == cplx{};
            }
            tau(row, col) = m00 + m11;
        }
    return tau;
}

/// Homogeneous chain built from a family: R(u) is the family matrix on
/// (site with u, base site with 0), converted to plain form.
inline Matrix transfer_matrix(const FamilyParams& fp, const Site& base, int L, cplx u) {
    return transfer_matrix(swap4() * build(fp, shift_spectral(base, u, fp.family), base).m, L);
}

/// |tau(u) tau(v) - tau(v) tau(u)| with both transfer matrices at unit max entry.
inline double commutation_check(const Matrix& tu, const Matrix& tv) {
    const Matrix a = unit_max(tu), b = unit_max(tv);
    return max_abs_diff(a * b, b * a);
}

inline double commutation_check(const FamilyParams& fp, const Site& base, int L, cplx u, cplx v) {
    return commutation_check(transfer_matrix(fp, base, L, u), transfer_matrix(fp, base, L, v));
}

}  // namespace qybe
