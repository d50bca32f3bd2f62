#include <gtest/gtest.h>

#include <qybe/projectors.hpp>

#include "test_support.hpp"

using namespace qybe;
using qybe::testing::random_site;

namespace {

/// max |Delta_ji(g) M - M Delta_ij(g)| over g in {e, f, k}, relative to |M|.
double braid_residual(const Matrix& m, const IrrepParams2& pi, const IrrepParams2& pj) {
    const GeneratorTriple gi = build_irrep2(pi), gj = build_irrep2(pj);
    const GeneratorTriple dij = coproduct2(gi, gj), dji = coproduct2(gj, gi);
    const double s = std::max(1.0, m.max_abs());
    double r = max_abs_diff(dji.e * m, m * dij.e) / (s * std::max(1.0, dij.e.max_abs()));
    r = std::max(r, max_abs_diff(dji.f * m, m * dij.f) / (s * std::max(1.0, dij.f.max_abs())));
    return std::max(r, max_abs_diff(dji.k * m, m * dij.k) / s);
}

/// max |Delta_ij(g) P - P Delta_ij(g)|: a projector onto a submodule commutes with the action.
double commutant_residual(const Matrix& p, const IrrepParams2& pi, const IrrepParams2& pj) {
    const GeneratorTriple d = coproduct2(build_irrep2(pi), build_irrep2(pj));
    const double s = std::max(1.0, p.max_abs());
    double r = max_abs_diff(d.e * p, p * d.e) / (s * std::max(1.0, d.e.max_abs()));
    r = std::max(r, max_abs_diff(d.f * p, p * d.f) / (s * std::max(1.0, d.f.max_abs())));
    return std::max(r, max_abs_diff(d.k * p, p * d.k) / s);
}

struct PairDraw {
    IrrepParams2 a, b;
};

PairDraw plus_pair(Rng& rng, int sign_b = 1) {
    const cplx x0 = rng.magnitude(0.3, 3.0), c0 = rng.magnitude(0.3, 3.0);
    Site a = random_site(rng, x0, c0), b = random_site(rng, x0, c0);
    b.p.casimir_sign = sign_b;
    return {a.p, b.p};
}

PairDraw zero_pair(Rng& rng) {
    const cplx x0 = rng.magnitude(0.3, 3.0);
    return {random_site(rng, x0, 0.0).p, random_site(rng, x0, 0.0).p};
}

}  // namespace

TEST(Projectors, PlusCaseAlgebra) {
    Rng rng(20);
    for (int k = 0; k < 200; ++k) {
        const auto [a, b] = plus_pair(rng);
        const ProjectorSet s = make_projector_set(a, b);
        ASSERT_EQ(s.cls, CompatibilityClass::PlusCase);
        EXPECT_LT(projector_algebra_residual(s), 1e-12);
    }
}

TEST(Projectors, MinusCaseAlgebra) {
    Rng rng(21);
    for (int k = 0; k < 200; ++k) {
        const auto [a, b] = plus_pair(rng, -1);
        const ProjectorSet s = make_projector_set(a, b);
        ASSERT_EQ(s.cls, CompatibilityClass::MinusCase);
        EXPECT_LT(projector_algebra_residual(s), 1e-12);
    }
}

TEST(Projectors, CasimirProjectorsHaveRankTwoAndCommuteWithAction) {
    Rng rng(22);
    for (int sign : {1, -1})
        for (int k = 0; k < 30; ++k) {
            const auto [a, b] = plus_pair(rng, sign);
            const auto cp = casimir_projectors(a, b);
            EXPECT_NEAR(std::abs(cp.plus.trace() - 2.0), 0.0, 1e-10);
            EXPECT_NEAR(std::abs(cp.minus.trace() - 2.0), 0.0, 1e-10);
            EXPECT_LT(commutant_residual(cp.plus, a, b), 1e-10);
        }
}

TEST(Projectors, ExchangeOperatorsIntertwine) {
    Rng rng(23);
    for (int k = 0; k < 50; ++k) {
        const auto [a, b] = plus_pair(rng);
        EXPECT_LT(braid_residual(exchange_plus(a, b), a, b), 1e-11);
        const auto [c, d] = plus_pair(rng, -1);
        EXPECT_LT(braid_residual(exchange_minus(c, d), c, d), 1e-11);
        const auto [e, f] = zero_pair(rng);
        EXPECT_LT(braid_residual(exchange_zero(e, f), e, f), 1e-11);
    }
}

TEST(Projectors, PlusExchangeIsIdentityOnEqualSites) {
    Rng rng(24);
    const auto [a, b] = plus_pair(rng);
    (void)b;
    EXPECT_LT(max_abs_diff(exchange_plus(a, a), Matrix::identity(4)), 1e-14);
}

TEST(Projectors, PlusExchangeInverseIsReversedExchange) {
    Rng rng(25);
    const auto [a, b] = plus_pair(rng);
    EXPECT_LT(max_abs_diff(exchange_plus(b, a) * exchange_plus(a, b), Matrix::identity(4)), 1e-12);
}

TEST(Projectors, ZeroCasimirAlgebra) {
    Rng rng(26);
    for (int k = 0; k < 200; ++k) {
        const auto [a, b] = zero_pair(rng);
        const ProjectorSet s = make_projector_set(a, b);
        ASSERT_EQ(s.cls, CompatibilityClass::ZeroCasimir);
        EXPECT_LT(projector_algebra_residual(s), 1e-12);
    }
}

TEST(Projectors, ZeroCasimirTranspositionRelations) {
    Rng rng(27);
    const auto [a, b] = zero_pair(rng);
    const auto d = degenerate_projectors(a, b);
    auto rel = [](const Matrix& x, const Matrix& y, const Matrix& z) { return product_residual(x, y, z); };
    EXPECT_LT(rel(d.mp, d.pm, d.pp), 1e-12);
    EXPECT_LT(rel(d.pm, d.mp, d.mm), 1e-12);
    EXPECT_LT(rel(d.pm, d.pp, d.pm), 1e-12);
    EXPECT_LT(rel(d.mm, d.pm, d.pm), 1e-12);
    EXPECT_LT(rel(d.pm, d.pm, Matrix(4)), 1e-12);
    EXPECT_LT(rel(d.pp, d.pm, Matrix(4)), 1e-12);
    EXPECT_NEAR(std::abs(d.pp.trace() - 2.0), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(d.pm.trace()), 0.0, 1e-10);
}

TEST(Projectors, ZeroCasimirBlocksIntertwine) {
    Rng rng(28);
    for (int k = 0; k < 30; ++k) {
        const auto [a, b] = zero_pair(rng);
        for (const Matrix& blk : zero_casimir_blocks(a, b)) EXPECT_LT(braid_residual(blk, a, b), 1e-11);
    }
}

TEST(Projectors, CoshZeroProjectors) {
    Rng rng(29);
    for (int k = 0; k < 200; ++k) {
        const IrrepParams2 a = coshzero_params(rng.magnitude(0.3, 3.0), rng.magnitude(0.3, 3.0), rng.magnitude(0.5, 2.0));
        const IrrepParams2 b = coshzero_params(rng.magnitude(0.3, 3.0), rng.magnitude(0.3, 3.0), rng.magnitude(0.5, 2.0));
        const ProjectorSet s = make_projector_set(a, b);
        ASSERT_EQ(s.cls, CompatibilityClass::CoshZero);
        EXPECT_LT(projector_algebra_residual(s), 1e-12);
        EXPECT_LT(braid_residual(s.get("BraidP+"), a, b), 1e-10);
        EXPECT_LT(braid_residual(s.get("BraidP-"), a, b), 1e-10);
    }
}

TEST(Projectors, CoshZeroExchangeIsConstantInvolution) {
    const auto c = coshzero_projectors(0.7, cplx(1.2, 0.3), cplx(0.4, -0.2), 2.0);
    const Matrix expected(4, {-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
    EXPECT_LT(max_abs_diff(c.exchange, expected), 1e-14);
    EXPECT_LT(max_abs_diff(c.plus + c.minus, Matrix::identity(4)), 1e-14);
    EXPECT_NEAR(std::abs(c.plus.trace() - 2.0), 0.0, 1e-12);
}

TEST(Projectors, GaugeLiftRoundTrip) {
    Rng rng(30);
    const Matrix r = qybe::testing::random_matrix(rng, 4);
    const cplx a = rng.magnitude(0.5, 2.0), b = rng.magnitude(0.5, 2.0);
    EXPECT_LT(max_abs_diff(gauge_lift(r, 1.0, 1.0), r), 1e-15);
    // Lifting (1,1) -> (a,b) then applying the inverse conjugation restores R.
    const Matrix ui = gauge_matrix(a), uj = gauge_matrix(b);
    const Matrix back = kron(uj, ui).inverse() * gauge_lift(r, a, b) * kron(ui, uj);
    EXPECT_LT(max_abs_diff(back, r), 1e-13);
}

TEST(Projectors, DegenerateFusionIsReported) {
    IrrepParams2 a;
    a.epsilon = cplx(0.3, 0.2);
    a.x0 = 1.0;
    a.c0 = 1.0;
    IrrepParams2 b = a;
    b.epsilon = -a.epsilon;  // sinh(eps_i + eps_j) = 0
    try {
        casimir_projectors(a, b);
        FAIL() << "expected a DegenerateFusion error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateFusion);
        EXPECT_TRUE(e.is_degenerate());
    }
}

TEST(Projectors, WrongClassIsRejected) {
    Rng rng(31);
    const auto [a, b] = zero_pair(rng);
    EXPECT_THROW(casimir_projectors(a, b), Error);
    const auto [c, d] = plus_pair(rng);
    EXPECT_THROW(degenerate_projectors(c, d), Error);
    EXPECT_THROW(make_projector_set(c, zero_pair(rng).a), Error);
}

TEST(Projectors, ProjectorSetNames) {
    Rng rng(32);
    const auto [a, b] = zero_pair(rng);
    const ProjectorSet s = make_projector_set(a, b);
    EXPECT_EQ(s.ops.size(), 5u);
    EXPECT_NO_THROW(s.get("P-+"));
    EXPECT_THROW(s.get("P0"), Error);
}
