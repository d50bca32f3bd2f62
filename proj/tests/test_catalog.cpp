#include <gtest/gtest.h>

#include <cstdio>
#include <set>

#include "test_support.hpp"

using namespace qybe;
using qybe::testing::random_site;

namespace {

FamilyParams family(FamilyId id) {
    FamilyParams p;
    p.family = id;
    return p;
}

// Printed layout of the general plus-case solution, with F = f_i / f_j.
Matrix printed_plus(const Site& a, const Site& b, cplx F) {
    const cplx ei = std::exp(a.p.epsilon), ej = std::exp(b.p.epsilon);
    const cplx d = 1.0 + ei * ej * F;
    const cplx i = I_UNIT;
    Matrix m(4);
    m(0, 0) = 1.0;
    m(1, 1) = b.p.x_aut / a.p.x_aut * (1.0 + ei * ei) * F / d;
    m(1, 2) = i * (ei - ej * F) / d;
    m(2, 1) = i * (ej - ei * F) / d;
    m(2, 2) = a.p.x_aut / b.p.x_aut * (1.0 + ej * ej) / d;
    m(3, 3) = (F + ei * ej) / d;
    return m;
}

// Ising-type homogeneous displays; t = tanh u and e^alpha = 2 e^eps cosh(eps) x0 / xa^2.
cplx ising_alpha(const Site& s) {
    return 2.0 * std::exp(s.p.epsilon) * std::cosh(s.p.epsilon) * s.p.x0 / (s.p.x_aut * s.p.x_aut);
}

Matrix ising_star(cplx u, const Site& s) {
    const cplx t = std::tanh(u), ea = ising_alpha(s);
    return Matrix(4, {1.0, 0.0, 0.0, -ea * t, 0.0, 1.0, t, 0.0, 0.0, -t, 1.0, 0.0, t / ea, 0.0, 0.0, 1.0});
}

Matrix ising_star_star(cplx u, const Site& s) {
    const cplx t = std::tanh(u), ea = ising_alpha(s), ch = std::cosh(s.p.epsilon);
    const cplx te = std::tanh(s.p.epsilon) * t, i = I_UNIT;
    return Matrix(4, {1.0 - i * t / ch, 0.0, 0.0, -ea * t, 0.0, 1.0, te, 0.0, 0.0, te, 1.0, 0.0, -t / ea, 0.0, 0.0,
                      1.0 + i * t / ch});
}

Site zero_site(Rng& rng) {
    Site s = random_site(rng, rng.magnitude(0.3, 3.0), 0.0);
    s.p.epsilon = cplx(rng.uniform(-0.8, 0.8), rng.uniform(-1.0, 1.0));
    s.u = 0.0;
    return s;
}

}  // namespace

TEST(Catalog, EnumeratesAtLeastTwentyUniqueFamilies) {
    const auto ids = all_families();
    EXPECT_GE(ids.size(), 20u);
    std::set<std::string> names;
    for (auto id : ids) {
        names.insert(to_string(id));
        EXPECT_EQ(family_from_string(to_string(id)), id);
        EXPECT_EQ(describe(id).id, id);
    }
    EXPECT_EQ(names.size(), ids.size());
    EXPECT_FALSE(family_from_string("NotAFamily").has_value());
}

TEST(Catalog, DescriptorSchemas) {
    EXPECT_EQ(describe(FamilyId::XXTrig).schema, (std::vector<std::string>{"u", "u0"}));
    EXPECT_EQ(describe(FamilyId::CoshZeroTwoParam).schema, (std::vector<std::string>{"u_i", "u_j", "w_i", "w_j"}));
    EXPECT_EQ(describe(FamilyId::MinusPair).ybe, YbeForm::Mixed);
    EXPECT_TRUE(describe(FamilyId::XXTrig).baxterized);
    EXPECT_FALSE(describe(FamilyId::ZeroF0).baxterized);
    for (auto id : all_families()) EXPECT_FALSE(std::string(describe(id).anchor).empty());
}

TEST(Catalog, FunctionPresets) {
    Site s;
    s.u = cplx(0.3, -0.1);
    s.p.epsilon = cplx(0.2, 0.4);
    EXPECT_EQ(FunctionHandle::constant(cplx(2.0, 1.0))(s), cplx(2.0, 1.0));
    const cplx k(0.7, 0.1), a(1.1, 0.0), b(0.0, 0.5);
    EXPECT_LT(std::abs(FunctionHandle::exp_spectral(k, a, b)(s) - std::exp(k * s.u) * (a + b * s.p.epsilon)), 1e-15);
    EXPECT_LT(std::abs(FunctionHandle::reciprocal_cosh()(s) - 1.0 / std::cosh(s.p.epsilon)), 1e-15);
    const auto custom = FunctionHandle::custom([](cplx, cplx, cplx u) { return u * u; });
    EXPECT_LT(std::abs(custom(s) - s.u * s.u), 1e-15);
    const auto bad = FunctionHandle::custom([](cplx, cplx, cplx) { return cplx(std::numeric_limits<double>::infinity()); });
    EXPECT_THROW(bad(s), Error);
}

TEST(Catalog, XXAtZeroIsSinU0TimesIdentity) {
    for (double u0 : {0.3, 0.8, 1.4}) {
        EXPECT_LT(max_abs_diff(r_xx(0.0, u0), Matrix::identity(4) * std::sin(u0)), 1e-15);
        FamilyParams p = family(FamilyId::XXTrig);
        p.constants.u0 = u0;
        const RMatrix r = build(p, xx_site(0.0, u0), xx_site(0.0, u0));
        EXPECT_LT(max_abs_diff(r.m, Matrix::identity(4) * std::sin(u0)), 1e-14);
    }
}

TEST(Catalog, XXBuildMatchesClosedForm) {
    Rng rng(40);
    for (int k = 0; k < 30; ++k) {
        const cplx u = rng.unit_box(), u0 = rng.uniform(0.2, 1.4);
        FamilyParams p = family(FamilyId::XXTrig);
        p.constants.u0 = u0;
        const RMatrix r = build(p, xx_site(u, u0), xx_site(0.0, u0));
        EXPECT_LT(max_abs_diff(r.m, r_xx(u, u0)), 1e-12);
    }
}

TEST(Catalog, XXUnitarity) {
    // R(u) R(-u) = sin(u0 + u) sin(u0 - u) I, an identity of the closed form.
    const cplx u(0.37, 0.12), u0 = 0.9;
    EXPECT_LT(max_abs_diff(r_xx(u, u0) * r_xx(-u, u0), Matrix::identity(4) * (std::sin(u0 + u) * std::sin(u0 - u))),
              1e-14);
}

TEST(Catalog, XXIsScaledPlusSolution) {
    Rng rng(41);
    for (int k = 0; k < 20; ++k) {
        const cplx u = rng.unit_box(), u0 = rng.uniform(0.2, 1.4);
        const Site a = xx_site(u, u0), b = xx_site(0.0, u0);
        FamilyParams p = family(FamilyId::PlusGeneral);
        p.funcs.f = FunctionHandle::exp_spectral(2.0 * I_UNIT);
        const RMatrix plus = build(p, a, b);
        EXPECT_LT(max_abs_diff(plus.m * std::sin(u + u0), r_xx(u, u0)), 1e-12);
    }
}

TEST(Catalog, PlusGeneralMatchesPrintedLayout) {
    Rng rng(42);
    for (int k = 0; k < 50; ++k) {
        const cplx x0 = rng.magnitude(0.3, 3.0), c0 = rng.magnitude(0.3, 3.0);
        Site a = random_site(rng, x0, c0), b = random_site(rng, x0, c0);
        FamilyParams p = family(FamilyId::PlusGeneral);
        p.funcs.f = FunctionHandle::exp_spectral(cplx(0.7, 0.2), 1.0, cplx(0.3, -0.1));
        const cplx F = p.funcs.f(a) / p.funcs.f(b);
        const Matrix shown = display_form(build(p, a, b).m);
        EXPECT_LT(max_abs_diff(shown / shown(0, 0), printed_plus(a, b, F)), 1e-12);
    }
}

TEST(Catalog, TwoParamMatchesClosedForm) {
    Rng rng(43);
    for (int k = 0; k < 30; ++k) {
        const cplx ui = rng.unit_box(), uj = rng.unit_box(), wi = rng.unit_box(), wj = rng.unit_box();
        const RMatrix r = build(family(FamilyId::CoshZeroTwoParam), two_param_site(ui, wi), two_param_site(uj, wj));
        EXPECT_LT(max_abs_diff(r.m, r_two_param(ui, uj, wi, wj)), 1e-10);
    }
    EXPECT_LT(max_abs_diff(r_two_param(0.4, 0.4, 0.1, 0.1), Matrix::identity(4)), 1e-15);
}

TEST(Catalog, CoshZeroConstIsTheConstantMatrix) {
    const Matrix expected(4, {-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
    const Site a{coshzero_params(0.5, 2.0), 0.0, 0.0}, b{coshzero_params(1.3, 0.7), 0.0, 0.0};
    EXPECT_LT(max_abs_diff(build(family(FamilyId::CoshZeroConst), a, b).m, expected), 1e-14);
}

TEST(Catalog, ZeroStarHomogeneousLimits) {
    Rng rng(44);
    for (int k = 0; k < 30; ++k) {
        const Site s = zero_site(rng);
        Site a = s;
        a.u = rng.unit_box() * 0.5;
        FamilyParams p1 = family(FamilyId::ZeroStar1);
        p1.branch = 1;
        p1.funcs.h = FunctionHandle::exp_spectral(2.0);
        const Matrix r1 = display_form(build(p1, a, s).m);
        EXPECT_LT(max_abs_diff(r1 / r1(1, 1), ising_star(a.u, s)), 1e-10);

        FamilyParams p2 = family(FamilyId::ZeroStar2);
        p2.branch = -1;
        p2.funcs.h = FunctionHandle::exp_spectral(2.0);
        const Matrix r2 = display_form(build(p2, a, s).m);
        EXPECT_LT(max_abs_diff(r2 / r2(1, 1), ising_star_star(a.u, s)), 1e-10);
    }
}

TEST(Catalog, IsingFamiliesMatchDisplays) {
    Rng rng(45);
    for (int k = 0; k < 20; ++k) {
        const Site s = zero_site(rng);
        Site a = s;
        a.u = rng.unit_box() * 0.5;
        const Matrix r1 = display_form(build(family(FamilyId::ZeroIsingStar), a, s).m);
        EXPECT_LT(max_abs_diff(r1 / r1(1, 1), ising_star(a.u, s)), 1e-10);
        const Matrix r2 = display_form(build(family(FamilyId::ZeroIsingStarStar), a, s).m);
        EXPECT_LT(max_abs_diff(r2 / r2(1, 1), ising_star_star(a.u, s)), 1e-10);
    }
}

TEST(Catalog, PlainAndBraidFormsRoundTrip) {
    Rng rng(46);
    const Site a = random_site(rng, 1.0, 1.0), b = random_site(rng, 1.0, 1.0);
    const RMatrix r = build(family(FamilyId::PlusGeneral), a, b);
    const RMatrix p = to_plain(r);
    EXPECT_EQ(p.form, Form::Plain);
    EXPECT_LT(max_abs_diff(p.m, swap4() * r.m), 1e-15);
    EXPECT_LT(max_abs_diff(to_braid(p).m, r.m), 1e-15);
}

TEST(Catalog, NormalizeAtCoincidingSites) {
    FamilyParams p = family(FamilyId::XXTrig);
    p.constants.u0 = 0.8;
    p.normalize = true;
    const RMatrix r = build(p, xx_site(0.0, 0.8), xx_site(0.0, 0.8));
    EXPECT_LT(max_abs_diff(r.m, Matrix::identity(4)), 1e-14);

    // The constant cosh(eps) = 0 solution is not proportional to I at coinciding sites.
    FamilyParams c = family(FamilyId::CoshZeroConst);
    c.normalize = true;
    const Site a{coshzero_params(0.5, 2.0), 0.0, 0.0}, b{coshzero_params(1.3, 0.7), 0.0, 0.0};
    try {
        build(c, a, b);
        FAIL() << "expected NotNormalizable";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotNormalizable);
    }
}

TEST(Catalog, WrongPairClassIsRejected) {
    Rng rng(48);
    const Site a = zero_site(rng), b = zero_site(rng);
    EXPECT_THROW(build(family(FamilyId::PlusGeneral), a, b), Error);
}

TEST(Catalog, InvalidBranchIsRejected) {
    Rng rng(49);
    const cplx x0 = 0.9;
    const Site a = random_site(rng, x0, 0.0), b = random_site(rng, x0, 0.0);
    FamilyParams p = family(FamilyId::ZeroStar1);
    p.branch = 0;
    EXPECT_THROW(build(p, a, b), Error);
}

TEST(Catalog, ZeroOverZeroIsABranchError) {
    // Equal h values make the ZeroStar1 numerator vanish; at a pole of the
    // denominator as well, the ratio is 0/0.
    EXPECT_THROW(detail::checked_div(0.0, 0.0, "test"), Error);
    try {
        detail::checked_div(0.0, 0.0, "test");
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Branch);
    }
    try {
        detail::checked_div(1.0, 0.0, "test");
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroDivision);
    }
}

TEST(Catalog, GaugeTransformPreservesYangBaxter) {
    Rng rng(50);
    for (auto id : {FamilyId::PlusGeneral, FamilyId::ZeroStar1, FamilyId::CoshZeroTwoParam}) {
        const Sample s = sample_family(id, rng, SamplerConfig{});
        const cplx f0 = rng.magnitude(0.5, 2.0);
        const std::array<cplx, 3> f1{rng.magnitude(0.5, 2.0), rng.magnitude(0.5, 2.0), rng.magnitude(0.5, 2.0)};
        const TripleMatrices t = build_triple(s);
        const RMatrix g12 = gauge_transform(t.r12, f0, f1[0], f1[1]);
        const RMatrix g13 = gauge_transform(t.r13, f0, f1[0], f1[2]);
        const RMatrix g23 = gauge_transform(t.r23, f0, f1[1], f1[2]);
        EXPECT_LT(ybe_residual(g12, g13, g23), 1e-9) << to_string(id);
    }
    EXPECT_THROW(gauge_transform(RMatrix{}, 0.0, 1.0, 1.0), Error);
}

// The sign-branch pairs of the families that take an explicit branch: the
// shift eps -> eps + i pi on both sites, with the arbitrary functions held
// fixed, maps branch +1 to branch -1 together with (g, h) -> -(g, h) for the
// families listed as related below (weights compared up to a common factor).
// For the others the two branches are not related by this map.
TEST(Catalog, ShiftMapBranchPairs) {
    enum class Relation { Related, NotRelated };
    const std::vector<std::pair<FamilyId, Relation>> table = {
        {FamilyId::ZeroF0, Relation::NotRelated},
        {FamilyId::ZeroStar1, Relation::Related},
        {FamilyId::ZeroStar2, Relation::Related},
        {FamilyId::ZeroGeneral_HbarZero, Relation::NotRelated},
        {FamilyId::ZeroGeneral_G0Zero, Relation::Related},
        {FamilyId::ZeroGeneral_G0Nonzero, Relation::Related},
        {FamilyId::ZeroSpecial_3, Relation::Related},
        {FamilyId::ZeroSpecial_4, Relation::NotRelated},
        {FamilyId::ZeroSpecial_5, Relation::NotRelated},
        {FamilyId::ZeroSpecial_6, Relation::Related},
        {FamilyId::ZeroDoubleStar_Tanh, Relation::Related},
        {FamilyId::ZeroTripleStar_2, Relation::Related},
        {FamilyId::ZeroTripleStar_3, Relation::Related},
        {FamilyId::ZeroPmmFamily_2, Relation::Related},
        {FamilyId::ZeroPmmFamily_3, Relation::Related},
    };
    int branch_families = 0;
    for (auto id : all_families()) branch_families += describe(id).has_branch ? 1 : 0;
    EXPECT_EQ(static_cast<int>(table.size()), branch_families);

    // Projective distance between weight vectors (pp, f, g, h) * scale.
    using Weights = std::array<cplx, 4>;
    auto weights = [](const CoefficientSet& c, double gh_sign) {
        return Weights{c.pp * c.scale, c.f * c.scale, gh_sign * c.g * c.scale, gh_sign * c.h * c.scale};
    };
    auto distance = [](const Weights& a, const Weights& b) {
        std::size_t k = 0;
        for (std::size_t i = 1; i < 4; ++i)
            if (std::abs(a[i]) > std::abs(a[k])) k = i;
        if (std::abs(b[k]) == 0.0) return 1.0;
        double d = 0.0;
        for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a[i] / a[k] - b[i] / b[k]));
        return d;
    };
    for (const auto& [id, expected] : table) {
        double worst_flip = 0.0, worst_same = 0.0;
        for (int k = 0; k < 30; ++k) {
            Rng rng = Rng::for_sample(11, static_cast<std::uint64_t>(k));
            SamplerConfig cfg;
            cfg.branch = 1;
            const Sample s = sample_family(id, rng, cfg);
            FamilyParams plus = s.params;
            plus.funcs.f = FunctionHandle::exp_spectral(0.7, 1.3);
            plus.funcs.g = FunctionHandle::exp_spectral(-0.4, 0.6);
            plus.funcs.h = FunctionHandle::exp_spectral(0.9, -1.1);
            FamilyParams minus = plus;
            minus.branch = -1;
            Site a = s.sites[0], b = s.sites[1];
            const CoefficientSet c1 = build_coefficients(plus, a, b);
            a.p.epsilon += cplx(0.0, std::numbers::pi);
            b.p.epsilon += cplx(0.0, std::numbers::pi);
            const CoefficientSet c2 = build_coefficients(minus, a, b);
            worst_flip = std::max(worst_flip, distance(weights(c1, 1.0), weights(c2, -1.0)));
            worst_same = std::max(worst_same, distance(weights(c1, 1.0), weights(c2, 1.0)));
        }
        const bool related = worst_flip < 1e-10;
        std::printf("  %-24s shifted-and-flipped %.1e  shifted %.1e\n", to_string(id), worst_flip, worst_same);
        switch (expected) {
            case Relation::Related: EXPECT_TRUE(related) << to_string(id); break;
            case Relation::NotRelated: EXPECT_FALSE(related) << to_string(id); break;
        }
    }
}
