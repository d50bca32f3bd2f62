#include <gtest/gtest.h>

#include <qybe/json_io.hpp>

#include "test_support.hpp"

using namespace qybe;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Construction;
}

}  // namespace

TEST(Json, ComplexNumbersAreReImPairs) {
    EXPECT_EQ(to_json(cplx(1.5, -2.0)), json::parse("[1.5, -2.0]"));
    EXPECT_EQ(complex_from_json(json::parse("[0.25, 3]")), cplx(0.25, 3.0));
    EXPECT_EQ(complex_from_json(json(2.0)), cplx(2.0, 0.0));
    EXPECT_EQ(kind_of([] { complex_from_json(json::parse("\"1+2i\"")); }), ErrorKind::Schema);
    EXPECT_EQ(kind_of([] { complex_from_json(json::parse("[1, 2, 3]")); }), ErrorKind::Schema);
}

TEST(Json, MatrixRoundTripIsExact) {
    Rng rng(70);
    const Matrix m = qybe::testing::random_matrix(rng, 4);
    const json j = to_json(m);
    EXPECT_EQ(j.at("dim"), 4);
    EXPECT_EQ(matrix_from_json(json::parse(j.dump())), m);
    EXPECT_EQ(kind_of([] { matrix_from_json(json::parse(R"({"dim": 2, "entries": [[1, 2]]})")); }), ErrorKind::Schema);
}

TEST(Json, SiteRoundTrip) {
    Site s;
    s.p.epsilon = cplx(0.1, 0.2);
    s.p.x_aut = cplx(1.3, 0.0);
    s.p.casimir_sign = -1;
    s.u = cplx(0.4, -0.1);
    EXPECT_EQ(site_from_json(to_json(s), "s"), s);
    const Site pinned = two_param_site(0.2, 0.5);
    EXPECT_EQ(site_from_json(json::parse(to_json(pinned).dump()), "s"), pinned);
    EXPECT_EQ(kind_of([] { site_from_json(json::parse(R"({"epsilon": 0.1, "bogus": 1})"), "s"); }), ErrorKind::Schema);
    EXPECT_EQ(kind_of([] { site_from_json(json::parse(R"({"casimir_sign": 2})"), "s"); }), ErrorKind::Schema);
    EXPECT_EQ(kind_of([] { site_from_json(json::parse(R"({"x": 1.0})"), "s"); }), ErrorKind::Schema);
}

TEST(Json, FunctionHandles) {
    const auto f = FunctionHandle::exp_spectral(cplx(0.5, 0.1), 2.0, cplx(0.0, 0.3));
    const FunctionHandle g = function_from_json(to_json(f), "f");
    Site s;
    s.u = cplx(0.3, 0.2);
    s.p.epsilon = cplx(0.1, -0.4);
    EXPECT_EQ(f(s), g(s));
    EXPECT_EQ(function_from_json(json(3.0), "f")(s), cplx(3.0));
    EXPECT_EQ(kind_of([] { to_json(FunctionHandle::custom([](cplx, cplx, cplx) { return cplx(1.0); })); }),
              ErrorKind::Schema);
    EXPECT_EQ(kind_of([] { function_from_json(json::parse(R"({"preset": "Nope"})"), "f"); }), ErrorKind::Schema);
}

TEST(Json, ShortFormsFollowTheFamilySchema) {
    const BuildRequest xx = request_from_json(json::parse(R"({"family": "XXTrig", "u": 0.3, "u0": 0.8})"));
    EXPECT_EQ(xx.params.family, FamilyId::XXTrig);
    EXPECT_EQ(xx.params.constants.u0, cplx(0.8));
    EXPECT_EQ(xx.si.u, cplx(0.3));

    const BuildRequest tp = request_from_json(
        json::parse(R"({"u_i": 0.1, "u_j": 0.2, "w_i": 0.3, "w_j": [0.4, 0.1]})"), FamilyId::CoshZeroTwoParam);
    EXPECT_EQ(tp.sj.w, cplx(0.4, 0.1));

    EXPECT_EQ(kind_of([] { request_from_json(json::parse(R"({"family": "XXTrig", "u": 0.3})")); }), ErrorKind::Schema);
    EXPECT_EQ(kind_of([] { request_from_json(json::parse(R"({"family": "PlusGeneral"})")); }), ErrorKind::Schema);
    EXPECT_EQ(kind_of([] { request_from_json(json::parse(R"({"family": "Nope"})")); }), ErrorKind::Schema);
    EXPECT_EQ(kind_of([] { request_from_json(json::parse(R"({"family": "XXTrig", "u": 0, "u0": 1, "typo": 1})")); }),
              ErrorKind::Schema);
    EXPECT_EQ(kind_of([] {
                  request_from_json(json::parse(R"({"family": "XXTrig", "u": 0, "u0": 1})"), FamilyId::PlusGeneral);
              }),
              ErrorKind::Schema);
}

TEST(Json, BuildOutputRoundTrip) {
    Rng rng(71);
    for (auto id : all_families()) {
        const Sample s = sample_family(id, rng, SamplerConfig{});
        const BuildRequest req{s.params, s.sites[0], s.sites[1]};
        const json out = build_output(req, build(req.params, req.si, req.sj));
        const BuildRequest again = request_from_json(json::parse(out.dump()));
        const json out2 = build_output(again, build(again.params, again.si, again.sj));
        EXPECT_EQ(out.dump(), out2.dump()) << to_string(id);
        EXPECT_EQ(matrix_from_json(out.at("matrix")), matrix_from_json(out2.at("matrix"))) << to_string(id);
    }
}

TEST(Json, SampleRoundTrip) {
    Rng rng(72);
    const Sample s = sample_family(FamilyId::MinusPair, rng, SamplerConfig{});
    const Sample back = sample_from_json(json::parse(to_json(s).dump()));
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(back.sites[k], s.sites[k]);
    EXPECT_EQ(kind_of([] { sample_from_json(json::parse(R"({"family": "PlusGeneral", "sites": [{}, {}]})")); }),
              ErrorKind::Schema);
}

TEST(Json, ReportSchemaAndDeterminism) {
    ScanConfig cfg;
    cfg.samples = 10;
    cfg.seed = 5;
    const json a = to_json(scan_family(FamilyId::ZeroTripleStar_1, cfg));
    for (const char* key : {"family", "seed", "samples", "tol", "residuals", "failures", "pass"})
        EXPECT_TRUE(a.contains(key)) << key;
    for (const char* key : {"intertwining", "ybe", "free_fermion"}) {
        EXPECT_TRUE(a.at("residuals").at(key).contains("max")) << key;
        EXPECT_TRUE(a.at("residuals").at(key).contains("mean")) << key;
    }
    cfg.threads = 4;
    const json b = to_json(scan_family(FamilyId::ZeroTripleStar_1, cfg));
    EXPECT_EQ(a.dump(), b.dump());
}

TEST(Json, PauliOutputFlagsFreeFermion) {
    PauliDecomposition d;
    d.pm = 1.0;
    d.mp = 1.0;
    const json j = to_json(d);
    EXPECT_TRUE(j.at("free_fermion").get<bool>());
    EXPECT_EQ(j.at("coefficients").size(), 8u);
    d.szsz = 0.5;
    EXPECT_FALSE(to_json(d).at("free_fermion").get<bool>());
}
