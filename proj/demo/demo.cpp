// Small tour: build the XX R-matrix, check Yang-Baxter on a random triple,
// and read off the spin-chain Hamiltonian.

#include <cstdio>

#include <qybe/chains.hpp>
#include <qybe/verify.hpp>

int main() {
    using namespace qybe;
    const double u0 = 0.8;

    FamilyParams xx;
    xx.family = FamilyId::XXTrig;
    xx.constants.u0 = u0;
    const RMatrix r = build(xx, xx_site(0.35, u0), xx_site(0.0, u0));
    std::printf("XX R-matrix at u = 0.35 (braid form):\n");
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) std::printf("  %+.4f%+.4fi", r.m(i, j).real(), r.m(i, j).imag());
        std::printf("\n");
    }

    Rng rng(2024);
    const Sample s = sample_family(FamilyId::PlusGeneral, rng, SamplerConfig{});
    const TripleMatrices t = build_triple(s);
    std::printf("\nPlusGeneral random triple: YBE residual %.2e, intertwining %.2e\n",
                ybe_residual(t.r12, t.r13, t.r23), intertwining_residual(t.r12));

    const PauliDecomposition h = hamiltonian_density(xx, xx_site(0.0, u0));
    std::printf("\nXX Hamiltonian density (u0 = %.2f):\n", u0);
    const auto v = h.values();
    for (std::size_t k = 0; k < v.size(); ++k)
        std::printf("  %-8s %+.6f%+.6fi\n", PauliDecomposition::names[k], v[k].real(), v[k].imag());

    ScanConfig cfg;
    cfg.samples = 50;
    const VerificationReport rep = scan_family(FamilyId::ZeroIsingStar, cfg);
    std::printf("\nZeroIsingStar scan over %d triples: %s (max YBE residual %.2e)\n", rep.samples,
                rep.pass ? "pass" : "FAIL", rep.ybe.max);
    return rep.pass ? 0 : 1;
}
