#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "teich/errors.hpp"
#include "teich/fields.hpp"

#include <cmath>

using namespace teich;

namespace {
LaurentSeries pure_term(int k, cplx c) {
    LaurentSeries s;
    s.k0 = k;
    s.c = {c};
    return s;
}
} // namespace

TEST_CASE("cell weights sum to the truncated disk area") {
    for (auto g : {DiskGrid::standard(), DiskGrid::coarse()}) {
        double s = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) s += g->weight(i);
        CHECK(s == doctest::Approx(g->truncated_area()).epsilon(1e-12));
        CHECK(g->truncated_area() < pi);
    }
}

TEST_CASE("laurent series eval, derivative, truncation") {
    LaurentSeries s; // 2/z^4 - 3i/z^6
    s.k0 = 4;
    s.c = {cplx(2.0, 0.0), 0.0, cplx(0.0, -3.0)};
    cplx z(1.3, -0.4);
    cplx want = 2.0 / std::pow(z, 4) - cplx(0, 3) / std::pow(z, 6);
    CHECK(std::abs(s.eval(z) - want) < 1e-14);
    LaurentSeries d = s.derivative();
    cplx dwant = -8.0 / std::pow(z, 5) + cplx(0, 18) / std::pow(z, 7);
    CHECK(std::abs(d.eval(z) - dwant) < 1e-13);
    LaurentSeries t = s.truncated(1e-12);
    CHECK(t.k0 == 4);
    CHECK(t.c.size() == 3);
    CHECK(std::abs(s.coeff(6) - cplx(0.0, -3.0)) < 1e-15);
    CHECK(std::abs(s.coeff(5)) == 0.0);
}

TEST_CASE("quartic kernel against the closed form, disk side") {
    auto g = DiskGrid::standard();
    for (double zr : {2.0, 1.5, 1.1}) {
        cplx zeta(zr, 0.0);
        double want = (pi / 4.0) * sq(rho_ext(zeta));
        KernelIntegral got = quartic_kernel_disk(*g, zeta);
        CHECK(std::abs(got.value - want) / want < 1e-3);
    }
    CHECK(std::abs(quartic_kernel_disk(*g, cplx(2.0, 0.0)).value - pi / 9.0) / (pi / 9.0) < 1e-3);
    CHECK_THROWS_AS(quartic_kernel_disk(*g, cplx(0.5, 0.0)), DomainError);
}

TEST_CASE("quartic kernel against the closed form, exterior side") {
    auto g = DiskGrid::standard();
    for (cplx zeta : {cplx(0.0, 0.0), cplx(0.4, 0.3)}) {
        double want = (pi / 4.0) * sq(rho_disk(zeta));
        KernelIntegral got = quartic_kernel_exterior(*g, zeta);
        CHECK(std::abs(got.value - want) / want < 1e-3);
    }
    CHECK(std::abs(quartic_kernel_exterior(*g, 0.0).value - pi) / pi < 1e-3);
    CHECK_THROWS_AS(quartic_kernel_exterior(*g, cplx(1.5, 0.0)), DomainError);
}

TEST_CASE("disk integral of a smooth profile") {
    auto g = DiskGrid::standard();
    // centroid nodes integrate 1 - |z|^2 exactly per cell; only the cutoff
    // annulus (area ~ 2^-13, integrand ~ 2^-13 there) is missing
    cplx got = disk_integral(*g, [](cplx z) { return cplx(1.0 - abs2(z), 0.0); });
    CHECK(std::abs(got - cplx(pi / 2.0, 0.0)) < 1e-7);
}

TEST_CASE("compact-support L2 norm matches the hyperbolic area closed form") {
    auto g = DiskGrid::standard();
    auto mu = BeltramiField::from_function(
        g, [](cplx z) { return abs2(z) <= 0.25 ? cplx(0.3, 0.0) : cplx(0.0, 0.0); });
    // hyperbolic area of |z| <= 1/2 is 4*pi/3
    double want = 0.3 * std::sqrt(4.0 * pi / 3.0);
    NormReport r = beltrami_lp(mu, 2.0);
    CHECK(r.kind == "beltrami_lp");
    CHECK_FALSE(r.diverging);
    CHECK(std::abs(r.value - want) / want < 2e-3);
}

TEST_CASE("boundary-envelope L2 norm needs the octave tail estimate") {
    auto g = DiskGrid::standard();
    auto mu = BeltramiField::from_function(
        g, [](cplx z) { return cplx(0.4 * std::pow(1.0 - abs2(z), 0.75), 0.0); });
    double want = std::sqrt(1.28 * pi); // 0.16 * integral (1-r^2)^{-1/2} dA
    NormReport r = beltrami_lp(mu, 2.0);
    CHECK_FALSE(r.diverging);
    CHECK(std::abs(r.value - want) / want < 1.2e-2);
    CHECK(std::abs(r.value + r.tail_estimate - want) / want < 3e-3);
}

TEST_CASE("weighted beltrami sup: polish, exact plateau, divergence flag") {
    auto g = DiskGrid::standard();
    auto mu = BeltramiField::from_function(
        g, [](cplx z) { return cplx(0.3 * (1.0 - abs2(z)), 0.0); });
    NormReport plain = beltrami_sup_weighted(mu, 0.0);
    CHECK(std::abs(plain.value - 0.3) < 1e-8); // interior max at 0, polished
    NormReport weighted = beltrami_sup_weighted(mu, 1.0);
    CHECK(weighted.value == doctest::Approx(0.6).epsilon(1e-12)); // rho * |mu| constant
    CHECK_FALSE(weighted.diverging);

    auto flat = BeltramiField::from_function(g, [](cplx) { return cplx(0.5, 0.0); });
    NormReport bad = beltrami_sup_weighted(flat, 0.5);
    CHECK(bad.diverging);
}

TEST_CASE("exterior L2 of z^-4 equals sqrt(pi/12)") {
    auto g = DiskGrid::standard();
    auto phi = HolomorphicField::from_series(g, pure_term(4, 1.0));
    NormReport r = exterior_lp(phi, 2.0);
    CHECK_FALSE(r.diverging);
    double want = std::sqrt(pi / 12.0);
    CHECK(std::abs(r.value + r.tail_estimate - want) / want < 2e-3);
}

TEST_CASE("nehari sup of z^-4 is exactly 1/4 via the infinity candidate") {
    auto g = DiskGrid::standard();
    auto phi = HolomorphicField::from_series(g, pure_term(4, 1.0));
    NormReport r = exterior_sup_weighted(phi, -2.0);
    CHECK_FALSE(r.diverging);
    CHECK(r.value == doctest::Approx(0.25).epsilon(1e-12));

    // z^-3 grows under the weight, z^-5 decays to zero at infinity
    NormReport up = exterior_sup_weighted(HolomorphicField::from_series(g, pure_term(3, 1.0)), -2.0);
    CHECK(up.diverging);
    NormReport down = exterior_sup_weighted(HolomorphicField::from_series(g, pure_term(5, 1.0)), -2.0);
    CHECK_FALSE(down.diverging);
    CHECK(down.value < 0.35);
    CHECK(down.value > 0.0);
}

TEST_CASE("decay exponent fit") {
    auto g = DiskGrid::standard();
    auto synthetic = HolomorphicField::from_function(
        g, [](cplx z) { return cplx(std::pow(2.0 / (abs2(z) - 1.0), 2.0 - 0.6), 0.0); });
    double a = decay_exponent_fit(synthetic);
    CHECK(a == doctest::Approx(0.6).epsilon(0.04));

    auto pole4 = HolomorphicField::from_series(g, pure_term(4, 1.0));
    CHECK(decay_exponent_fit(pole4) >= 1.95); // capped at the weight ceiling

    auto zero = HolomorphicField::from_series(g, LaurentSeries{});
    CHECK(std::isinf(decay_exponent_fit(zero)));
}

TEST_CASE("cauchy-riemann residual separates holomorphic from not") {
    auto g = DiskGrid::standard();
    auto holo = HolomorphicField::from_function(
        g, [](cplx z) { return 1.0 / std::pow(z, 4) + 3.0 / std::pow(z, 6); });
    CHECK(cr_residual(holo) < 1e-6);
    auto anti = HolomorphicField::from_function(
        g, [](cplx z) { return 1.0 / std::pow(std::conj(z), 4); });
    CHECK(cr_residual(anti) > 1e-2);
}

TEST_CASE("beltrami field validation and interpolation") {
    auto g = DiskGrid::coarse();
    CHECK_THROWS_AS(BeltramiField::from_function(g, [](cplx) { return cplx(1.0, 0.0); }),
                    ValidationError);
    auto mu = BeltramiField::from_function(
        g, [](cplx z) { return 0.4 * z; });
    auto interp = BeltramiField::from_samples(g, mu.samples());
    cplx p(0.31, -0.22);
    CHECK(std::abs(interp.eval(p) - mu.eval(p)) < 2e-3);
    CHECK_THROWS_AS(interp.eval(cplx(1.2, 0.0)), DomainError);
    CHECK(mu.scaled(0.5).sup_abs() == doctest::Approx(0.5 * mu.sup_abs()).epsilon(1e-14));
}
