#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "teich/errors.hpp"
#include "teich/moebius.hpp"

#include <cmath>

using namespace teich;

TEST_CASE("group operations: inverse, composition, normalization") {
    MobiusMap g1 = MobiusMap::from_coeffs(cplx(2, 1), cplx(0, -3), cplx(1, 0), cplx(1, 1));
    MobiusMap g2 = MobiusMap::from_coeffs(cplx(0, 2), cplx(1, 1), cplx(-1, 0), cplx(3, 0));
    CHECK(g1.compose(g1.inverse()).almost_equal(MobiusMap::identity(), 1e-12));
    CHECK(g1.inverse().compose(g1).almost_equal(MobiusMap::identity(), 1e-12));
    for (cplx z : {cplx(0.3, 0.4), cplx(-2.0, 1.0), cplx(0.0, -5.0)}) {
        cplx lhs = g1.compose(g2).apply(z);
        cplx rhs = g1.apply(g2.apply(z));
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
    // det normalization: scaling all coefficients leaves the map unchanged
    MobiusMap g3 = MobiusMap::from_coeffs(cplx(-4, -2), cplx(0, 6), cplx(-2, 0), cplx(-2, -2));
    CHECK(g1.almost_equal(g3, 1e-12));
}

TEST_CASE("su11 maps preserve the circle and both sides") {
    MobiusMap g = MobiusMap::disk_automorphism(cplx(0.3, 0.2), 0.9);
    for (int k = 0; k < 12; ++k) {
        cplx z = cis(2.0 * pi * k / 12.0);
        CHECK(std::abs(std::abs(g.apply(z)) - 1.0) < 1e-12);
    }
    CHECK(std::abs(g.apply(cplx(0.5, 0.1))) < 1.0);
    CHECK(std::abs(g.apply(cplx(2.0, 0.5))) > 1.0);
    CHECK(std::abs(g.apply(cplx(0.3, 0.2))) < 1e-12);
    CHECK_THROWS_AS(MobiusMap::su11(cplx(1.0, 0.0), cplx(0.5, 0.0)), PreconditionError);
}

TEST_CASE("classification with multiplier and fixed points") {
    MobiusClass rot = classify(MobiusMap::rotation(0.7));
    CHECK(rot.kind == MobiusClass::elliptic);
    CHECK(std::abs(rot.multiplier - cis(-0.7)) < 1e-10); // either e^{i 0.7} branch
    MobiusClass sc = classify(MobiusMap::halfplane_scaling(0.25));
    CHECK(sc.kind == MobiusClass::hyperbolic);
    CHECK(std::abs(sc.multiplier - 0.25) < 1e-12);
    CHECK(std::abs(sc.fixed_attract) < 1e-12); // 0 attracts for lambda < 1
    CHECK(std::isinf(sc.fixed_repel.real()));

    cplx at = cis(0.3), re = cis(2.1);
    MobiusMap g = MobiusMap::hyperbolic_fixing(at, re, 0.25);
    MobiusClass cls = classify(g);
    CHECK(cls.kind == MobiusClass::hyperbolic);
    CHECK(std::abs(cls.multiplier - 0.25) < 1e-10);
    CHECK(std::abs(cls.fixed_attract - at) < 1e-8);
    CHECK(std::abs(cls.fixed_repel - re) < 1e-8);
    CHECK(std::abs(g.apply(at) - at) < 1e-10);
    CHECK(std::abs(g.derivative(at)) == doctest::Approx(0.25).epsilon(1e-10));

    MobiusClass par = classify(MobiusMap::from_coeffs(1.0, 0.0, 1.0, 1.0));
    CHECK(par.kind == MobiusClass::parabolic);
    CHECK(std::abs(par.fixed_attract) < 1e-12);

    CHECK(classify(MobiusMap::identity()).kind == MobiusClass::identity);
}

TEST_CASE("exterior normalizer conjugates to the scaling normal form") {
    MobiusMap g = MobiusMap::hyperbolic_fixing(cis(0.3), cis(2.1), 0.25);
    MobiusClass cls = classify(g);
    MobiusMap h = exterior_normalizer(g, cls);
    MobiusMap normal = h.compose(g).compose(h.inverse());
    CHECK(normal.almost_equal(MobiusMap::halfplane_scaling(0.25), 1e-8));
    CHECK(std::abs(h.apply(cls.fixed_attract)) < 1e-10);
    for (cplx z : {cplx(2.0, 0.0), cplx(0.0, -3.0), cplx(-1.4, 1.1), cplx(5.0, 5.0)}) {
        CHECK(h.apply(z).imag() > 0.0); // exterior lands in the upper half-plane
    }
    for (int k = 0; k < 8; ++k) {
        CHECK(std::abs(h.apply(cis(2.0 * pi * k / 8.0)).imag()) < 1e-9);
    }
}

TEST_CASE("pullback is an isometry for the weighted sup norm") {
    auto grid = DiskGrid::standard();
    LaurentSeries s;
    s.k0 = 4;
    s.c = {cplx(1.0, 0.0)};
    auto phi = HolomorphicField::from_series(grid, s);
    double n0 = exterior_sup_weighted(phi, -2.0).value;
    CHECK(n0 == doctest::Approx(0.25).epsilon(1e-12));

    MobiusMap g = MobiusMap::disk_automorphism(cplx(0.3, 0.2), 0.9);
    auto pulled = pullback(phi, g);
    double n1 = exterior_sup_weighted(pulled, -2.0).value;
    CHECK(std::abs(n1 - n0) < 1e-8);

    // second map with the sup landing at a different pole
    MobiusMap g2 = MobiusMap::disk_automorphism(cplx(-0.5, 0.1), -1.3);
    double n2 = exterior_sup_weighted(pullback(phi, g2), -2.0).value;
    CHECK(std::abs(n2 - n0) < 1e-8);
}

TEST_CASE("density dispatch") {
    CHECK(hyperbolic_density(cplx(0.0, 0.0), Domain::disk) == doctest::Approx(2.0));
    CHECK(hyperbolic_density(cplx(2.0, 0.0), Domain::exterior) == doctest::Approx(2.0 / 3.0));
    CHECK(hyperbolic_density(cplx(0.0, 4.0), Domain::halfplane) == doctest::Approx(0.25));
}
