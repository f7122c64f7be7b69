#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "teich/circle_maps.hpp"
#include "teich/errors.hpp"

#include <cmath>

using namespace teich;

TEST_CASE("rotations: trivial quotient, zero cocycle, exact inverse") {
    CircleMapLift r = CircleMapLift::rotation(0.37);
    CHECK(qs_quotient(r, 256, 10) == doctest::Approx(1.0).epsilon(1e-13));
    LiouvilleReport rep = liouville_norm(r, 128);
    CHECK(rep.value == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(r.inverse(r(0.218)) == doctest::Approx(0.218).epsilon(1e-10));
    CHECK(r(1.4) == doctest::Approx(r(0.4) + 1.0).epsilon(1e-14));
}

TEST_CASE("piecewise linear: quotient equals the slope ratio") {
    CircleMapLift g = CircleMapLift::piecewise_linear({0.0, 0.5}, {0.0, 0.4});
    CHECK(qs_quotient(g, 1024, 12) == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(g(0.25) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(g(0.75) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(g(-0.25) == doctest::Approx(-0.3).epsilon(1e-12));
    CHECK(g.derivative(0.25) == doctest::Approx(0.8));
    CHECK(g.derivative(0.75) == doctest::Approx(1.2));
    CHECK(g.inverse(g(0.61)) == doctest::Approx(0.61).epsilon(1e-10));
    CHECK_THROWS_AS(CircleMapLift::piecewise_linear({0.1, 0.5}, {0.0, 0.4}),
                    PreconditionError);
    CHECK_THROWS_AS(CircleMapLift::piecewise_linear({0.0, 0.5}, {0.0, 1.2}),
                    PreconditionError);
}

TEST_CASE("moebius boundary lift matches the circle action and kills the cocycle") {
    MobiusMap m = MobiusMap::disk_automorphism(cplx(0.4, 0.0), 1.1);
    CircleMapLift g = CircleMapLift::mobius_boundary(m);
    for (int i = 0; i < 16; ++i) {
        double x = i / 16.0;
        cplx want = m.apply(cis(2.0 * pi * x));
        CHECK(std::abs(cis(2.0 * pi * g(x)) - want) < 1e-12);
        double h = 1e-6;
        CHECK(g.derivative(x) == doctest::Approx((g(x + h) - g(x - h)) / (2 * h)).epsilon(1e-7));
        CHECK(g.derivative(x) > 0.0);
    }
    CHECK(g(1.25) == doctest::Approx(g(0.25) + 1.0).epsilon(1e-13));
    LiouvilleReport rep = liouville_norm(g, 256);
    CHECK(rep.value < 1e-9); // exact cross-ratio identity for Moebius maps
    CHECK(qs_quotient(g, 256, 10) > 1.0);
    CHECK_THROWS_AS(CircleMapLift::mobius_boundary(
                        MobiusMap::from_coeffs(1.0, 0.0, 1.0, 1.0)),
                    PreconditionError);
}

TEST_CASE("sine family: cocycle is resolution stable and rotation invariant") {
    CircleMapLift g = CircleMapLift::sine_family(0.05);
    double v256 = liouville_norm(g, 256).value;
    double v512 = liouville_norm(g, 512).value;
    CHECK(v512 > 0.0);
    CHECK(std::abs(v256 - v512) / v512 < 0.05);

    // precomposition with a rotation preserves the norm (measure invariance)
    CircleMapLift comp = CircleMapLift::compose(g, CircleMapLift::rotation(0.3));
    double vc = liouville_norm(comp, 512).value;
    CHECK(std::abs(vc - v512) / v512 < 1e-3);
}

TEST_CASE("symmetry profile of a smooth map decays with the scale") {
    CircleMapLift g = CircleMapLift::sine_family(0.05);
    auto prof = symmetry_profile(g, 512, 12);
    REQUIRE(prof.size() == 12);
    CHECK(prof.front().second > prof.back().second);
    CHECK(prof.back().second < 1e-3);
}

TEST_CASE("holder seminorm of the sine derivative") {
    CircleMapLift g = CircleMapLift::sine_family(0.05);
    double s = holder_seminorm(g, 1.0, 2048);
    CHECK(s > 0.2);        // sup |g''| = 2 pi * 0.05 ~ 0.314
    CHECK(s < 0.35);
}

TEST_CASE("tabulated monotone map keeps monotonicity and inverts") {
    std::vector<double> xs, ys;
    int m = 32;
    CircleMapLift ref = CircleMapLift::sine_family(0.2, 0.05);
    for (int i = 0; i < m; ++i) {
        double x = double(i) / m;
        xs.push_back(x);
        ys.push_back(ref(x));
    }
    CircleMapLift g = CircleMapLift::from_samples(xs, ys);
    double prev = g(0.0);
    for (int i = 1; i <= 200; ++i) {
        double v = g(i / 200.0);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    CHECK(g.inverse(g(0.33)) == doctest::Approx(0.33).epsilon(1e-9));
    CHECK(std::abs(g(0.5) - ref(0.5)) < 1e-3);
}
