#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "teich/errors.hpp"
#include "teich/numeric.hpp"

#include <cmath>

using namespace teich;

TEST_CASE("hyperbolic densities and domain checks") {
    CHECK(rho_disk(0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(rho_disk(cplx(0.5, 0.0)) == doctest::Approx(2.0 / 0.75).epsilon(1e-15));
    CHECK(rho_ext(cplx(2.0, 0.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(rho_half(cplx(1.0, 2.0)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(rho_disk(cplx(1.5, 0.0)), DomainError);
    CHECK_THROWS_AS(rho_ext(cplx(0.5, 0.0)), DomainError);
    CHECK_THROWS_AS(rho_half(cplx(0.0, -1.0)), DomainError);
}

TEST_CASE("gauss-legendre on [0,1] integrates polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre_01(8, x, w);
    REQUIRE(x.size() == 8);
    double total = 0.0;
    for (double wi : w) total += wi;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k <= 15; ++k) { // degree < 2n is exact
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
        CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-12));
    }
}

TEST_CASE("fit_slope recovers a line") {
    std::vector<double> x{0.0, 1.0, 2.0, 3.0}, y;
    for (double xi : x) y.push_back(4.0 - 2.5 * xi);
    CHECK(fit_slope(x, y) == doctest::Approx(-2.5).epsilon(1e-13));
}

TEST_CASE("nelder-mead polishes a smooth maximum") {
    cplx z_star(0.3, -0.7);
    auto h = [&](cplx z) { return 5.0 - abs2(z - z_star); };
    double v = nelder_mead_max(h, cplx(0.1, -0.5), 0.2);
    CHECK(v == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("fnv1a matches reference vectors") {
    CHECK(fnv1a("") == 14695981039346656037ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("hexfloat is bit exact") {
    for (double v : {0.1, -3.5, 1e-300, 2.0 / 3.0}) {
        CHECK(std::stod(hexfloat(v)) == v);
    }
}

TEST_CASE("monotone cubic interpolates without overshoot") {
    std::vector<double> x{0.0, 0.25, 0.5, 1.0};
    std::vector<double> y{0.0, 0.1, 0.8, 1.0};
    MonotoneCubic f(x, y);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(f(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
    double prev = f(0.0);
    for (int i = 1; i <= 400; ++i) {
        double t = i / 400.0;
        double v = f(t);
        CHECK(v >= prev - 1e-12); // monotone
        prev = v;
        CHECK(f.derivative(t) >= -1e-12);
    }
}
