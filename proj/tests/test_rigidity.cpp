#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "teich/rigidity.hpp"
#include "teich/errors.hpp"

#include "json.hpp"

#include <cmath>

using namespace teich;

namespace {

// gamma fixing +-1 with multiplier 1/4; exterior orbits march toward +1
MobiusMap fixture_map() { return MobiusMap::hyperbolic_fixing(1.0, -1.0, 0.25); }

// psi = gamma* phi0 - phi0 with phi0 = z^-4, so the attracting orbit sum
// must recover phi0 up to an invariant field
HolomorphicField coboundary_psi(const std::shared_ptr<const DiskGrid>& g, const MobiusMap& gam) {
    return HolomorphicField::from_function(g, [gam](cplx z) {
        auto p0 = [](cplx u) { return 1.0 / (u * u * u * u); };
        cplx w = gam.apply(z);
        cplx d = gam.derivative(z);
        return p0(w) * d * d - p0(z);
    });
}

HolomorphicField zero_field(const std::shared_ptr<const DiskGrid>& g) {
    return HolomorphicField::from_function(g, [](cplx) { return cplx(0.0); });
}

// hyperbolic powers in normal form; iterated compose loses the determinant
// to cancellation long before these exponents
cplx powmap(cplx at, cplx re, double li, cplx z) {
    cplx u = li * (z - at) / (z - re);
    if (std::abs(u) > 1e8) return (re - at / u) / (1.0 - 1.0 / u);
    return (re * u - at) / (u - 1.0);
}
cplx powderiv(cplx re, double li, cplx z, cplx w) {
    cplx q = (w - re) / (z - re);
    return li * q * q;
}

// rel_tol just above 2^-N forces truncation at exactly N for lam^alpha = 1/2
double tol_for(int N) { return std::pow(2.0, -double(N)) * 1.0000001; }

} // namespace

TEST_CASE("orbit series hits the frozen truncation and tail certificate") {
    auto g = DiskGrid::coarse();
    MobiusMap gam = fixture_map();
    HolomorphicField psi = coboundary_psi(g, gam);

    OrbitSeriesResult r = orbit_series(psi, gam, 0.5);
    CHECK(r.truncation == 34);
    CHECK(r.multiplier == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.alpha == 0.5);
    CHECK(!r.diverging);
    // geometric tail: transfer_norm * q^(N+1) / (1 - q) with q = lam^alpha = 1/2
    CHECK(r.tail_bound / r.transfer_norm ==
          doctest::Approx(std::pow(2.0, -34)).epsilon(1e-12));
    CHECK(r.transfer_norm == doctest::Approx(0.22397132337130163).epsilon(1e-9));

    double res = coboundary_residual(r.phi, gam, psi);
    CHECK(res <= r.tail_bound + 1e-8);
    CHECK(res < 1e-12); // regression tripwire, measured 5.3e-16
}

TEST_CASE("orbit series recovers the generating field") {
    auto g = DiskGrid::coarse();
    MobiusMap gam = fixture_map();
    HolomorphicField psi = coboundary_psi(g, gam);

    OrbitSeriesResult r = orbit_series(psi, gam, 0.5);
    cplx z0(2.0, 0.5);
    CHECK(std::abs(r.phi.eval(z0) - 1.0 / std::pow(z0, 4.0)) < 1e-14);

    // phi - z^-4 must be invariant under gamma: zero coboundary residual
    HolomorphicField f0 = HolomorphicField::from_series(g, LaurentSeries{4, {1.0}});
    HolomorphicField diff = HolomorphicField::combine(1.0, r.phi, -1.0, f0);
    CHECK(coboundary_residual(diff, gam, zero_field(g)) < 1e-12);
}

TEST_CASE("partial sums telescope against the next truncation") {
    auto g = DiskGrid::coarse();
    MobiusMap gam = fixture_map();
    HolomorphicField psi = coboundary_psi(g, gam);

    // at small N the dropped term sits far above double noise, so the
    // identity gamma* phi_N - phi_N - psi = phi_{N+1} - phi_N is sharp
    OrbitSeriesResult r3 = orbit_series(psi, gam, 0.5, OrbitDirection::attracting_sum, tol_for(3));
    OrbitSeriesResult r4 = orbit_series(psi, gam, 0.5, OrbitDirection::attracting_sum, tol_for(4));
    REQUIRE(r3.truncation == 3);
    REQUIRE(r4.truncation == 4);
    double worst_rel = 0.0, biggest_term = 0.0;
    for (int t = 0; t < 12; ++t) {
        cplx z = (1.3 + 0.9 * t) * cis(0.37 + 0.51 * t);
        cplx d = gam.derivative(z);
        cplx lhs = r3.phi.eval(gam.apply(z)) * d * d - r3.phi.eval(z) - psi.eval(z);
        cplx rhs = r4.phi.eval(z) - r3.phi.eval(z);
        worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / std::abs(rhs));
        biggest_term = std::max(biggest_term, std::abs(rhs));
    }
    CHECK(worst_rel < 1e-9);      // measured 7.5e-12
    CHECK(biggest_term > 1e-6);   // the identity is exercised above noise
}

TEST_CASE("residual decays at the field's own class rate") {
    auto g = DiskGrid::coarse();
    MobiusMap gam = fixture_map();

    // coboundary of z^-4 is exponent-2 class: residual shrinks by lam^2 per step
    HolomorphicField psi = coboundary_psi(g, gam);
    double rs[3];
    for (int t = 0; t < 3; ++t) {
        OrbitSeriesResult rn =
            orbit_series(psi, gam, 0.5, OrbitDirection::attracting_sum, tol_for(6 + 2 * t));
        REQUIRE(rn.truncation == 6 + 2 * t);
        rs[t] = coboundary_residual(rn.phi, gam, psi);
    }
    double lam4 = std::pow(0.25, 4.0); // two steps
    CHECK(rs[1] / rs[0] == doctest::Approx(lam4).epsilon(0.05));
    CHECK(rs[2] / rs[1] == doctest::Approx(lam4).epsilon(0.05));

    // branch point at the attracting fixed point pins the class at alpha = 1/2:
    // residual shrinks by exactly lam^alpha per step, the certificate's rate
    HolomorphicField psih = HolomorphicField::from_function(g, [](cplx z) {
        return std::pow(z, -4.0) * std::pow(1.0 - 1.0 / z, -1.5);
    });
    double rh[3];
    for (int t = 0; t < 3; ++t) {
        OrbitSeriesResult rn =
            orbit_series(psih, gam, 0.5, OrbitDirection::attracting_sum, tol_for(6 + 2 * t));
        rh[t] = coboundary_residual(rn.phi, gam, psih);
    }
    double lam2a = std::pow(0.25, 1.0); // two steps at rate lam^(1/2)
    CHECK(rh[1] / rh[0] == doctest::Approx(lam2a).epsilon(0.05));
    CHECK(rh[2] / rh[1] == doctest::Approx(lam2a).epsilon(0.05));
}

TEST_CASE("critical class field keeps its certificate and is not flagged") {
    auto g = DiskGrid::coarse();
    MobiusMap gam = fixture_map();
    HolomorphicField psih = HolomorphicField::from_function(g, [](cplx z) {
        return std::pow(z, -4.0) * std::pow(1.0 - 1.0 / z, -1.5);
    });

    OrbitSeriesResult r = orbit_series(psih, gam, 0.5);
    CHECK(r.truncation == 34);
    // the transfer ladder saturates from below for this field; saturation is
    // boundedness, not divergence
    CHECK(!r.diverging);
    CHECK(r.transfer_norm == doctest::Approx(1.413575).epsilon(1e-4));

    double res = coboundary_residual(r.phi, gam, psih);
    CHECK(res <= r.tail_bound + 1e-8);
    CHECK(res < 1e-12); // measured 9.5e-15
}

TEST_CASE("attracting and repelling sums differ by an invariant field") {
    auto g = DiskGrid::coarse();
    MobiusMap gam = fixture_map();
    HolomorphicField psi = coboundary_psi(g, gam);

    OrbitSeriesResult ra = orbit_series(psi, gam, 0.5, OrbitDirection::attracting_sum, 1e-8);
    OrbitSeriesResult rb = orbit_series(psi, gam, 0.5, OrbitDirection::repelling_sum, 1e-8);
    CHECK(ra.truncation == 27);
    CHECK(rb.truncation == 27);
    // the repelling normalizer doubles the weighted sup for this psi
    CHECK(rb.transfer_norm == doctest::Approx(2.0 * ra.transfer_norm).epsilon(1e-3));

    CHECK(coboundary_residual(rb.phi, gam, psi) <= rb.tail_bound + 1e-8);
    HolomorphicField d2 = HolomorphicField::combine(1.0, rb.phi, -1.0, ra.phi);
    CHECK(coboundary_residual(d2, gam, zero_field(g)) <= ra.tail_bound + rb.tail_bound + 1e-8);
}

TEST_CASE("orbit terms decay at the pulled-back rate") {
    auto g = DiskGrid::coarse();
    MobiusMap gam = fixture_map();
    HolomorphicField psi = coboundary_psi(g, gam);

    cplx z0(2.0, 0.5);
    double t4, t8, t16;
    for (int n : {4, 8, 16}) {
        double li = std::pow(0.25, double(n));
        cplx w = powmap(1.0, -1.0, li, z0);
        cplx d = powderiv(-1.0, li, z0, w);
        double v = std::abs(psi.eval(w) * d * d);
        (n == 4 ? t4 : n == 8 ? t8 : t16) = v;
    }
    CHECK(t4 == doctest::Approx(2.659658e-06).epsilon(1e-4));
    // exponent-2 class: |(gamma*)^n psi| falls by lam^2 per step
    CHECK(t16 / t8 == doctest::Approx(std::pow(0.25, 16.0)).epsilon(0.01));
}

TEST_CASE("unbounded data is flagged, zero data gives the zero solution") {
    auto g = DiskGrid::coarse();
    MobiusMap gam = fixture_map();

    // z^-2 decays too slowly for any alpha in (0,1): weighted sup diverges
    HolomorphicField bad = HolomorphicField::from_series(g, LaurentSeries{2, {1.0}});
    OrbitSeriesResult rbad = orbit_series(bad, gam, 0.5);
    CHECK(rbad.diverging);
    CHECK(rbad.truncation == 34);

    OrbitSeriesResult rz = orbit_series(zero_field(g), gam, 0.5);
    CHECK(rz.truncation == 0);
    CHECK(rz.tail_bound == 0.0);
    CHECK(rz.transfer_norm == 0.0);
    CHECK(!rz.diverging);
    CHECK(std::abs(rz.phi.eval(cplx(2.0, 1.0))) == 0.0);
}

TEST_CASE("orbit series rejects non-hyperbolic maps and bad parameters") {
    auto g = DiskGrid::coarse();
    HolomorphicField psi = coboundary_psi(g, fixture_map());

    CHECK_THROWS_AS(orbit_series(psi, MobiusMap::rotation(0.3), 0.5), PreconditionError);
    CHECK_THROWS_AS(orbit_series(psi, MobiusMap::identity(), 0.5), PreconditionError);
    MobiusMap par = MobiusMap::su11(cplx(1.0, 0.5), cplx(0.0, 0.5));
    REQUIRE(classify(par).kind == MobiusClass::parabolic);
    CHECK_THROWS_AS(orbit_series(psi, par, 0.5), PreconditionError);
    CHECK_THROWS_AS(orbit_series(psi, fixture_map(), 1.5), PreconditionError);
    CHECK_THROWS_AS(orbit_series(psi, fixture_map(), 0.0), PreconditionError);
    CHECK_THROWS_AS(
        orbit_series(psi, fixture_map(), 0.5, OrbitDirection::attracting_sum, 1.0),
        PreconditionError);
}

TEST_CASE("residual responds linearly to a data perturbation") {
    auto g = DiskGrid::coarse();
    MobiusMap gam = fixture_map();
    HolomorphicField psi = coboundary_psi(g, gam);
    OrbitSeriesResult r = orbit_series(psi, gam, 0.5);

    // adding eps z^-4 to psi shifts the residual by eps * ||z^-4||-weighted = eps/4
    HolomorphicField pert = HolomorphicField::combine(
        1.0, psi, 1.0, HolomorphicField::from_series(g, LaurentSeries{4, {1e-3}}));
    CHECK(coboundary_residual(r.phi, gam, pert) == doctest::Approx(2.5e-4).epsilon(1e-3));
}

TEST_CASE("decay class report separates passing and failing exponents") {
    auto gs = DiskGrid::standard();
    cplx w0 = cis(gs->angle(0));
    // branch exponent -1.4 away from z = 1 puts the field in class 0.6 but not 0.8
    HolomorphicField syn = HolomorphicField::from_function(gs, [w0](cplx z) {
        return std::pow(z, -4.0) * std::pow(1.0 - w0 / z, -1.4);
    });
    DecayClassReport d6 = decay_class_check(syn, 0.6);
    CHECK(d6.pass);
    CHECK(d6.bounded);
    CHECK(d6.fitted_exponent == doctest::Approx(0.5913).epsilon(1e-2));
    DecayClassReport d8 = decay_class_check(syn, 0.8);
    CHECK(!d8.pass);
    CHECK(d8.bounded); // failure is the fitted exponent, not the norm

    DecayClassReport dz = decay_class_check(zero_field(DiskGrid::coarse()), 0.6);
    CHECK(dz.pass);
    CHECK(std::isinf(dz.fitted_exponent));

    HolomorphicField f4 = HolomorphicField::from_series(gs, LaurentSeries{4, {1.0}});
    DecayClassReport d4 = decay_class_check(f4, 0.9);
    CHECK(d4.pass);
    CHECK(d4.fitted_exponent == doctest::Approx(1.9836).epsilon(1e-2));
}

TEST_CASE("certificate serializes the run parameters") {
    auto g = DiskGrid::coarse();
    MobiusMap gam = fixture_map();
    HolomorphicField psi = coboundary_psi(g, gam);
    OrbitSeriesResult r = orbit_series(psi, gam, 0.5);
    double res = coboundary_residual(r.phi, gam, psi);

    nlohmann::json j = nlohmann::json::parse(orbit_certificate(r, res));
    CHECK(j.at("lambda").get<double>() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(j.at("alpha").get<double>() == 0.5);
    CHECK(j.at("truncation").get<int>() == 34);
    CHECK(j.at("direction").get<std::string>() == "attracting_sum");
    CHECK(j.at("diverging").get<bool>() == false);
    CHECK(j.at("tail_bound").get<double>() == doctest::Approx(r.tail_bound).epsilon(1e-12));
    CHECK(j.at("residual").get<double>() == doctest::Approx(res).epsilon(1e-12));
    CHECK(j.at("transfer_norm").get<double>() ==
          doctest::Approx(r.transfer_norm).epsilon(1e-12));
}
