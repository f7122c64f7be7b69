#include "teich/bers.hpp"

#include "teich/errors.hpp"

#include <algorithm>
#include <cmath>

namespace teich {

HolomorphicField bers_projection(const BeltramiField& mu, const SolverConfig& cfg) {
    PrincipalMap pm = PrincipalMap::solve(mu, cfg);
    const LaurentSeries& tail = pm.exterior_series();

    // Independent recovery of the tail from the grid-path values of the map;
    // the moment-assembled series must agree with it to the grid accuracy.
    LaurentFit fit = laurent_fit([&pm](cplx z) { return pm.f_from_grid(z); });
    double h = 2.0 * cfg.box / cfg.n;
    // grid-path values carry O(h^3) error for sources smooth up to the
    // support circle, degrading to O(h^{3/2}) when the coefficient reaches
    // the circle with a root-type envelope; admit both classes
    double cap = 100.0 * h * h * h + std::pow(h, 1.5) + 1e-9;
    if (fit.crossval > cap)
        throw AccuracyError("bers_projection: circle fit does not self-validate");
    double gap = 0.0;
    for (int k = 1; k <= 10; ++k)
        gap = std::max(gap, std::abs(tail.coeff(k) - fit.map.coeff(k)));
    if (gap > cap)
        throw AccuracyError("bers_projection: series and circle fit disagree");

    LaurentSeries phi = schwarzian_series(tail, cfg.series_terms + 4);
    HolomorphicField out = HolomorphicField::from_series(mu.grid_ptr(), phi);

    double nn = exterior_sup_weighted(out, -2.0).value;
    double bound = 1.5 * mu.sup_abs() * 1.05 + 1e-9;
    if (nn > bound)
        throw AccuracyError("bers_projection: Nehari bound violated by the result");
    return out;
}

BeltramiField aw_section(const HolomorphicField& phi) {
    double norm = exterior_sup_weighted(phi, -2.0).value;
    if (!(norm < 0.5 - 1e-12))
        throw ValidationError("aw_section: weighted sup norm must stay below 1/2");
    HolomorphicField base = phi;
    return BeltramiField::from_function(phi.grid_ptr(), [base](cplx w) {
        if (std::abs(w) < 1e-60) {
            // limit at the origin is -lim z^4 phi(z) / 2
            cplx z = cplx(1e60, 0.0);
            cplx z2 = z * z;
            return -base.eval(z) * z2 * z2 / 2.0;
        }
        cplx wb = std::conj(w);
        cplx z = 1.0 / wb;
        cplx wb2 = wb * wb;
        return -sq(1.0 - abs2(w)) * base.eval(z) / (2.0 * wb2 * wb2);
    });
}

HolomorphicField d0_phi(const BeltramiField& mu, int nmax) {
    if (nmax < 0) throw PreconditionError("d0_phi: nmax >= 0 required");
    const DiskGrid& g = mu.grid();
    std::vector<cplx> M(std::size_t(nmax + 1), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        cplx p = g.weight(i) * mu.sample(i);
        cplx zeta = g.node(i);
        for (int n = 0; n <= nmax; ++n) {
            M[std::size_t(n)] += p;
            p *= zeta;
        }
    }
    LaurentSeries s;
    s.k0 = 4;
    s.c.resize(std::size_t(nmax + 1));
    for (int n = 0; n <= nmax; ++n) {
        double binom = double((n + 1) * (n + 2) * (n + 3)) / 6.0; // binom(n+3, 3)
        s.c[std::size_t(n)] = -(6.0 / pi) * binom * M[std::size_t(n)];
    }
    return HolomorphicField::from_series(mu.grid_ptr(), s.truncated(1e-300));
}

} // namespace teich
