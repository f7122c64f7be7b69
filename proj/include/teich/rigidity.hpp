#pragma once

#include "teich/fields.hpp"
#include "teich/moebius.hpp"

#include <string>

namespace teich {

enum class OrbitDirection { attracting_sum, repelling_sum };

// Partial orbit sum reconstructing a field from its coboundary psi = g*phi - phi
// under a hyperbolic g. Transferred to the half-plane where g acts as
// zeta -> lambda zeta, each dropped term past index N contributes at most
// ||psi~||_{inf,alpha} lambda^{alpha i} rho_half^-alpha(zeta), so the certified
// tail coefficient is transfer_norm * lambda^{alpha(N+1)} / (1 - lambda^alpha).
struct OrbitSeriesResult {
    HolomorphicField phi;
    int truncation = 0;         // N, the highest orbit power summed
    double tail_bound = 0.0;    // transfer_norm * lambda^{alpha(N+1)} / (1 - lambda^alpha)
    OrbitDirection direction = OrbitDirection::attracting_sum;
    double multiplier = 0.0;    // attracting multiplier lambda of g, in (0,1)
    double alpha = 0.0;
    double transfer_norm = 0.0; // ||psi~||_{inf,alpha} over the half-plane strip ladder
    bool diverging = false;     // weighted norm grows toward a fixed point; bound untrusted
};

// phi_N = -sum_{i=0}^{N} (g*)^i psi for the attracting direction, or
// +sum_{i=1}^{N} (g*)^{-i} psi for the repelling one; the two limits agree.
// N is the smallest truncation whose geometric tail factor drops below
// rel_tol, so tail_bound < rel_tol * transfer_norm. exclusion is the radius
// of the fixed-point disks carved out of the working region (they cap the
// half-plane strip ladder). Non-hyperbolic g throws PreconditionError; an
// infinite weighted norm of psi only raises the diverging flag.
OrbitSeriesResult orbit_series(const HolomorphicField& psi, const MobiusMap& g, double alpha,
                               OrbitDirection dir = OrbitDirection::attracting_sum,
                               double rel_tol = 1e-10, double exclusion = 0.05);

// sup of rho_ext^-2 |g*phi - phi - psi| over the exterior working region,
// with disks of radius exclusion around the fixed points removed when g is
// hyperbolic. Fields are evaluated in closed form when they carry one.
double coboundary_residual(const HolomorphicField& phi, const MobiusMap& g,
                           const HolomorphicField& psi, double exclusion = 0.05);

// Membership test for the alpha-decay class: the fitted boundary exponent of
// rho_ext^-2 |phi| must reach alpha - 0.05 and the rho^{-2+alpha}-weighted
// ring maxima must stay bounded toward the circle. A field vanishing on the
// boundary rings passes vacuously (fitted exponent +inf).
struct DecayClassReport {
    bool pass = false;
    double fitted_exponent = 0.0;
    bool bounded = false;
};
DecayClassReport decay_class_check(const HolomorphicField& phi, double alpha);

// JSON certificate of an orbit-series run: multiplier, alpha, truncation,
// tail bound, the measured residual, direction, transfer norm, divergence.
std::string orbit_certificate(const OrbitSeriesResult& r, double residual);

} // namespace teich
