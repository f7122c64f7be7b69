#pragma once

#include "teich/beltrami_solver.hpp"
#include "teich/fields.hpp"
#include "teich/series.hpp"

namespace teich {

// Schwarzian of the exterior conformal piece of the principal solution for mu.
// The map tail comes from the solver's own exterior series; an independent
// circle fit of the same map must agree with it (accuracy error otherwise),
// and the result is gated by the Nehari-type bound 3 |mu|_inf / 2.
HolomorphicField bers_projection(const BeltramiField& mu,
                                 const SolverConfig& cfg = SolverConfig{});

// Harmonic section: phi on |z| > 1 with sup-norm below 1/2 maps to the
// Beltrami coefficient
//   mu(w) = -(1 - |w|^2)^2 phi(1/conj(w)) / (2 conj(w)^4)   on |w| < 1,
// whose sup norm is exactly twice the weighted sup norm of phi.
BeltramiField aw_section(const HolomorphicField& phi);

// Derivative at the origin of the Schwarzian projection: the linear map
//   mu -> -(6/pi) sum_n binom(n+3, 3) M_n(mu) z^{-n-4},  M_n = int mu zeta^n dA,
// evaluated through disk moments of mu; exact on polynomial test fields up to
// quadrature error.
HolomorphicField d0_phi(const BeltramiField& mu, int nmax = 40);

} // namespace teich
