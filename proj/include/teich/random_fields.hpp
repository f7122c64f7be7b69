#pragma once

#include "teich/fields.hpp"

#include <memory>
#include <random>

namespace teich {

// Seeded trial fields for the inequality sweeps. Draw order is fixed so a
// seed pins the whole trial set across platforms.

// Boundary-vanishing coefficient (1-|z|^2)^s * (low-degree polynomial in z
// and conj z), rescaled so the grid sup lands on sup_target. envelope_s > 0
// keeps the coefficient in the little space; larger s decays faster.
BeltramiField random_beltrami(std::shared_ptr<const DiskGrid> g, std::mt19937& rng,
                              double sup_target, double envelope_s = 1.0,
                              int max_mode = 4);

// Finite Laurent tail sum_{k=kmin..kmax} c_k z^{-k} on |z|>1 with uniform
// complex coefficients, rescaled so the p-integrable norm (including the
// cutoff tail estimate) lands on norm_target. kmin >= 3 keeps every p >= 2
// norm finite; the default starts at the quartic decay of Schwarzians.
HolomorphicField random_laurent_field(std::shared_ptr<const DiskGrid> g, std::mt19937& rng,
                                      double p, double norm_target, int kmin = 4,
                                      int kmax = 9);

} // namespace teich
