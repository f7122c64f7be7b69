#pragma once

#include "teich/fields.hpp"

#include <functional>

namespace teich {

// Arithmetic on truncated Laurent tails around infinity. Powers of z above
// -kmax_drop are kept; everything farther down the tail is discarded.

LaurentSeries laurent_add(cplx a, const LaurentSeries& A, cplx b, const LaurentSeries& B);
LaurentSeries laurent_mul(const LaurentSeries& A, const LaurentSeries& B, int kmax);
// A/B; B must have a nonzero leading coefficient
LaurentSeries laurent_div(const LaurentSeries& A, const LaurentSeries& B, int kmax);

// Schwarzian derivative of a map-like series f = a z + c0 + c1/z + ... as a
// Laurent tail (starts at z^-4 for a normalized univalent tail); computed as
// N' - N^2/2 with N = f''/f' by series division.
LaurentSeries schwarzian_series(const LaurentSeries& f, int kmax);

// preschwarzian N = f''/f' of the same map-like series (starts at z^-3)
LaurentSeries preschwarzian_series(const LaurentSeries& f, int kmax);

struct LaurentFit {
    LaurentSeries map;  // z + b0 + b1/z + ... (identity term included)
    double crossval = 0.0; // max value-space mismatch between probe circles
};

// Recovers the Laurent tail of a conformal map f(z) = z + O(1) analytic on
// |z| > 1 by angular Fourier analysis of f - z on probe circles; coefficients
// come from the middle circle and the outer/inner ones cross-validate them.
// Requires f computable on |z| up to the largest probe radius.
LaurentFit laurent_fit(const std::function<cplx(cplx)>& f,
                       const std::vector<double>& radii = {1.5, 2.0, 3.0},
                       int kmax = 120, int angles = 2048);

} // namespace teich
