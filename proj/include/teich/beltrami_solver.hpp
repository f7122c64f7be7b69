#pragma once

#include "teich/fields.hpp"
#include "teich/series.hpp"

#include <functional>
#include <memory>

namespace teich {

struct SolverConfig {
    int n = 1024;                // lattice points per side
    double box = 3.2;            // half side L of the periodic box [-L, L)^2
    double support_radius = 1.0; // coefficient support is rescaled to the unit disk
    int max_iter = 200;
    double tol = 1e-10;          // L2 update size that stops the iteration
    double relax_threshold = 0.5; // damping kicks in above this sup norm
    double relax = 0.7;
    int trace_modes = 32;        // boundary-trace correction modes |m| <= this
    int moment_modes = 16;       // moment-dual correction profiles 0..this
    int series_terms = 128;      // exterior Laurent coefficients kept
};

// Principal solution of d_zbar f = mu d_z f for mu supported in the unit
// disk, normalized f(z) = z + O(1/z) at infinity.
//
// The Neumann iteration runs spectrally on the periodic box. Periodization
// error is controlled by subtracting, before each FFT, profiles with known
// plane transforms: boundary-trace profiles z^m / conj(z)^|m| matched to the
// angular Fourier trace of the source extrapolated to the circle, and
// moment-dual profiles c_k conj(z)^k (1-|z|^2) that zero the remaining moments
// (coefficients from a small Gram solve, so the discrete moments vanish
// exactly). The leftover torus output is then plane-like up to an additive
// constant, which is calibrated at the box corners where the true transform
// of the twice-corrected source is negligible. Sources that are exact
// profile combinations (constant mu, conj(z)^n mu) solve to machine
// precision because the leftover vanishes identically.
class PrincipalMap {
public:
    static PrincipalMap solve(const BeltramiField& mu, const SolverConfig& cfg = {});

    cplx f(cplx z) const;      // series for |z| >= 1, assembled grid inside
    cplx df(cplx z) const;     // d_z f
    cplx dfbar(cplx z) const;  // d_zbar f (the converged source)
    cplx inverse(cplx w) const; // Newton inversion through the Wirtinger jacobian

    // Box interpolation of the spectral assembly, also beyond the circle;
    // an independent code path from the exterior series, for cross-checks.
    cplx f_from_grid(cplx z) const;

    // z + sum_k c_k z^{-k-1}, exact on |z| > 1 up to solver accuracy
    const LaurentSeries& exterior_series() const;
    int iterations() const;
    double residual() const; // last iteration update, L2 on the box
    const std::vector<double>& residual_trace() const;
    const SolverConfig& config() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    friend PrincipalMap solve_principal_raw(const std::function<cplx(cplx)>&,
                                            double, const SolverConfig&);
};

// Principal solve for a source given as a raw function supported in
// |z| <= support_radius; unlike the BeltramiField entry point the radius may
// exceed one (the lattice rescales), which the sphere construction needs.
PrincipalMap solve_principal_raw(const std::function<cplx(cplx)>& mu,
                                 double support_radius, const SolverConfig& cfg = {});

// Global solution for the circle-symmetric extension of mu (reflected to the
// exterior by z -> 1/conj(z)), normalized to fix 0, 1 and infinity, so it
// restricts to a quasiconformal selfmap of the disk. Built as B . K . G:
// G = 1/W(1/z) carries the reflected coefficient on the exterior through one
// principal solve W conjugated by inversion, K carries the remaining
// coefficient on G(D) through a second principal solve, and B is the Mobius
// normalization. The commutation defect with z -> 1/conj(z) is measured on
// probe circles afterwards and gates the construction.
class DiskSelfmap {
public:
    static DiskSelfmap solve(const BeltramiField& mu, const SolverConfig& cfg = {},
                             double symmetry_gate = 1e-3);

    cplx f(cplx z) const;
    cplx df(cplx z) const;     // d_z f
    cplx dfbar(cplx z) const;  // d_zbar f
    cplx inverse(cplx w) const;
    double symmetry_defect() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// Testing hook: the corrected plane transforms of one disk-supported source,
// without any iteration. S is the z-derivative of C; C inverts d_zbar.
struct PlaneTransform {
    std::function<cplx(cplx)> S; // valid inside the unit disk and on the box
    std::function<cplx(cplx)> C;
};
PlaneTransform plane_transform(const std::function<cplx(cplx)>& source,
                               const SolverConfig& cfg = {});

} // namespace teich
