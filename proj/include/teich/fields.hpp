#pragma once

#include "teich/grid.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace teich {

// Truncated Laurent tail: sum of c[j] * z^{-(k0+j)}. k0 may be negative, so
// map-type series like z + b1/z + ... fit the same container (k0 = -1, c0 = 1).
struct LaurentSeries {
    int k0 = 0;
    std::vector<cplx> c;

    cplx eval(cplx z) const;
    cplx coeff(int k) const;
    int kmax() const { return k0 + int(c.size()) - 1; }
    LaurentSeries derivative() const; // d/dz
    LaurentSeries truncated(double tol) const;
};

struct NormReport {
    double value = 0.0;
    std::string kind;
    double exponent = 0.0;      // weight exponent entering the report
    int max_ring = -1;          // ring index where the grid max was attained
    double tail_estimate = 0.0; // estimated contribution beyond the radial cutoff
    bool diverging = false;     // ring maxima / ring sums grow toward the cutoff
};

// Measurable Beltrami coefficient on the unit disk, sampled on a DiskGrid.
// Invariant: grid sup |mu| < 1.
class BeltramiField {
public:
    using Eval = std::function<cplx(cplx)>;

    static BeltramiField zero(std::shared_ptr<const DiskGrid> g);
    static BeltramiField from_function(std::shared_ptr<const DiskGrid> g, Eval f);
    static BeltramiField from_samples(std::shared_ptr<const DiskGrid> g, std::vector<cplx> v);

    const DiskGrid& grid() const { return *grid_; }
    std::shared_ptr<const DiskGrid> grid_ptr() const { return grid_; }
    const std::vector<cplx>& samples() const { return samples_; }
    cplx sample(std::size_t i) const { return samples_[i]; }
    bool has_closed_form() const { return bool(eval_); }
    double sup_abs() const { return sup_abs_; }

    // Closed form when available, else bilinear interpolation in (r, theta).
    cplx eval(cplx z) const;

    BeltramiField scaled(double t) const;

private:
    BeltramiField() = default;
    void validate() const;
    std::shared_ptr<const DiskGrid> grid_;
    std::vector<cplx> samples_;
    Eval eval_;
    double sup_abs_ = 0.0;
};

// Complex field on the exterior disk |z| > 1, sampled on the reflected grid.
// Usually holomorphic (Schwarzians, orbit sums); holomorphy is checked by
// cr_residual, not assumed, so synthetic non-holomorphic test fields fit too.
class HolomorphicField {
public:
    using Eval = std::function<cplx(cplx)>;

    static HolomorphicField from_series(std::shared_ptr<const DiskGrid> g, LaurentSeries s);
    static HolomorphicField from_function(std::shared_ptr<const DiskGrid> g, Eval f);
    static HolomorphicField from_function_with_series(std::shared_ptr<const DiskGrid> g,
                                                      Eval f, LaurentSeries s);
    static HolomorphicField from_samples(std::shared_ptr<const DiskGrid> g, std::vector<cplx> v);

    const DiskGrid& grid() const { return *grid_; }
    std::shared_ptr<const DiskGrid> grid_ptr() const { return grid_; }
    const std::vector<cplx>& samples() const { return samples_; }
    const std::optional<LaurentSeries>& series() const { return series_; }
    bool analytic() const { return bool(eval_) || series_.has_value(); }

    cplx eval(cplx z) const;

    HolomorphicField scaled(cplx a) const;
    static HolomorphicField combine(cplx a, const HolomorphicField& f,
                                    cplx b, const HolomorphicField& g);

private:
    HolomorphicField() = default;
    std::shared_ptr<const DiskGrid> grid_;
    std::vector<cplx> samples_;
    std::optional<LaurentSeries> series_;
    Eval eval_;
};

// ----- quadrature and norms -----

// integral over the truncated disk of fn against euclidean area
cplx disk_integral(const DiskGrid& g, const std::function<cplx(cplx)>& fn);

// esssup rho_disk^alpha |mu| as a grid max (polished by local maximization
// when mu carries a closed form); alpha = 0 gives the plain sup norm.
NormReport beltrami_sup_weighted(const BeltramiField& mu, double alpha);

// (integral |mu|^p rho^2 dA)^{1/p}
NormReport beltrami_lp(const BeltramiField& mu, double p);

// sup rho_ext^{expo} |phi| over |z|>1; expo = -2 is the Nehari-type sup norm,
// expo = -2+alpha the alpha-weighted one. Series-backed fields contribute
// their |z| -> infinity limit as an extra candidate.
NormReport exterior_sup_weighted(const HolomorphicField& phi, double expo);

// (integral rho_ext^{2-2p} |phi|^p dA)^{1/p}, computed on the reflected grid.
NormReport exterior_lp(const HolomorphicField& phi, double p);

// integral over the unit disk of |z - zeta|^-4, zeta strictly outside; the
// closure correction for the cutoff annulus is folded into the value and also
// reported separately.
struct KernelIntegral {
    double value = 0.0;
    double tail = 0.0;
};
KernelIntegral quartic_kernel_disk(const DiskGrid& g, cplx zeta);
// integral over the exterior disk of |z - zeta|^-4, zeta strictly inside.
KernelIntegral quartic_kernel_exterior(const DiskGrid& g, cplx zeta);

// Fits the boundary-decay exponent of rho_ext^-2 |phi| against |z|-1 on the
// near-boundary rings. Returns +infinity when the field vanishes there; the
// fitted slope is clamped to [-6, 2] (2 is the ceiling the weight imposes
// for fields with nonvanishing boundary values).
double decay_exponent_fit(const HolomorphicField& phi);

// Holomorphy diagnostic: ring-wise Fourier coefficients of phi must scale as
// c_k r^{-k} across radii. Returns the relative mismatch (0 for holomorphic).
double cr_residual(const HolomorphicField& phi);

} // namespace teich
