#pragma once

#include "teich/fields.hpp"

namespace teich {

enum class Domain { disk, exterior, halfplane };

double hyperbolic_density(cplx z, Domain dom);

// Moebius transformation z -> (az+b)/(cz+d), stored det-normalized (ad-bc=1)
// with the overall sign fixed so equal maps compare equal entrywise. Infinity
// is encoded as a complex with infinite real part.
struct MobiusMap {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static MobiusMap from_coeffs(cplx a, cplx b, cplx c, cplx d);
    static MobiusMap identity() { return {}; }
    // (az+b)/(conj(b)z+conj(a)) with |a|^2-|b|^2=1; preserves the unit circle
    // and each of its sides, so it acts on both the disk and the exterior
    static MobiusMap su11(cplx a, cplx b);
    static MobiusMap disk_automorphism(cplx alpha, double theta);
    static MobiusMap rotation(double theta);
    static MobiusMap halfplane_scaling(double lambda);
    // circle-preserving hyperbolic map with the given unit-circle fixed points
    // and attracting multiplier lambda in (0,1)
    static MobiusMap hyperbolic_fixing(cplx attract, cplx repel, double lambda);

    cplx apply(cplx z) const;
    cplx derivative(cplx z) const; // 1/(cz+d)^2 under det normalization
    cplx trace2() const { return (a + d) * (a + d); }
    MobiusMap inverse() const;
    MobiusMap compose(const MobiusMap& inner) const; // this after inner
    bool almost_equal(const MobiusMap& o, double tol) const;
};

struct MobiusClass {
    enum Kind { identity, parabolic, elliptic, hyperbolic, loxodromic } kind;
    cplx trace2;
    // attracting multiplier (|multiplier| <= 1); 1 for identity/parabolic
    cplx multiplier;
    cplx fixed_attract; // parabolic: the single fixed point (in both slots)
    cplx fixed_repel;
};

MobiusClass classify(const MobiusMap& g);

// For a hyperbolic g preserving the unit circle: a Moebius h mapping the
// exterior disk onto the upper half-plane with h(attract)=0, h(repel)=infinity,
// so h g h^{-1} is the normal form z -> lambda z.
MobiusMap exterior_normalizer(const MobiusMap& g, const MobiusClass& cls);

// quadratic-differential pullback (g^* phi)(z) = phi(g z) g'(z)^2 on |z|>1;
// an isometry for the weighted sup norms whenever g preserves the exterior
HolomorphicField pullback(const HolomorphicField& phi, const MobiusMap& g);

} // namespace teich
