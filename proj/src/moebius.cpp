#include "teich/moebius.hpp"

#include "teich/errors.hpp"

#include <cmath>
#include <limits>

namespace teich {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
bool is_inf(cplx z) { return std::isinf(z.real()) || std::isinf(z.imag()); }
} // namespace

double hyperbolic_density(cplx z, Domain dom) {
    switch (dom) {
        case Domain::disk: return rho_disk(z);
        case Domain::exterior: return rho_ext(z);
        case Domain::halfplane: return rho_half(z);
    }
    throw PreconditionError("hyperbolic_density: bad domain tag");
}

MobiusMap MobiusMap::from_coeffs(cplx a, cplx b, cplx c, cplx d) {
    cplx det = a * d - b * c;
    if (std::abs(det) < 1e-14)
        throw PreconditionError("MobiusMap: coefficient matrix is singular");
    cplx s = 1.0 / std::sqrt(det);
    MobiusMap m{a * s, b * s, c * s, d * s};
    // fix the residual +-1 sign: first coefficient component of meaningful
    // size becomes positive
    for (double v : {m.a.real(), m.a.imag(), m.b.real(), m.b.imag(),
                     m.c.real(), m.c.imag(), m.d.real(), m.d.imag()}) {
        if (std::abs(v) < 1e-12) continue;
        if (v < 0) { m.a = -m.a; m.b = -m.b; m.c = -m.c; m.d = -m.d; }
        break;
    }
    return m;
}

MobiusMap MobiusMap::su11(cplx a, cplx b) {
    if (std::abs(abs2(a) - abs2(b) - 1.0) > 1e-10)
        throw PreconditionError("MobiusMap::su11: need |a|^2 - |b|^2 = 1");
    return from_coeffs(a, b, std::conj(b), std::conj(a));
}

MobiusMap MobiusMap::disk_automorphism(cplx alpha, double theta) {
    if (abs2(alpha) >= 1.0)
        throw PreconditionError("MobiusMap::disk_automorphism: |alpha| < 1 required");
    double s = 1.0 / std::sqrt(1.0 - abs2(alpha));
    cplx half = cis(theta / 2.0);
    return su11(half * s, -half * alpha * s);
}

MobiusMap MobiusMap::rotation(double theta) { return disk_automorphism(0.0, theta); }

MobiusMap MobiusMap::halfplane_scaling(double lambda) {
    if (!(lambda > 0))
        throw PreconditionError("MobiusMap::halfplane_scaling: lambda > 0 required");
    double s = std::sqrt(lambda);
    return from_coeffs(s, 0.0, 0.0, 1.0 / s);
}

MobiusMap MobiusMap::hyperbolic_fixing(cplx attract, cplx repel, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw PreconditionError("MobiusMap::hyperbolic_fixing: lambda in (0,1) required");
    if (std::abs(std::abs(attract) - 1.0) > 1e-12 || std::abs(std::abs(repel) - 1.0) > 1e-12)
        throw PreconditionError("MobiusMap::hyperbolic_fixing: fixed points must sit on the unit circle");
    if (std::abs(attract - repel) < 1e-9)
        throw PreconditionError("MobiusMap::hyperbolic_fixing: fixed points coincide");
    // conjugate z -> lambda z by m(z) = (z - attract)/(z - repel)
    MobiusMap m = from_coeffs(1.0, -attract, 1.0, -repel);
    return m.inverse().compose(halfplane_scaling(lambda).compose(m));
}

cplx MobiusMap::apply(cplx z) const {
    if (is_inf(z)) {
        if (std::abs(c) < 1e-300) return cplx(kInf, kInf);
        return a / c;
    }
    cplx den = c * z + d;
    if (std::abs(den) < 1e-300) return cplx(kInf, kInf);
    return (a * z + b) / den;
}

cplx MobiusMap::derivative(cplx z) const {
    cplx den = c * z + d;
    return 1.0 / (den * den);
}

MobiusMap MobiusMap::inverse() const { return MobiusMap{d, -b, -c, a}; }

MobiusMap MobiusMap::compose(const MobiusMap& inner) const {
    return from_coeffs(a * inner.a + b * inner.c, a * inner.b + b * inner.d,
                       c * inner.a + d * inner.c, c * inner.b + d * inner.d);
}

bool MobiusMap::almost_equal(const MobiusMap& o, double tol) const {
    double d1 = std::abs(a - o.a) + std::abs(b - o.b) + std::abs(c - o.c) + std::abs(d - o.d);
    double d2 = std::abs(a + o.a) + std::abs(b + o.b) + std::abs(c + o.c) + std::abs(d + o.d);
    return std::min(d1, d2) < tol;
}

MobiusClass classify(const MobiusMap& g) {
    MobiusClass out;
    out.trace2 = g.trace2();
    out.multiplier = 1.0;
    out.fixed_attract = out.fixed_repel = cplx(kInf, kInf);
    if (std::abs(g.b) < 1e-12 && std::abs(g.c) < 1e-12 && std::abs(g.a - g.d) < 1e-12) {
        out.kind = MobiusClass::identity;
        return out;
    }
    cplx t2 = out.trace2;
    if (std::abs(t2 - 4.0) < 1e-10) {
        out.kind = MobiusClass::parabolic;
        cplx fp = std::abs(g.c) < 1e-14 ? cplx(kInf, kInf) : (g.a - g.d) / (2.0 * g.c);
        out.fixed_attract = out.fixed_repel = fp;
        return out;
    }
    // lambda + 1/lambda = tr^2 - 2; take the branch inside the unit circle
    cplx s = t2 - 2.0;
    cplx root = std::sqrt(s * s - 4.0);
    cplx lam = (s - root) / 2.0;
    if (std::abs(lam) > 1.0) lam = (s + root) / 2.0;
    out.multiplier = lam;
    if (std::abs(t2.imag()) < 1e-12 && t2.real() > 4.0)
        out.kind = MobiusClass::hyperbolic;
    else if (std::abs(t2.imag()) < 1e-12 && t2.real() >= 0.0 && t2.real() < 4.0)
        out.kind = MobiusClass::elliptic;
    else
        out.kind = MobiusClass::loxodromic;

    if (std::abs(g.c) < 1e-14) {
        // one fixed point at infinity, the other at b/(d-a)
        cplx zf = g.b / (g.d - g.a);
        cplx dinf = g.d / g.a; // derivative at infinity in the 1/z chart
        if (std::abs(dinf) < 1.0) {
            out.fixed_attract = cplx(kInf, kInf);
            out.fixed_repel = zf;
        } else {
            out.fixed_attract = zf;
            out.fixed_repel = cplx(kInf, kInf);
        }
        return out;
    }
    cplx disc = std::sqrt(t2 - 4.0);
    cplx z1 = (g.a - g.d + disc) / (2.0 * g.c);
    cplx z2 = (g.a - g.d - disc) / (2.0 * g.c);
    if (std::abs(g.derivative(z1)) <= std::abs(g.derivative(z2))) {
        out.fixed_attract = z1;
        out.fixed_repel = z2;
    } else {
        out.fixed_attract = z2;
        out.fixed_repel = z1;
    }
    return out;
}

MobiusMap exterior_normalizer(const MobiusMap& g, const MobiusClass& cls) {
    if (cls.kind != MobiusClass::hyperbolic)
        throw PreconditionError("exterior_normalizer: map is not hyperbolic");
    cplx at = cls.fixed_attract, re = cls.fixed_repel;
    if (is_inf(at) || is_inf(re) ||
        std::abs(std::abs(at) - 1.0) > 1e-8 || std::abs(std::abs(re) - 1.0) > 1e-8)
        throw PreconditionError("exterior_normalizer: fixed points must sit on the unit circle");
    if (std::abs(g.apply(at) - at) > 1e-8 || std::abs(g.apply(re) - re) > 1e-8)
        throw PreconditionError("exterior_normalizer: classification does not match the map");
    MobiusMap m = MobiusMap::from_coeffs(1.0, -at, 1.0, -re);
    // m sends the unit circle to a line through 0; rotate that line onto the
    // real axis with the exterior landing in the upper half-plane
    cplx u = 0.0;
    for (int k = 0; k < 16; ++k) {
        cplx z1 = cis(2.0 * pi * (k + 0.37) / 16.0);
        if (std::abs(z1 - at) > 0.2 && std::abs(z1 - re) > 0.2) {
            u = m.apply(z1);
            break;
        }
    }
    if (std::abs(u) < 1e-12)
        throw PreconditionError("exterior_normalizer: degenerate circle image");
    cplx k = cis(-std::arg(u));
    cplx w0 = k * m.apply(3.0 * at); // image of an exterior probe point
    if (w0.imag() < 0.0) k = -k;
    return MobiusMap::from_coeffs(k, 0.0, 0.0, 1.0).compose(m);
}

HolomorphicField pullback(const HolomorphicField& phi, const MobiusMap& g) {
    HolomorphicField base = phi;
    MobiusMap m = g;
    return HolomorphicField::from_function(phi.grid_ptr(), [base, m](cplx z) {
        cplx w = m.apply(z);
        if (is_inf(w)) return cplx(0.0, 0.0); // phi decays at infinity faster than g' blows up
        cplx dg = m.derivative(z);
        return base.eval(w) * dg * dg;
    });
}

} // namespace teich
