#pragma once

#include "teich/moebius.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace teich {

// Lift of an orientation-preserving circle homeomorphism: an increasing
// g: R -> R with g(x+1) = g(x) + 1 (unit-period coordinates, so the circle
// point is e^{2 pi i x}).
class CircleMapLift {
public:
    using Fn = std::function<double(double)>;

    static CircleMapLift identity();
    static CircleMapLift rotation(double c);
    // x + a sin(2 pi x)/(2 pi) + c; homeomorphism for |a| < 1
    static CircleMapLift sine_family(double a, double c = 0.0);
    // boundary action of a circle-preserving Moebius map (su11 coefficients)
    static CircleMapLift mobius_boundary(const MobiusMap& g);
    // nodes (x_i, y_i), strictly increasing, x_0 = 0, extended periodically;
    // slopes are constant per segment
    static CircleMapLift piecewise_linear(std::vector<double> x, std::vector<double> y);
    // same nodes, monotone-cubic interpolation (used for tabulated maps)
    static CircleMapLift from_samples(std::vector<double> x, std::vector<double> y);
    // outer(inner(x)) with the chain-rule derivative
    static CircleMapLift compose(const CircleMapLift& outer, const CircleMapLift& inner);

    double operator()(double x) const { return lift_(x); }
    double derivative(double x) const; // analytic when known, else central difference
    double inverse(double y) const;    // bisection to 1e-12
    bool has_derivative() const { return bool(deriv_); }

private:
    CircleMapLift(Fn lift, Fn deriv) : lift_(std::move(lift)), deriv_(std::move(deriv)) {}
    Fn lift_, deriv_;
};

// Quasisymmetric quotient sup over lattice points x = i/n and dyadic scales
// t = 2^-k, k = 1..kmax; both orientations, so the result is >= 1.
double qs_quotient(const CircleMapLift& g, int n = 1024, int kmax = 12);

// max_x |(g(x+t) - g(x))/(g(x) - g(x-t)) - 1| per dyadic scale t = 2^-k;
// decays to 0 as t -> 0 exactly for symmetric (little-space) maps.
std::vector<std::pair<double, double>> symmetry_profile(const CircleMapLift& g,
                                                        int n = 1024, int kmax = 12);

// sup over dyadic pairs of |g'(x) - g'(y)| / |x - y|^beta
double holder_seminorm(const CircleMapLift& g, double beta, int n = 2048);

struct LiouvilleReport {
    double value = 0.0;   // cocycle L2 norm against the Liouville measure
    double band = 0.0;    // estimated mass of the excluded diagonal band
    double epsilon = 0.0; // half-width of the excluded band
    int n = 0;            // angular resolution used
};

// L2 norm of the cross-ratio distortion cocycle
//   beta(x,y) = log[ g'(x) g'(y) sin^2(pi(x-y)) / sin^2(pi(g(x)-g(y))) ]
// against dL = pi^2 dx dy / sin^2(pi(x-y)), with a diagonal band excluded and
// Richardson extrapolation in the band width. Vanishes for Moebius boundary
// maps; finite for C^3 maps since beta vanishes to second order on the
// diagonal.
LiouvilleReport liouville_norm(const CircleMapLift& g, int n = 512);

} // namespace teich
