#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace teich {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

inline cplx cis(double t) { return {std::cos(t), std::sin(t)}; }
inline double sq(double x) { return x * x; }
inline double abs2(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

// Hyperbolic densities. rho_disk on |z|<1, rho_ext on |z|>1, rho_half on Im>0.
double rho_disk(cplx z);
double rho_ext(cplx z);
double rho_half(cplx z);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// Gauss-Legendre nodes/weights on [0,1], by Newton iteration on P_n.
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Maximize h over the plane starting from z0 with initial simplex scale h0.
// Used to polish grid suprema of smooth weighted moduli; h must be finite
// everywhere it gets probed (callers clamp or return -inf outside domain).
double nelder_mead_max(const std::function<double(cplx)>& h, cplx z0, double h0,
                       int max_iter = 400);

// FNV-1a over a byte string; stable across platforms for report hashing.
std::uint64_t fnv1a(const std::string& bytes);

// Bit-exact double serialization (printf %a).
std::string hexfloat(double x);

// Monotone piecewise-cubic interpolant (Fritsch-Carlson slopes) through
// strictly increasing data. Evaluates inside [x.front(), x.back()].
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);
    double operator()(double t) const;
    double derivative(double t) const;

private:
    std::vector<double> x_, y_, m_;
    std::size_t locate(double t) const;
};

} // namespace teich
