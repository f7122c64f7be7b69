#include "teich/circle_maps.hpp"

#include "teich/errors.hpp"

#include <algorithm>
#include <cmath>

namespace teich {

namespace {

// segment data shared by the node-based builders
struct Nodes {
    std::vector<double> x, y;
    std::size_t segment(double f) const {
        auto it = std::upper_bound(x.begin(), x.end(), f);
        std::size_t k = std::size_t(it - x.begin());
        return k == 0 ? 0 : k - 1;
    }
};

Nodes prepare_nodes(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw PreconditionError("CircleMapLift: need matching node lists, at least two nodes");
    if (x.front() != 0.0)
        throw PreconditionError("CircleMapLift: first node must sit at x = 0");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]) || !(y[i] > y[i - 1]))
            throw PreconditionError("CircleMapLift: nodes must increase strictly");
    if (!(x.back() < 1.0))
        throw PreconditionError("CircleMapLift: nodes must stay inside [0,1)");
    if (!(y.back() < y.front() + 1.0))
        throw PreconditionError("CircleMapLift: periodic closure needs y_last < y_0 + 1");
    x.push_back(1.0);
    y.push_back(y.front() + 1.0);
    return {std::move(x), std::move(y)};
}

} // namespace

CircleMapLift CircleMapLift::identity() { return rotation(0.0); }

CircleMapLift CircleMapLift::rotation(double c) {
    return {[c](double x) { return x + c; }, [](double) { return 1.0; }};
}

CircleMapLift CircleMapLift::sine_family(double a, double c) {
    if (std::abs(a) >= 1.0)
        throw PreconditionError("CircleMapLift::sine_family: |a| < 1 required");
    return {[a, c](double x) { return x + c + a * std::sin(2.0 * pi * x) / (2.0 * pi); },
            [a](double x) { return 1.0 + a * std::cos(2.0 * pi * x); }};
}

CircleMapLift CircleMapLift::mobius_boundary(const MobiusMap& g) {
    if (std::abs(g.c - std::conj(g.b)) + std::abs(g.d - std::conj(g.a)) > 1e-9)
        throw PreconditionError("CircleMapLift::mobius_boundary: map must preserve the unit circle");
    cplx xi = g.b / g.a;          // |xi| < 1 since |a|^2 - |b|^2 = 1
    double base = std::arg(g.a);  // g(e^{i t}) = e^{i t} w / conj(w), w = a + b e^{-i t}
    return {[xi, base](double x) {
                cplx eta = xi * cis(-2.0 * pi * x);
                return x + (base + std::arg(1.0 + eta)) / pi;
            },
            [xi](double x) {
                cplx eta = xi * cis(-2.0 * pi * x);
                return 1.0 - 2.0 * (eta / (1.0 + eta)).real();
            }};
}

CircleMapLift CircleMapLift::piecewise_linear(std::vector<double> x, std::vector<double> y) {
    auto nd = std::make_shared<Nodes>(prepare_nodes(std::move(x), std::move(y)));
    auto slope = [nd](double f) {
        std::size_t k = nd->segment(f);
        return (nd->y[k + 1] - nd->y[k]) / (nd->x[k + 1] - nd->x[k]);
    };
    return {[nd](double x) {
                double k = std::floor(x), f = x - k;
                std::size_t s = nd->segment(f);
                double t = (f - nd->x[s]) / (nd->x[s + 1] - nd->x[s]);
                return k + nd->y[s] + t * (nd->y[s + 1] - nd->y[s]);
            },
            [slope](double x) { return slope(x - std::floor(x)); }};
}

CircleMapLift CircleMapLift::from_samples(std::vector<double> x, std::vector<double> y) {
    Nodes nd = prepare_nodes(std::move(x), std::move(y));
    auto pchip = std::make_shared<MonotoneCubic>(nd.x, nd.y);
    return {[pchip](double x) {
                double k = std::floor(x);
                return k + (*pchip)(x - k);
            },
            [pchip](double x) { return pchip->derivative(x - std::floor(x)); }};
}

CircleMapLift CircleMapLift::compose(const CircleMapLift& outer, const CircleMapLift& inner) {
    return {[outer, inner](double x) { return outer(inner(x)); },
            [outer, inner](double x) {
                return outer.derivative(inner(x)) * inner.derivative(x);
            }};
}

double CircleMapLift::derivative(double x) const {
    if (deriv_) return deriv_(x);
    double h = 1e-6;
    return (lift_(x + h) - lift_(x - h)) / (2.0 * h);
}

double CircleMapLift::inverse(double y) const {
    double lo = y - 2.0, hi = y + 2.0;
    for (int guard = 0; lift_(lo) > y && guard < 60; ++guard) lo -= 1.0;
    for (int guard = 0; lift_(hi) < y && guard < 60; ++guard) hi += 1.0;
    for (int it = 0; it < 120 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        (lift_(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double qs_quotient(const CircleMapLift& g, int n, int kmax) {
    double worst = 1.0;
    for (int k = 1; k <= kmax; ++k) {
        double t = std::pow(0.5, k);
        for (int i = 0; i < n; ++i) {
            double x = double(i) / n;
            double up = g(x + t) - g(x);
            double down = g(x) - g(x - t);
            double q = up / down;
            worst = std::max({worst, q, 1.0 / q});
        }
    }
    return worst;
}

std::vector<std::pair<double, double>> symmetry_profile(const CircleMapLift& g, int n, int kmax) {
    std::vector<std::pair<double, double>> out;
    for (int k = 1; k <= kmax; ++k) {
        double t = std::pow(0.5, k);
        double m = 0.0;
        for (int i = 0; i < n; ++i) {
            double x = double(i) / n;
            double q = (g(x + t) - g(x)) / (g(x) - g(x - t));
            m = std::max(m, std::abs(q - 1.0));
        }
        out.emplace_back(t, m);
    }
    return out;
}

double holder_seminorm(const CircleMapLift& g, double beta, int n) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw PreconditionError("holder_seminorm: beta in (0,1] required");
    double worst = 0.0;
    for (int k = 1; k <= 11; ++k) {
        double t = std::pow(0.5, k);
        double tb = std::pow(t, beta);
        for (int i = 0; i < n; ++i) {
            double x = double(i) / n;
            worst = std::max(worst, std::abs(g.derivative(x + t) - g.derivative(x)) / tb);
        }
    }
    return worst;
}

LiouvilleReport liouville_norm(const CircleMapLift& g, int n) {
    if (n < 32) throw PreconditionError("liouville_norm: resolution too small");
    std::vector<double> gv(n), gd(n);
    double h = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        double x = (i + 0.5) * h;
        gv[i] = g(x);
        gd[i] = g.derivative(x);
        if (!(gd[i] > 0.0))
            throw PreconditionError("liouville_norm: map must have positive derivative");
    }
    std::vector<double> sin2(n);
    for (int d = 0; d < n; ++d) sin2[d] = sq(std::sin(pi * d * h));
    // I(eps): integral with circular band |i-j| < band excluded
    auto stripe = [&](int band) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) {
                int d = i - j;
                int dc = std::min(d, n - d);
                if (dc < band) continue;
                double s_in = sin2[d];
                double s_out = sq(std::sin(pi * (gv[i] - gv[j])));
                double beta = std::log(gd[i] * gd[j] * s_in / s_out);
                acc += 2.0 * beta * beta * pi * pi / s_in; // (i,j) and (j,i)
            }
        }
        return acc * h * h;
    };
    double i4 = stripe(4), i8 = stripe(8);
    LiouvilleReport rep;
    rep.n = n;
    rep.epsilon = 4.0 * h;
    rep.band = std::max(0.0, i4 - i8); // Richardson correction attributed to the band
    rep.value = std::sqrt(std::max(0.0, 2.0 * i4 - i8));
    return rep;
}

} // namespace teich
