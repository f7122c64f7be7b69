#include "teich/numeric.hpp"

#include "teich/errors.hpp"

#include <algorithm>
#include <cstdio>

namespace teich {

double rho_disk(cplx z) {
    double m = abs2(z);
    if (m >= 1.0) throw DomainError("rho_disk: point not inside the unit disk");
    return 2.0 / (1.0 - m);
}

double rho_ext(cplx z) {
    double m = abs2(z);
    if (m <= 1.0) throw DomainError("rho_ext: point not in the exterior disk");
    return 2.0 / (m - 1.0);
}

double rho_half(cplx z) {
    if (z.imag() <= 0.0) throw DomainError("rho_half: point not in the upper half-plane");
    return 1.0 / z.imag();
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw PreconditionError("fit_slope: need >= 2 paired points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw PreconditionError("fit_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw PreconditionError("gauss_legendre_01: n >= 1 required");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess for the i-th root of P_n on [-1,1].
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
}

double nelder_mead_max(const std::function<double(cplx)>& h, cplx z0, double h0,
                       int max_iter) {
    auto f = [&](double x, double y) { return -h(cplx(x, y)); };
    double px[3] = {z0.real(), z0.real() + h0, z0.real()};
    double py[3] = {z0.imag(), z0.imag(), z0.imag() + h0};
    double fv[3];
    for (int i = 0; i < 3; ++i) fv[i] = f(px[i], py[i]);
    for (int it = 0; it < max_iter; ++it) {
        int lo = 0, hi = 0;
        for (int i = 1; i < 3; ++i) {
            if (fv[i] < fv[lo]) lo = i;
            if (fv[i] > fv[hi]) hi = i;
        }
        int mid = 3 - lo - hi;
        if (lo == hi) mid = (lo + 1) % 3;
        double size = std::max(std::hypot(px[0] - px[1], py[0] - py[1]),
                               std::hypot(px[0] - px[2], py[0] - py[2]));
        if (size < 1e-12) break;
        double cx = 0.5 * (px[lo] + px[mid]), cy = 0.5 * (py[lo] + py[mid]);
        double rx = cx + (cx - px[hi]), ry = cy + (cy - py[hi]);
        double fr = f(rx, ry);
        if (fr < fv[lo]) {
            double ex = cx + 2.0 * (cx - px[hi]), ey = cy + 2.0 * (cy - py[hi]);
            double fe = f(ex, ey);
            if (fe < fr) {
                px[hi] = ex; py[hi] = ey; fv[hi] = fe;
            } else {
                px[hi] = rx; py[hi] = ry; fv[hi] = fr;
            }
        } else if (fr < fv[mid]) {
            px[hi] = rx; py[hi] = ry; fv[hi] = fr;
        } else {
            double kx = cx + 0.5 * (px[hi] - cx), ky = cy + 0.5 * (py[hi] - cy);
            double fk = f(kx, ky);
            if (fk < fv[hi]) {
                px[hi] = kx; py[hi] = ky; fv[hi] = fk;
            } else {
                for (int i = 0; i < 3; ++i) {
                    if (i == lo) continue;
                    px[i] = 0.5 * (px[i] + px[lo]);
                    py[i] = 0.5 * (py[i] + py[lo]);
                    fv[i] = f(px[i], py[i]);
                }
            }
        }
    }
    double best = fv[0];
    for (int i = 1; i < 3; ++i) best = std::min(best, fv[i]);
    return -best;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hexfloat(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw PreconditionError("MonotoneCubic: need >= 2 paired points");
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double hx = x_[i + 1] - x_[i];
        if (hx <= 0) throw ValidationError("MonotoneCubic: abscissae not increasing");
        d[i] = (y_[i + 1] - y_[i]) / hx;
        if (d[i] < 0) throw ValidationError("MonotoneCubic: data not monotone");
    }
    m_.assign(n, 0.0);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
        m_[i] = (d[i - 1] * d[i] <= 0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    // Fritsch-Carlson limiter keeps the cubic monotone on each cell.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m_[i] = m_[i + 1] = 0.0;
            continue;
        }
        double a = m_[i] / d[i], b = m_[i + 1] / d[i];
        double s = a * a + b * b;
        if (s > 9.0) {
            double t = 3.0 / std::sqrt(s);
            m_[i] = t * a * d[i];
            m_[i + 1] = t * b * d[i];
        }
    }
}

std::size_t MonotoneCubic::locate(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double MonotoneCubic::operator()(double t) const {
    std::size_t i = locate(t);
    double hx = x_[i + 1] - x_[i];
    double s = (t - x_[i]) / hx;
    double h00 = (1 + 2 * s) * sq(1 - s), h10 = s * sq(1 - s);
    double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * y_[i] + hx * h10 * m_[i] + h01 * y_[i + 1] + hx * h11 * m_[i + 1];
}

double MonotoneCubic::derivative(double t) const {
    std::size_t i = locate(t);
    double hx = x_[i + 1] - x_[i];
    double s = (t - x_[i]) / hx;
    double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
    double d01 = 6 * s - 6 * s * s, d11 = 3 * s * s - 2 * s;
    return (d00 * y_[i] + hx * d10 * m_[i] + d01 * y_[i + 1] + hx * d11 * m_[i + 1]) / hx;
}

} // namespace teich
