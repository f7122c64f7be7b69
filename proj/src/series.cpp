#include "teich/series.hpp"

#include "teich/errors.hpp"

#include <algorithm>
#include <cmath>

namespace teich {

LaurentSeries laurent_add(cplx a, const LaurentSeries& A, cplx b, const LaurentSeries& B) {
    if (A.c.empty()) return laurent_add(b, B, 0.0, LaurentSeries{});
    if (B.c.empty()) {
        LaurentSeries out = A;
        for (auto& v : out.c) v *= a;
        return out;
    }
    LaurentSeries out;
    out.k0 = std::min(A.k0, B.k0);
    int kmax = std::max(A.kmax(), B.kmax());
    out.c.assign(std::size_t(kmax - out.k0 + 1), 0.0);
    for (int k = out.k0; k <= kmax; ++k)
        out.c[std::size_t(k - out.k0)] = a * A.coeff(k) + b * B.coeff(k);
    return out;
}

LaurentSeries laurent_mul(const LaurentSeries& A, const LaurentSeries& B, int kmax) {
    LaurentSeries out;
    out.k0 = A.k0 + B.k0;
    if (A.c.empty() || B.c.empty() || out.k0 > kmax) return LaurentSeries{};
    out.c.assign(std::size_t(kmax - out.k0 + 1), 0.0);
    for (std::size_t i = 0; i < A.c.size(); ++i) {
        for (std::size_t j = 0; j < B.c.size(); ++j) {
            int k = A.k0 + int(i) + B.k0 + int(j);
            if (k > kmax) break;
            out.c[std::size_t(k - out.k0)] += A.c[i] * B.c[j];
        }
    }
    return out;
}

LaurentSeries laurent_div(const LaurentSeries& A, const LaurentSeries& B, int kmax) {
    if (B.c.empty() || std::abs(B.c.front()) < 1e-300)
        throw PreconditionError("laurent_div: divisor needs a nonzero leading coefficient");
    LaurentSeries out;
    out.k0 = A.k0 - B.k0;
    if (A.c.empty() || out.k0 > kmax) return LaurentSeries{};
    std::size_t n = std::size_t(kmax - out.k0 + 1);
    out.c.assign(n, 0.0);
    cplx lead = B.c.front();
    for (std::size_t j = 0; j < n; ++j) {
        cplx a = j < A.c.size() ? A.c[j] : cplx(0.0);
        cplx acc = a;
        for (std::size_t i = 0; i < j; ++i) {
            std::size_t bi = j - i;
            if (bi < B.c.size()) acc -= out.c[i] * B.c[bi];
        }
        out.c[j] = acc / lead;
    }
    return out;
}

LaurentSeries preschwarzian_series(const LaurentSeries& f, int kmax) {
    if (f.k0 < -1)
        throw PreconditionError("preschwarzian_series: map must be at most linear at infinity");
    LaurentSeries fp = f.derivative();
    if (fp.c.empty() || fp.k0 > 0 || std::abs(fp.c.front()) < 1e-300)
        throw PreconditionError("preschwarzian_series: map has vanishing derivative at infinity");
    return laurent_div(fp.derivative(), fp, kmax);
}

LaurentSeries schwarzian_series(const LaurentSeries& f, int kmax) {
    LaurentSeries N = preschwarzian_series(f, kmax + 1);
    LaurentSeries S = laurent_add(1.0, N.derivative(), -0.5, laurent_mul(N, N, kmax));
    // clip anything above z^-4: exact zeros analytically, roundoff here
    while (!S.c.empty() && S.k0 < 4) {
        S.c.erase(S.c.begin());
        ++S.k0;
    }
    LaurentSeries out = S;
    if (out.kmax() > kmax) out.c.resize(std::size_t(kmax - out.k0 + 1));
    return out;
}

LaurentFit laurent_fit(const std::function<cplx(cplx)>& f,
                       const std::vector<double>& radii, int kmax, int angles) {
    if (radii.size() < 2)
        throw PreconditionError("laurent_fit: need at least two probe circles");
    std::vector<double> rs = radii;
    std::sort(rs.begin(), rs.end());
    if (rs.front() <= 1.0)
        throw PreconditionError("laurent_fit: probe circles must lie outside the unit circle");
    // Fourier coefficients of f - z per circle: b_k = hat a_{-k} R^k for the
    // Laurent tail, plus a few positive frequencies p_m = hat a_{+m} that must
    // vanish for a function analytic in |z| > 1
    const int mpos = 8;
    std::vector<std::vector<cplx>> b(rs.size(), std::vector<cplx>(std::size_t(kmax + 1)));
    std::vector<std::vector<cplx>> p(rs.size(), std::vector<cplx>(std::size_t(mpos + 1)));
    std::vector<std::vector<cplx>> vals(rs.size(),
                                        std::vector<cplx>(static_cast<std::size_t>(angles)));
    for (std::size_t t = 0; t < rs.size(); ++t) {
        double R = rs[t];
        std::vector<cplx>& samples = vals[t];
        for (int j = 0; j < angles; ++j) {
            cplx z = R * cis(2.0 * pi * j / angles);
            samples[std::size_t(j)] = f(z) - z;
        }
        auto fourier = [&](int m) { // coefficient of e^{i m theta}
            cplx acc = 0.0;
            for (int j = 0; j < angles; ++j)
                acc += samples[std::size_t(j)] * cis(-2.0 * pi * m * j / angles);
            return acc / double(angles);
        };
        for (int k = 0; k <= kmax; ++k)
            b[t][std::size_t(k)] = fourier(-k) * std::pow(R, k);
        for (int m = 1; m <= mpos; ++m) p[t][std::size_t(m)] = fourier(m);
    }
    std::size_t mid = rs.size() / 2;
    double rin = rs.front();
    // Keep coefficients while they matter on the innermost circle AND the
    // probe radii still agree on them; a noisy evaluator makes the recovered
    // coefficients grow like (R/rin)^k past the noise crossover, so the
    // cross-radius disagreement is the reliable truncation signal.
    int keep = -1, below = 0;
    for (int k = 0; k <= kmax && below < 12; ++k) {
        double mag = std::abs(b[mid][std::size_t(k)]) * std::pow(rin, -k);
        double dis = 0.0;
        for (std::size_t t = 0; t < rs.size(); ++t) {
            if (t == mid) continue;
            dis = std::max(dis, std::abs(b[t][std::size_t(k)] - b[mid][std::size_t(k)]) *
                                    std::pow(rin, -k));
        }
        bool agreed = dis <= 0.5 * mag + 1e-13;
        if (!agreed && k <= 4 && mag > 1e-6)
            throw AccuracyError("laurent_fit: probe circles disagree on leading "
                                "coefficients");
        if (mag >= 1e-12 && agreed) {
            keep = k;
            below = 0;
        } else {
            ++below;
        }
    }
    LaurentFit out;
    out.map.k0 = -1;
    out.map.c.assign(std::size_t(keep + 2), 0.0);
    out.map.c[0] = 1.0;
    for (int k = 0; k <= keep; ++k) out.map.c[std::size_t(k + 1)] = b[mid][std::size_t(k)];
    for (std::size_t t = 0; t < rs.size(); ++t) {
        for (int m = 1; m <= mpos; ++m)
            out.crossval = std::max(out.crossval, std::abs(p[t][std::size_t(m)]));
        // coefficient agreement across radii, only while the radius-ratio
        // amplification of angular roundoff stays negligible
        if (t != mid) {
            for (int k = 0; k <= std::min({kmax, keep + 8, 24}); ++k) {
                double d = std::abs(b[t][std::size_t(k)] - b[mid][std::size_t(k)]) *
                           std::pow(rin, -k);
                out.crossval = std::max(out.crossval, d);
            }
        }
        // value-space check: the fitted tail must reproduce the samples
        double R = rs[t];
        for (int j = 0; j < angles; j += 8) {
            cplx z = R * cis(2.0 * pi * j / angles);
            cplx tail = out.map.eval(z) - z;
            out.crossval = std::max(out.crossval,
                                    std::abs(tail - vals[t][std::size_t(j)]));
        }
    }
    return out;
}

} // namespace teich
