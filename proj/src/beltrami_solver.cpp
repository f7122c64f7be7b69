#include "teich/beltrami_solver.hpp"

#include "teich/errors.hpp"
#include "teich/moebius.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

namespace teich {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct FftBuffer {
    fftw_complex* p;
    explicit FftBuffer(std::size_t m)
        : p(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m))) {
        if (!p) throw std::bad_alloc();
    }
    ~FftBuffer() { fftw_free(p); }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;
    cplx* c() { return reinterpret_cast<cplx*>(p); }
};

// Out-of-place plans a -> b in both directions; callers refill a.
struct Fft {
    int n;
    FftBuffer a, b;
    fftw_plan fwd, bwd;
    explicit Fft(int n_)
        : n(n_), a(std::size_t(n_) * n_), b(std::size_t(n_) * n_) {
        fwd = fftw_plan_dft_2d(n, n, a.p, b.p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_2d(n, n, a.p, b.p, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw Error("internal", "fft planning failed");
    }
    ~Fft() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
};

struct Lattice {
    int n = 0;
    double L = 0, h = 0;
    cplx point(int jx, int jy) const { return {-L + jx * h, -L + jy * h}; }
    std::size_t cells() const { return std::size_t(n) * n; }

    // Catmull-Rom in both axes: reproduces quadratics exactly, which keeps
    // the trace measurement from spoiling the profile-span cancellation.
    cplx interp(const std::vector<cplx>& F, cplx z) const {
        double u = (z.real() + L) / h;
        double v = (z.imag() + L) / h;
        int ju = std::clamp(int(std::floor(u)), 0, n - 2);
        int jv = std::clamp(int(std::floor(v)), 0, n - 2);
        double du = u - ju, dv = v - jv;
        double wx[4], wy[4];
        cr_weights(du, wx);
        cr_weights(dv, wy);
        cplx acc = 0.0;
        for (int q = 0; q < 4; ++q) {
            int row = std::clamp(jv - 1 + q, 0, n - 1);
            const cplx* p = F.data() + std::size_t(row) * n;
            cplx s = 0.0;
            for (int r = 0; r < 4; ++r) s += wx[r] * p[std::clamp(ju - 1 + r, 0, n - 1)];
            acc += wy[q] * s;
        }
        return acc;
    }

    static void cr_weights(double t, double w[4]) {
        double t2 = t * t, t3 = t2 * t;
        w[0] = 0.5 * (-t + 2 * t2 - t3);
        w[1] = 0.5 * (2 - 5 * t2 + 3 * t3);
        w[2] = 0.5 * (t + 4 * t2 - 3 * t3);
        w[3] = 0.5 * (t3 - t2);
    }
};

// Small dense complex solve, partial pivoting. A is m x m row major and is
// destroyed; b holds the solution on return.
void dense_solve(std::vector<cplx>& A, std::vector<cplx>& b, int m) {
    for (int col = 0; col < m; ++col) {
        int piv = col;
        double best = std::abs(A[std::size_t(col) * m + col]);
        for (int r = col + 1; r < m; ++r) {
            double v = std::abs(A[std::size_t(r) * m + col]);
            if (v > best) { best = v; piv = r; }
        }
        if (best < 1e-14)
            throw Error("internal", "moment correction system is singular");
        if (piv != col) {
            for (int c = col; c < m; ++c)
                std::swap(A[std::size_t(piv) * m + c], A[std::size_t(col) * m + c]);
            std::swap(b[piv], b[col]);
        }
        cplx d = A[std::size_t(col) * m + col];
        for (int r = col + 1; r < m; ++r) {
            cplx f = A[std::size_t(r) * m + col] / d;
            if (f == cplx(0.0)) continue;
            for (int c = col; c < m; ++c)
                A[std::size_t(r) * m + c] -= f * A[std::size_t(col) * m + c];
            b[r] -= f * b[col];
        }
    }
    for (int r = m - 1; r >= 0; --r) {
        cplx s = b[r];
        for (int c = r + 1; c < m; ++c) s -= A[std::size_t(r) * m + c] * b[c];
        b[r] = s / A[std::size_t(r) * m + r];
    }
}

// Subtraction coefficients for one source: beta[T+m] multiplies the trace
// profile (z^m for m>=1, conj(z)^{-m} for m<=0), a[k] the moment profile
// c_k conj(z)^k (1-|z|^2).
struct Corrections {
    std::vector<cplx> beta;
    std::vector<cplx> a;
};

// Closed-form transforms of the subtracted profiles, interior branch.
void corr_in(const Corrections& cor, int T, int J, cplx z, cplx& S, cplx& C) {
    cplx zb = std::conj(z);
    double r2 = std::norm(z);
    cplx Sa = 0.0, Ca = 0.0;
    cplx zpm1 = 1.0, zpm2 = 0.0;
    for (int m = 1; m <= T; ++m) {
        cplx bm = cor.beta[T + m];
        Ca += bm * zpm1 * (r2 - 1.0);
        Sa += bm * (double(m) * zpm1 * zb - double(m - 1) * zpm2);
        zpm2 = zpm1;
        zpm1 *= z;
    }
    cplx zbp = zb;
    for (int nn = 0; nn <= T; ++nn) {
        Ca += cor.beta[T - nn] * zbp / double(nn + 1);
        zbp *= zb;
    }
    cplx zbk1 = zb;
    for (int k = 0; k <= J; ++k) {
        double ck = double(k + 1) * double(k + 2) / kPi;
        cplx zbk2 = zbk1 * zb;
        Ca += cor.a[k] * ck * (zbk1 / double(k + 1) - z * zbk2 / double(k + 2));
        Sa -= cor.a[k] * (ck / double(k + 2)) * zbk2;
        zbk1 = zbk2;
    }
    S = Sa;
    C = Ca;
}

// Exterior branch; the z^m profiles transform to zero outside.
void corr_out(const Corrections& cor, int T, int J, cplx z, cplx& S, cplx& C) {
    cplx iz = 1.0 / z;
    cplx Sa = 0.0, Ca = 0.0;
    cplx izn1 = iz;
    for (int nn = 0; nn <= T; ++nn) {
        cplx bm = cor.beta[T - nn];
        Ca += bm * izn1 / double(nn + 1);
        Sa -= bm * izn1 * iz;
        izn1 *= iz;
    }
    cplx izk1 = iz;
    for (int k = 0; k <= J; ++k) {
        Ca += cor.a[k] * izk1 / kPi;
        Sa -= cor.a[k] * (double(k + 1) / kPi) * (izk1 * iz);
        izk1 *= iz;
    }
    S = Sa;
    C = Ca;
}

class Engine {
public:
    Engine(const SolverConfig& cfg) : cfg_(cfg) {
        if (cfg.n < 128 || cfg.n % 2 != 0)
            throw ValidationError("solver lattice must be even and at least 128");
        if (!(cfg.box > 1.5))
            throw ValidationError("solver box must exceed the coefficient support");
        if (cfg.trace_modes < 0 || cfg.moment_modes < 0)
            throw ValidationError("correction mode counts must be nonnegative");
        lat_.n = cfg.n;
        lat_.L = cfg.box;
        lat_.h = 2.0 * cfg.box / cfg.n;
        T_ = cfg.trace_modes;
        J_ = cfg.moment_modes;
        // Quadratic extrapolation of the angular trace to the circle, from
        // three interior rings; exact for radial profiles up to degree two,
        // and it never introduces a jump for sources vanishing at the circle.
        ring_r_ = {1.0 - 3.0 * lat_.h, 1.0 - 5.0 * lat_.h, 1.0 - 7.0 * lat_.h};
        ring_w_ = {4.375, -5.25, 1.875};
        if (ring_r_.back() <= 0.6)
            throw ValidationError("lattice too coarse for the trace rings");
        build_mask();
        build_multipliers();
        build_gram();
        fft_ = std::make_unique<Fft>(cfg.n);
        scratch_.resize(lat_.cells());
    }

    const Lattice& lattice() const { return lat_; }
    const std::vector<std::size_t>& mask() const { return mask_; }
    const std::vector<cplx>& mask_points() const { return mz_; }

    // Replaces w (full lattice, supported on the mask) by the twice-reduced
    // remainder and returns the subtracted coefficients. The remainder has
    // exactly zero discrete moments through degree J.
    Corrections reduce(std::vector<cplx>& w) const {
        Corrections cor;
        cor.beta.assign(2 * T_ + 1, cplx(0.0));
        cor.a.assign(J_ + 1, cplx(0.0));

        const int M = std::max(256, 8 * T_);
        std::vector<cplx> ring(M);
        for (std::size_t q = 0; q < ring_r_.size(); ++q) {
            for (int k = 0; k < M; ++k) {
                double th = 2.0 * kPi * k / M;
                ring[k] = lat_.interp(w, ring_r_[q] * cplx(std::cos(th), std::sin(th)));
            }
            for (int m = -T_; m <= T_; ++m) {
                cplx t = 0.0;
                for (int k = 0; k < M; ++k) {
                    double th = 2.0 * kPi * m * k / M;
                    t += ring[k] * cplx(std::cos(th), -std::sin(th));
                }
                cor.beta[T_ + m] += ring_w_[q] * t / double(M);
            }
        }
        for (std::size_t i = 0; i < mask_.size(); ++i) {
            cplx z = mz_[i];
            cplx zb = std::conj(z);
            cplx acc = cor.beta[T_];
            cplx zp = z, zbp = zb;
            for (int m = 1; m <= T_; ++m) {
                acc += cor.beta[T_ + m] * zp + cor.beta[T_ - m] * zbp;
                zp *= z;
                zbp *= zb;
            }
            w[mask_[i]] -= acc;
        }

        std::vector<cplx> mom(J_ + 1, cplx(0.0));
        const double cell = lat_.h * lat_.h;
        for (std::size_t i = 0; i < mask_.size(); ++i) {
            cplx p = w[mask_[i]] * cell;
            for (int j = 0; j <= J_; ++j) {
                mom[j] += p;
                p *= mz_[i];
            }
        }
        std::vector<cplx> G = gram_;
        dense_solve(G, mom, J_ + 1);
        cor.a = mom;
        for (std::size_t i = 0; i < mask_.size(); ++i) {
            cplx acc = 0.0;
            for (int k = 0; k <= J_; ++k) acc += cor.a[k] * psi_[k][i];
            w[mask_[i]] -= acc;
        }
        return cor;
    }

    // Torus transforms of the reduced remainder, with the additive constant
    // calibrated against the corner blocks where the plane transform of a
    // moment-free boundary-flat source is negligible.
    void spectral_S(const std::vector<cplx>& w2, std::vector<cplx>& S, cplx& cS) {
        cplx* a = fft_->a.c();
        cplx* b = fft_->b.c();
        std::copy(w2.begin(), w2.end(), a);
        fftw_execute(fft_->fwd);
        const double inv = 1.0 / double(lat_.cells());
        for (std::size_t i = 0; i < lat_.cells(); ++i) a[i] = b[i] * mulS_[i] * inv;
        fftw_execute(fft_->bwd);
        S.assign(b, b + lat_.cells());
        cS = corner_mean(S);
    }

    void spectral_SC(const std::vector<cplx>& w2, std::vector<cplx>& S, cplx& cS,
                     std::vector<cplx>& C, cplx& cC) {
        cplx* a = fft_->a.c();
        cplx* b = fft_->b.c();
        std::copy(w2.begin(), w2.end(), a);
        fftw_execute(fft_->fwd);
        std::vector<cplx>& spec = scratch_;
        std::copy(b, b + lat_.cells(), spec.begin());
        const double inv = 1.0 / double(lat_.cells());
        for (std::size_t i = 0; i < lat_.cells(); ++i) a[i] = spec[i] * mulS_[i] * inv;
        fftw_execute(fft_->bwd);
        S.assign(b, b + lat_.cells());
        cS = corner_mean(S);
        for (std::size_t i = 0; i < lat_.cells(); ++i) a[i] = spec[i] * mulC_[i] * inv;
        fftw_execute(fft_->bwd);
        C.assign(b, b + lat_.cells());
        cC = corner_mean(C);
    }

    void corrections_in(const Corrections& cor, cplx z, cplx& S, cplx& C) const {
        corr_in(cor, T_, J_, z, S, C);
    }

    void corrections_out(const Corrections& cor, cplx z, cplx& S, cplx& C) const {
        corr_out(cor, T_, J_, z, S, C);
    }

    // Moments of the reduced remainder feed the exterior Laurent tail.
    std::vector<cplx> residual_moments(const std::vector<cplx>& w2, int count) const {
        std::vector<cplx> mom(count, cplx(0.0));
        const double cell = lat_.h * lat_.h;
        for (std::size_t i = 0; i < mask_.size(); ++i) {
            cplx p = w2[mask_[i]] * cell;
            for (int k = 0; k < count; ++k) {
                mom[k] += p;
                p *= mz_[i];
            }
        }
        return mom;
    }

    int trace_modes() const { return T_; }
    int moment_modes() const { return J_; }

private:
    void build_mask() {
        mask_.clear();
        mz_.clear();
        for (int jy = 0; jy < lat_.n; ++jy)
            for (int jx = 0; jx < lat_.n; ++jx) {
                cplx z = lat_.point(jx, jy);
                if (std::abs(z) < 1.0) {
                    mask_.push_back(std::size_t(jy) * lat_.n + jx);
                    mz_.push_back(z);
                }
            }
        psi_.assign(J_ + 1, std::vector<cplx>(mask_.size()));
        for (int k = 0; k <= J_; ++k) {
            double ck = double(k + 1) * double(k + 2) / kPi;
            for (std::size_t i = 0; i < mask_.size(); ++i) {
                cplx zb = std::conj(mz_[i]);
                cplx p = 1.0;
                for (int q = 0; q < k; ++q) p *= zb;
                psi_[k][i] = ck * p * (1.0 - std::norm(mz_[i]));
            }
        }
    }

    void build_multipliers() {
        const int n = lat_.n;
        mulS_.resize(lat_.cells());
        mulC_.resize(lat_.cells());
        for (int jy = 0; jy < n; ++jy) {
            int my = jy < n / 2 ? jy : jy - n;
            for (int jx = 0; jx < n; ++jx) {
                int mx = jx < n / 2 ? jx : jx - n;
                std::size_t i = std::size_t(jy) * n + jx;
                if (mx == 0 && my == 0) {
                    mulS_[i] = 0.0;
                    mulC_[i] = 0.0;
                    continue;
                }
                cplx kappa = kPi / lat_.L * cplx(double(mx), double(my));
                mulS_[i] = std::conj(kappa) / kappa;
                mulC_[i] = cplx(0.0, -2.0) / kappa;
            }
        }
    }

    void build_gram() {
        const int m = J_ + 1;
        gram_.assign(std::size_t(m) * m, cplx(0.0));
        const double cell = lat_.h * lat_.h;
        for (std::size_t i = 0; i < mask_.size(); ++i) {
            for (int k = 0; k < m; ++k) {
                cplx p = psi_[k][i] * cell;
                for (int j = 0; j < m; ++j) {
                    gram_[std::size_t(j) * m + k] += p;
                    p *= mz_[i];
                }
            }
        }
    }

    cplx corner_mean(const std::vector<cplx>& F) const {
        const int n = lat_.n, w = 5;
        cplx s = 0.0;
        int cnt = 0;
        for (int jy : {0, n - w})
            for (int jx : {0, n - w})
                for (int dy = 0; dy < w; ++dy)
                    for (int dx = 0; dx < w; ++dx) {
                        s += F[std::size_t(jy + dy) * n + (jx + dx)];
                        ++cnt;
                    }
        return s / double(cnt);
    }

    SolverConfig cfg_;
    Lattice lat_;
    int T_ = 0, J_ = 0;
    std::vector<double> ring_r_;
    std::vector<double> ring_w_;
    std::vector<std::size_t> mask_;
    std::vector<cplx> mz_;
    std::vector<std::vector<cplx>> psi_;
    std::vector<cplx> gram_;
    std::vector<cplx> mulS_, mulC_;
    std::unique_ptr<Fft> fft_;
    mutable std::vector<cplx> scratch_;
};

} // namespace

struct PrincipalMap::Impl {
    SolverConfig cfg;
    double scale = 1.0; // original support radius
    Lattice lat;
    // The torus transforms of the reduced remainder are stored as smooth grids
    // and the non-smooth profile parts are re-added in closed form per query,
    // so interpolation never straddles the gradient kink at the circle.
    std::vector<cplx> c_grid; // calibrated C transform of the remainder
    std::vector<cplx> s_grid; // calibrated S transform of the remainder
    Corrections cor;
    int T = 0, J = 0;
    std::function<cplx(cplx)> mu_scaled; // coefficient in lattice coordinates
    LaurentSeries map_series;            // original coordinates, with identity term
    LaurentSeries map_deriv;
    int iterations = 0;
    double resid = 0.0;
    std::vector<double> trace;
};

PrincipalMap PrincipalMap::solve(const BeltramiField& mu, const SolverConfig& cfg) {
    if (!(cfg.support_radius > 0.0) || cfg.support_radius > 1.0)
        throw ValidationError("support radius must lie in (0, 1] for disk coefficients");
    // captured by value: the map stores the sampler beyond this call
    return solve_principal_raw([mu](cplx z) { return mu.eval(z); },
                               cfg.support_radius, cfg);
}

PrincipalMap solve_principal_raw(const std::function<cplx(cplx)>& mu,
                                 double support_radius, const SolverConfig& cfg) {
    double Rs = support_radius;
    if (!(Rs > 0.0) || Rs > 2.0)
        throw ValidationError("support radius must lie in (0, 2]");

    SolverConfig icfg = cfg;
    icfg.support_radius = 1.0;
    Engine eng(icfg);
    const Lattice& lat = eng.lattice();
    const auto& mask = eng.mask();
    const auto& mz = eng.mask_points();

    std::vector<cplx> muhat(mask.size());
    double supnorm = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        muhat[i] = mu(Rs * mz[i]);
        supnorm = std::max(supnorm, std::abs(muhat[i]));
    }
    if (supnorm >= 1.0 - 1e-12)
        throw ValidationError("coefficient reaches modulus one on the lattice");

    auto impl = std::make_shared<PrincipalMap::Impl>();
    impl->cfg = cfg;
    impl->cfg.support_radius = Rs;
    impl->scale = Rs;
    impl->lat = lat;

    std::vector<cplx> omega(lat.cells(), cplx(0.0));
    for (std::size_t i = 0; i < mask.size(); ++i) omega[mask[i]] = muhat[i];

    const double tau = supnorm > cfg.relax_threshold ? cfg.relax : 1.0;
    std::vector<cplx> work, Sres;
    Corrections cor;
    cplx cS = 0.0;
    bool converged = false;
    const double cell = lat.h * lat.h;

    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        work = omega;
        cor = eng.reduce(work);
        eng.spectral_S(work, Sres, cS);
        double delta2 = 0.0;
        for (std::size_t i = 0; i < mask.size(); ++i) {
            cplx z = mz[i];
            cplx Sc, Cc;
            eng.corrections_in(cor, z, Sc, Cc);
            cplx Stot = Sres[mask[i]] - cS + Sc;
            cplx next = muhat[i] * (1.0 + Stot);
            cplx blended = (1.0 - tau) * omega[mask[i]] + tau * next;
            delta2 += std::norm(blended - omega[mask[i]]) * cell;
            omega[mask[i]] = blended;
        }
        impl->iterations = iter;
        impl->resid = std::sqrt(delta2);
        impl->trace.push_back(impl->resid);
        if (impl->resid < cfg.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("principal solution iteration did not reach tolerance",
                               impl->trace);

    // Final assembly: both transforms of the converged source plus the
    // analytic parts, on the whole lattice and as an exterior series.
    work = omega;
    cor = eng.reduce(work);
    std::vector<cplx> Cres;
    cplx cC = 0.0;
    eng.spectral_SC(work, Sres, cS, Cres, cC);
    std::vector<cplx> resmom = eng.residual_moments(work, cfg.series_terms);

    impl->c_grid.resize(lat.cells());
    impl->s_grid.resize(lat.cells());
    for (std::size_t i = 0; i < lat.cells(); ++i) {
        impl->c_grid[i] = Cres[i] - cC;
        impl->s_grid[i] = Sres[i] - cS;
    }
    impl->cor = cor;
    impl->T = eng.trace_modes();
    impl->J = eng.moment_modes();
    impl->mu_scaled = [mu, Rs](cplx zi) { return mu(Rs * zi); };

    // Exterior Laurent coefficients in the original coordinates. The tail
    // coefficient at z^{-k-1} collects the moment profile, the conj-power
    // trace profile, and the residual moments of the remainder.
    const int nb = cfg.series_terms;
    LaurentSeries ser;
    ser.k0 = -1;
    ser.c.assign(std::size_t(nb) + 2, cplx(0.0));
    ser.c[0] = 1.0; // the identity part
    for (int k = 0; k < nb; ++k) {
        cplx ck = resmom[k] / kPi;
        if (k <= eng.moment_modes()) ck += cor.a[k] / kPi;
        if (k <= eng.trace_modes()) ck += cor.beta[eng.trace_modes() - k] / double(k + 1);
        ser.c[std::size_t(k) + 2] = ck * std::pow(Rs, k + 2);
    }
    impl->map_series = ser.truncated(1e-300);
    impl->map_deriv = impl->map_series.derivative();

    PrincipalMap out;
    out.impl_ = impl;
    return out;
}

cplx PrincipalMap::f(cplx z) const {
    const Impl& im = *impl_;
    cplx zi = z / im.scale;
    if (std::abs(zi) >= 1.0) return im.map_series.eval(z);
    cplx Sc, Cc;
    corr_in(im.cor, im.T, im.J, zi, Sc, Cc);
    return im.scale * (zi + im.lat.interp(im.c_grid, zi) + Cc);
}

cplx PrincipalMap::df(cplx z) const {
    const Impl& im = *impl_;
    cplx zi = z / im.scale;
    if (std::abs(zi) >= 1.0) return im.map_deriv.eval(z);
    cplx Sc, Cc;
    corr_in(im.cor, im.T, im.J, zi, Sc, Cc);
    return 1.0 + im.lat.interp(im.s_grid, zi) + Sc;
}

cplx PrincipalMap::f_from_grid(cplx z) const {
    const Impl& im = *impl_;
    cplx zi = z / im.scale;
    double margin = im.lat.L - 2 * im.lat.h;
    if (std::abs(zi.real()) > margin || std::abs(zi.imag()) > margin)
        throw DomainError("grid query outside the solver box");
    cplx Sc, Cc;
    if (std::abs(zi) < 1.0)
        corr_in(im.cor, im.T, im.J, zi, Sc, Cc);
    else
        corr_out(im.cor, im.T, im.J, zi, Sc, Cc);
    return im.scale * (zi + im.lat.interp(im.c_grid, zi) + Cc);
}

cplx PrincipalMap::dfbar(cplx z) const {
    const Impl& im = *impl_;
    cplx zi = z / im.scale;
    if (std::abs(zi) >= 1.0) return 0.0;
    // d_zbar f = mu d_z f holds for the discrete solution identically
    return im.mu_scaled(zi) * df(z);
}

cplx PrincipalMap::inverse(cplx w) const {
    // Plain damped Newton. A preimage sitting on the support circle makes the
    // iterates straddle the interior grid and the exterior series, which agree
    // only up to interpolation error there; that shows up as a stall, handled
    // by a second pass confined to the closed exterior where the series is
    // smooth up to the circle itself.
    double rs = impl_->scale;
    double tol = 1e-12 * (1.0 + std::abs(w));
    cplx z = w, zbest = w;
    double fbest = 1e300;
    int stagnant = 0;
    for (int it = 0; it < 80; ++it) {
        cplx F = f(z) - w;
        double a = std::abs(F);
        if (a < fbest) {
            fbest = a;
            zbest = z;
            stagnant = 0;
        } else if (++stagnant >= 4) {
            break;
        }
        if (a < tol) return z;
        cplx fz = df(z), fzb = dfbar(z);
        double det = std::norm(fz) - std::norm(fzb);
        if (det < 1e-12)
            throw ConvergenceError("degenerate jacobian while inverting the map", {});
        cplx delta = (fzb * std::conj(F) - std::conj(fz) * F) / det;
        double step = std::abs(delta);
        if (step > 0.5) delta *= 0.5 / step;
        z += delta;
    }
    if (std::abs(std::abs(zbest) - rs) < 0.1 * rs) {
        double pin = rs * (1.0 + 1e-13);
        z = zbest;
        if (std::abs(z) < pin) z *= pin / std::abs(z);
        for (int it = 0; it < 60; ++it) {
            cplx F = f(z) - w;
            double a = std::abs(F);
            if (a < fbest) {
                fbest = a;
                zbest = z;
            }
            if (a < tol) return z;
            cplx fz = df(z);
            if (std::abs(fz) < 1e-12)
                throw ConvergenceError("degenerate jacobian while inverting the map", {});
            cplx delta = -F / fz;
            double step = std::abs(delta);
            if (step > 0.5) delta *= 0.5 / step;
            z += delta;
            if (std::abs(z) < pin) z *= pin / std::abs(z);
        }
    }
    // third pass: the plain iteration can jump across the support-circle
    // seam, where interpolation noise corrupts the Newton direction; walk
    // from the best point found with short damped steps instead
    z = zbest;
    for (int it = 0; it < 600; ++it) {
        cplx F = f(z) - w;
        double a = std::abs(F);
        if (a < fbest) {
            fbest = a;
            zbest = z;
        }
        if (a < tol) return z;
        cplx fz = df(z), fzb = dfbar(z);
        double det = std::norm(fz) - std::norm(fzb);
        if (det < 1e-12) break;
        cplx delta = (fzb * std::conj(F) - std::conj(fz) * F) / det;
        double step = std::abs(delta);
        double cap2 = 0.01 * (1.0 + std::abs(w));
        if (step > cap2) delta *= cap2 / step;
        z += delta;
    }
    // a preimage sitting on the support circle cannot beat the seam gap
    // between the interior grid and the exterior series, which reaches
    // O(h^{3/2}) for coefficients that only decay like a root at the circle;
    // a stall at that level is the preimage to grid accuracy
    double h = 2.0 * impl_->cfg.box / impl_->cfg.n;
    double seam = std::max(1e-5, 0.1 * std::pow(h, 1.5));
    if (fbest <= seam * (1.0 + std::abs(w))) return zbest;
    throw ConvergenceError("map inversion did not converge", {});
}

const LaurentSeries& PrincipalMap::exterior_series() const { return impl_->map_series; }
int PrincipalMap::iterations() const { return impl_->iterations; }
double PrincipalMap::residual() const { return impl_->resid; }
const std::vector<double>& PrincipalMap::residual_trace() const { return impl_->trace; }
const SolverConfig& PrincipalMap::config() const { return impl_->cfg; }

namespace {

// G = 1/W(1/z): holomorphic on the disk, carries the reflected coefficient
// on the exterior. W is analytic outside the circle, so the derivative
// formulas below never mix branches.
cplx g_value(const PrincipalMap& W, cplx z) {
    if (std::abs(z) < 1e-140) return 0.0;
    return 1.0 / W.f(1.0 / z);
}

cplx g_inverse(const PrincipalMap& W, cplx w) {
    if (std::abs(w) < 1e-140) return 0.0;
    return 1.0 / W.inverse(1.0 / w);
}

void g_derivs(const PrincipalMap& W, cplx z, cplx& dG, cplx& dGbar) {
    if (std::abs(z) < 1e-120) {
        dG = 1.0; // z^2 W(1/z)^2 -> 1 and dW -> 1 at infinity
        dGbar = 0.0;
        return;
    }
    cplx u = 1.0 / z;
    cplx Wu = W.f(u);
    cplx ww = Wu * Wu;
    dG = W.df(u) / (z * z * ww);
    dGbar = W.dfbar(u) / (std::conj(z * z) * ww);
}

} // namespace

struct DiskSelfmap::Impl {
    PrincipalMap W; // reflected coefficient, transplanted to the disk
    PrincipalMap K; // image coefficient on G(D)
    MobiusMap B;    // normalization fixing 0, 1, infinity
    double defect = 0.0;
};

DiskSelfmap DiskSelfmap::solve(const BeltramiField& mu, const SolverConfig& cfg,
                               double symmetry_gate) {
    PrincipalMap W = solve_principal_raw(
        [mu](cplx z) { return std::conj(mu.eval(std::conj(z))); }, 1.0, cfg);

    // radius covering G(D); its boundary is exactly the image of the circle
    double RK = 0.0;
    for (int j = 0; j < 256; ++j) {
        double th = 2.0 * kPi * (j + 0.5) / 256;
        RK = std::max(RK, std::abs(g_value(W, cplx(std::cos(th), std::sin(th)))));
    }
    RK *= 1.02;
    if (RK > 2.0)
        throw AccuracyError("image of the disk under G exceeds the solver reach");

    auto kappa = [mu, W](cplx w) -> cplx {
        cplx z = g_inverse(W, w);
        if (std::abs(z) >= 1.0) return cplx(0.0);
        if (std::abs(z) < 1e-20) return mu.eval(cplx(0.0));
        cplx dG, dGbar;
        g_derivs(W, z, dG, dGbar);
        return mu.eval(z) * dG / std::conj(dG);
    };
    PrincipalMap K = solve_principal_raw(kappa, RK, cfg);

    cplx F0 = K.f(cplx(0.0));
    cplx F1 = K.f(g_value(W, cplx(1.0)));
    cplx W0 = W.f(cplx(0.0));
    MobiusMap B = MobiusMap::identity();
    if (std::abs(W0) < 1e-10) {
        // G fixes infinity, so an affine normalization suffices
        B = MobiusMap::from_coeffs(1.0, -F0, 0.0, F1 - F0);
    } else {
        cplx Finf = K.f(1.0 / W0);
        B = MobiusMap::from_coeffs(F1 - Finf, -F0 * (F1 - Finf),
                                   F1 - F0, -Finf * (F1 - F0));
    }

    auto impl = std::make_shared<Impl>();
    impl->W = W;
    impl->K = K;
    impl->B = B;

    DiskSelfmap out;
    out.impl_ = impl;

    // commutation with z -> 1/conj(z), measured where both sides are tame
    double defect = 0.0;
    for (double r : {0.55, 0.8}) {
        for (int j = 0; j < 32; ++j) {
            double th = 2.0 * kPi * (j + 0.37) / 32;
            cplx z = r * cplx(std::cos(th), std::sin(th));
            cplx lhs = out.f(1.0 / std::conj(z));
            cplx rhs = 1.0 / std::conj(out.f(z));
            defect = std::max(defect, std::abs(lhs - rhs));
        }
    }
    for (int j = 0; j < 16; ++j) {
        double th = 2.0 * kPi * (j + 0.19) / 16;
        cplx z(std::cos(th), std::sin(th));
        defect = std::max(defect, std::abs(std::abs(out.f(z)) - 1.0));
    }
    impl->defect = defect;
    if (defect > symmetry_gate)
        throw AccuracyError("selfmap symmetry defect " + std::to_string(defect) +
                            " exceeds the gate");
    return out;
}

cplx DiskSelfmap::f(cplx z) const {
    const Impl& im = *impl_;
    return im.B.apply(im.K.f(g_value(im.W, z)));
}

cplx DiskSelfmap::df(cplx z) const {
    const Impl& im = *impl_;
    cplx u = g_value(im.W, z);
    cplx dG, dGbar;
    g_derivs(im.W, z, dG, dGbar);
    cplx dK = im.K.df(u), dKb = im.K.dfbar(u);
    return im.B.derivative(im.K.f(u)) * (dK * dG + dKb * std::conj(dGbar));
}

cplx DiskSelfmap::dfbar(cplx z) const {
    const Impl& im = *impl_;
    cplx u = g_value(im.W, z);
    cplx dG, dGbar;
    g_derivs(im.W, z, dG, dGbar);
    cplx dK = im.K.df(u), dKb = im.K.dfbar(u);
    return im.B.derivative(im.K.f(u)) * (dK * dGbar + dKb * std::conj(dG));
}

cplx DiskSelfmap::inverse(cplx w) const {
    const Impl& im = *impl_;
    try {
        return g_inverse(im.W, im.K.inverse(im.B.inverse().apply(w)));
    } catch (const ConvergenceError&) {
        // targets within interpolation noise of the unit circle can stall the
        // staged inversion; restart from the preimage of a slightly shrunk
        // target and walk the composed map with short damped steps
        cplx z = g_inverse(im.W, im.K.inverse(im.B.inverse().apply(0.995 * w)));
        for (int it = 0; it < 400; ++it) {
            cplx F = f(z) - w;
            if (std::abs(F) < 1e-11 * (1.0 + std::abs(w))) return z;
            cplx fz = df(z), fzb = dfbar(z);
            double det = std::norm(fz) - std::norm(fzb);
            if (det < 1e-12) break;
            cplx delta = (fzb * std::conj(F) - std::conj(fz) * F) / det;
            double step = std::abs(delta);
            if (step > 0.01) delta *= 0.01 / step;
            z += delta;
        }
        if (std::abs(f(z) - w) < 1e-8 * (1.0 + std::abs(w))) return z;
        throw;
    }
}

double DiskSelfmap::symmetry_defect() const { return impl_->defect; }

PlaneTransform plane_transform(const std::function<cplx(cplx)>& source,
                               const SolverConfig& cfg) {
    SolverConfig icfg = cfg;
    icfg.support_radius = 1.0;
    auto eng = std::make_shared<Engine>(icfg);
    const Lattice lat = eng->lattice();

    auto w = std::make_shared<std::vector<cplx>>(lat.cells(), cplx(0.0));
    const auto& mask = eng->mask();
    const auto& mz = eng->mask_points();
    for (std::size_t i = 0; i < mask.size(); ++i) (*w)[mask[i]] = source(mz[i]);

    auto cor = std::make_shared<Corrections>(eng->reduce(*w));
    auto Sres = std::make_shared<std::vector<cplx>>();
    auto Cres = std::make_shared<std::vector<cplx>>();
    cplx cS = 0.0, cC = 0.0;
    eng->spectral_SC(*w, *Sres, cS, *Cres, cC);

    auto guard = [lat](cplx z) {
        if (std::abs(z.real()) > lat.L - 2 * lat.h || std::abs(z.imag()) > lat.L - 2 * lat.h)
            throw DomainError("transform query outside the solver box");
    };
    PlaneTransform out;
    out.S = [=](cplx z) {
        guard(z);
        cplx Sc, Cc;
        if (std::abs(z) < 1.0)
            eng->corrections_in(*cor, z, Sc, Cc);
        else
            eng->corrections_out(*cor, z, Sc, Cc);
        return lat.interp(*Sres, z) - cS + Sc;
    };
    out.C = [=](cplx z) {
        guard(z);
        cplx Sc, Cc;
        if (std::abs(z) < 1.0)
            eng->corrections_in(*cor, z, Sc, Cc);
        else
            eng->corrections_out(*cor, z, Sc, Cc);
        return lat.interp(*Cres, z) - cC + Cc;
    };
    return out;
}

} // namespace teich
