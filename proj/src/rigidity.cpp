#include "teich/rigidity.hpp"

#include "teich/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace teich {

namespace {

bool is_inf(cplx z) { return !std::isfinite(z.real()) || !std::isfinite(z.imag()); }

// sup of rho_half^{-2+alpha} |h_* psi| over a ladder of lambda-octave strips
// of Im. h_* psi(zeta) = psi(h^{-1} zeta) ((h^{-1})'(zeta))^2, and the -2
// weight is invariant under the transfer, so only the alpha factor is new.
// The ladder is capped by the image of the exclusion circle around the
// repelling fixed point (the rest of the working region maps below it) and
// runs thirteen octaves under Im = 1 to expose any growth trend toward the
// attracting point; grow reports one.
double strip_norm(const HolomorphicField& psi, const MobiusMap& h, cplx repel,
                  double lambda, double alpha, double exclusion, bool& grow) {
    MobiusMap hinv = h.inverse();
    double cap = 1.0 / lambda;
    for (int t = 0; t < 256; ++t) {
        cplx z = repel + exclusion * cis(2.0 * pi * (t + 0.5) / 256.0);
        if (abs2(z) <= 1.0) continue;
        cplx w = h.apply(z);
        if (std::isfinite(w.imag())) cap = std::max(cap, w.imag());
    }
    const int per_octave = 6, angles = 64;
    const int strips = int(std::ceil(std::log(cap) / std::log(1.0 / lambda))) + 13;
    std::vector<double> sup(strips, 0.0);
    for (int k = 0; k < strips; ++k) {
        double top = cap * std::pow(lambda, double(k));
        for (int j = 0; j < per_octave; ++j) {
            double y = top * std::pow(lambda, (j + 0.5) / per_octave);
            double wy = std::pow(y, 2.0 - alpha);
            for (int t = 0; t < angles; ++t) {
                double th = pi * ((t + 0.5) / angles - 0.5);
                cplx zeta(y * std::tan(th), y);
                cplx w = hinv.apply(zeta);
                if (is_inf(w) || abs2(w) <= 1.0) continue;
                cplx dh = hinv.derivative(zeta);
                double v = wy * std::abs(psi.eval(w)) * abs2(dh);
                if (std::isfinite(v) && v > sup[k]) sup[k] = v;
            }
        }
    }
    // An honest norm saturates from below as the ladder descends, so strict
    // increase is not evidence; divergence compounds geometrically, one
    // factor per octave. Demand two consecutive >=5% octave steps plus net
    // growth over the lower half of the ladder.
    grow = strips >= 5 && sup[strips - 1] > 1.05 * sup[strips - 2] &&
           sup[strips - 2] > 1.05 * sup[strips - 3] && sup[strips - 1] > sup[strips / 2];
    return *std::max_element(sup.begin(), sup.end());
}

int pick_truncation(double q, double rel_tol, int nmin) {
    int N = nmin;
    while (std::pow(q, double(N + 1)) / (1.0 - q) >= rel_tol) {
        ++N;
        if (N > 100000)
            throw ConvergenceError("orbit_series: truncation cap exceeded", {});
    }
    return N;
}

} // namespace

OrbitSeriesResult orbit_series(const HolomorphicField& psi, const MobiusMap& g, double alpha,
                               OrbitDirection dir, double rel_tol, double exclusion) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw PreconditionError("orbit_series: alpha must lie in (0,1]");
    if (!(rel_tol > 0.0) || rel_tol >= 1.0)
        throw PreconditionError("orbit_series: rel_tol must lie in (0,1)");
    MobiusClass cls = classify(g);
    if (cls.kind != MobiusClass::hyperbolic)
        throw PreconditionError("orbit_series: map must be hyperbolic");

    const double lam = std::abs(cls.multiplier);
    const bool att = dir == OrbitDirection::attracting_sum;
    MobiusMap base = att ? g : g.inverse();
    MobiusClass cb = att ? cls : classify(base);
    MobiusMap norm = exterior_normalizer(base, cb);

    // own-norm report catches growth the strip ladder cannot see (series
    // exponents, grid rings); the ladder catches decay failure at the
    // attracting point
    NormReport own = exterior_sup_weighted(psi, -2.0 + alpha);
    bool grow = false;
    double tnorm = strip_norm(psi, norm, cb.fixed_repel, lam, alpha, exclusion, grow);
    bool divg = grow || own.diverging || !std::isfinite(own.value);

    if (tnorm == 0.0) { // zero coboundary: phi = 0 at truncation 0
        HolomorphicField zero =
            HolomorphicField::from_function(psi.grid_ptr(), [](cplx) { return cplx(0.0); });
        return OrbitSeriesResult{std::move(zero), 0, 0.0, dir, lam, alpha, 0.0, divg};
    }

    double q = std::pow(lam, alpha);
    int N = pick_truncation(q, rel_tol, att ? 0 : 1);
    double tail = tnorm * std::pow(q, double(N + 1)) / (1.0 - q);

    // Powers in normal form: base^i = m^{-1}(lam^i m(z)) with
    // m(z) = (z - at)/(z - re) and (base^i)'(z) = lam^i (w - re)^2 / (z - re)^2.
    // Iterated matrix products lose their determinant to cancellation long
    // before the tail cutoff; the normal form stays conditioned at any power.
    const cplx at = cb.fixed_attract, re = cb.fixed_repel;
    std::vector<double> lam_pow;
    for (int i = att ? 0 : 1; i <= N; ++i) lam_pow.push_back(std::pow(lam, double(i)));

    const double sign = att ? -1.0 : 1.0;
    HolomorphicField phi = HolomorphicField::from_function(
        psi.grid_ptr(), [psi, at, re, lam_pow, sign](cplx z) {
            cplx s = 0.0;
            cplx mz = (z - at) / (z - re);
            for (double li : lam_pow) { // fixed index order: deterministic reduction
                cplx u = li * mz;
                // once lam^i m(z) sinks below a few ulp of 1, w collapses onto
                // the attracting point and a field singular there would be
                // evaluated at rounding noise instead of the true offset; the
                // true term is already below double resolution, so drop it
                if (std::abs(u) < 1e-15) continue;
                cplx w = std::abs(u) > 1e8 ? (re - at / u) / (1.0 - 1.0 / u)
                                           : (re * u - at) / (u - 1.0);
                cplx dq = (w - re) / (z - re);
                cplx dw = li * dq * dq;
                cplx term = psi.eval(w) * dw * dw;
                // skip the removable pole preimages of infinity: the field's
                // decay beats the derivative blow-up, the limit contributes
                // nothing a neighboring sample does not already carry
                if (std::isfinite(term.real()) && std::isfinite(term.imag())) s += term;
            }
            return sign * s;
        });
    return OrbitSeriesResult{std::move(phi), N, tail, dir, lam, alpha, tnorm, divg};
}

double coboundary_residual(const HolomorphicField& phi, const MobiusMap& g,
                           const HolomorphicField& psi, double exclusion) {
    MobiusClass cls = classify(g);
    const bool hyp = cls.kind == MobiusClass::hyperbolic;
    std::vector<double> radii;
    for (int k = 0; k <= 44; ++k) radii.push_back(1.0 + std::pow(2.0, -7.0 + 0.25 * k));
    radii.push_back(33.0);
    radii.push_back(1e3); // far probe: the -2 weight saturates by |z|^4
    const int A = 96;
    double worst = 0.0;
    for (double R : radii) {
        for (int j = 0; j < A; ++j) {
            cplx z = R * cis(2.0 * pi * (j + 0.5) / A);
            if (hyp && (std::abs(z - cls.fixed_attract) < exclusion ||
                        std::abs(z - cls.fixed_repel) < exclusion))
                continue;
            cplx w = g.apply(z);
            if (is_inf(w) || abs2(w) <= 1.0) continue;
            cplx dg = g.derivative(z);
            cplx r = phi.eval(w) * dg * dg - phi.eval(z) - psi.eval(z);
            worst = std::max(worst, std::abs(r) * sq((abs2(z) - 1.0) / 2.0));
        }
    }
    return worst;
}

DecayClassReport decay_class_check(const HolomorphicField& phi, double alpha) {
    DecayClassReport rep;
    rep.fitted_exponent = decay_exponent_fit(phi);
    NormReport nr = exterior_sup_weighted(phi, -2.0 + alpha);
    rep.bounded = !nr.diverging && std::isfinite(nr.value);
    rep.pass = rep.bounded && rep.fitted_exponent >= alpha - 0.05;
    return rep;
}

std::string orbit_certificate(const OrbitSeriesResult& r, double residual) {
    nlohmann::json j;
    j["lambda"] = r.multiplier;
    j["alpha"] = r.alpha;
    j["truncation"] = r.truncation;
    j["tail_bound"] = r.tail_bound;
    j["residual"] = residual;
    j["direction"] =
        r.direction == OrbitDirection::attracting_sum ? "attracting_sum" : "repelling_sum";
    j["transfer_norm"] = r.transfer_norm;
    j["diverging"] = r.diverging;
    return j.dump(2);
}

} // namespace teich
