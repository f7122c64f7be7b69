#include "teich/fields.hpp"

#include "teich/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace teich {

namespace {

cplx ipow(cplx z, int n) {
    if (n < 0) return 1.0 / ipow(z, -n);
    cplx r = 1.0, b = z;
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

constexpr double kNegInf = -1e300;

// fractional polar lookup shared by both field types; radius is the disk-side
// radius (1/|z| for exterior points)
struct PolarLocator {
    const DiskGrid& g;
    // returns ring pair (i0,i1) and blend t for radius r, clamped at the ends
    void radial(double r, int& i0, int& i1, double& t) const {
        int n = g.rings();
        if (r <= g.ring_radius(0)) {
            i0 = i1 = 0;
            t = 0;
            return;
        }
        if (r >= g.ring_radius(n - 1)) {
            i0 = i1 = n - 1;
            t = 0;
            return;
        }
        int lo = 0, hi = n - 1;
        while (hi - lo > 1) {
            int mid = (lo + hi) / 2;
            (g.ring_radius(mid) <= r ? lo : hi) = mid;
        }
        i0 = lo;
        i1 = hi;
        t = (r - g.ring_radius(lo)) / (g.ring_radius(hi) - g.ring_radius(lo));
    }

    cplx interpolate(const std::vector<cplx>& v, double r, double theta) const {
        int i0, i1;
        double t;
        radial(r, i0, i1, t);
        const int M = g.angles();
        double jf = theta / (2.0 * pi / M) - 0.5;
        double jfl = std::floor(jf);
        double u = jf - jfl;
        int j0 = ((int(jfl) % M) + M) % M;
        int j1 = (j0 + 1) % M;
        auto at = [&](int i, int j) { return v[std::size_t(i) * M + j]; };
        cplx a = (1 - u) * at(i0, j0) + u * at(i0, j1);
        cplx b = (1 - u) * at(i1, j0) + u * at(i1, j1);
        return (1 - t) * a + t * b;
    }
};

double arg_positive(cplx z) {
    double t = std::arg(z);
    return t < 0 ? t + 2.0 * pi : t;
}

// boundary-trend divergence heuristic over per-ring maxima
bool boundary_growth(const std::vector<double>& ring_max) {
    int n = int(ring_max.size());
    if (n < 20) return false;
    double last = ring_max[n - 1];
    double mid = ring_max[n / 2];
    if (!(last > 0) || !(mid > 0)) return false;
    int increasing = 0;
    for (int i = n - 8; i < n - 1; ++i)
        if (ring_max[i + 1] > ring_max[i]) ++increasing;
    return increasing >= 6 && last > 4.0 * mid;
}

struct RingScan {
    double max_val = 0.0;
    int max_ring = -1;
    std::size_t max_idx = 0;
    std::vector<double> ring_max;
};

template <class Weighted>
RingScan scan_rings(const DiskGrid& g, Weighted&& wv) {
    RingScan s;
    s.ring_max.assign(g.rings(), 0.0);
    const int M = g.angles();
    for (int i = 0; i < g.rings(); ++i) {
        for (int j = 0; j < M; ++j) {
            std::size_t idx = std::size_t(i) * M + j;
            double v = wv(idx);
            if (v > s.ring_max[i]) s.ring_max[i] = v;
            if (v > s.max_val) {
                s.max_val = v;
                s.max_ring = i;
                s.max_idx = idx;
            }
        }
    }
    return s;
}

// octave-aggregated tail extrapolation for ring sums ordered center->boundary
void tail_from_octaves(const std::vector<double>& ring_sum, int rings_per_octave,
                       double& tail, bool& diverging) {
    tail = 0.0;
    diverging = false;
    int n = int(ring_sum.size());
    if (n < 2 * rings_per_octave) return;
    double last = 0, prev = 0;
    for (int i = n - rings_per_octave; i < n; ++i) last += ring_sum[i];
    for (int i = n - 2 * rings_per_octave; i < n - rings_per_octave; ++i) prev += ring_sum[i];
    if (last <= 0) return;
    if (prev <= 0 || last >= prev) {
        diverging = true;
        tail = std::numeric_limits<double>::infinity();
        return;
    }
    double q = last / prev;
    tail = last * q / (1.0 - q);
}

} // namespace

// ----- LaurentSeries -----

cplx LaurentSeries::eval(cplx z) const {
    if (c.empty()) return 0.0;
    cplx u = 1.0 / z;
    cplx acc = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * u + c[j];
    return acc * ipow(u, k0);
}

cplx LaurentSeries::coeff(int k) const {
    int j = k - k0;
    if (j < 0 || j >= int(c.size())) return 0.0;
    return c[std::size_t(j)];
}

LaurentSeries LaurentSeries::derivative() const {
    LaurentSeries d;
    d.k0 = k0 + 1;
    d.c.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        int k = k0 + int(j);
        d.c[j] = -double(k) * c[j];
    }
    return d;
}

LaurentSeries LaurentSeries::truncated(double tol) const {
    LaurentSeries t = *this;
    while (!t.c.empty() && std::abs(t.c.back()) < tol) t.c.pop_back();
    while (!t.c.empty() && std::abs(t.c.front()) < tol) {
        t.c.erase(t.c.begin());
        ++t.k0;
    }
    return t;
}

// ----- BeltramiField -----

void BeltramiField::validate() const {
    if (sup_abs_ >= 1.0 - 1e-12)
        throw ValidationError("BeltramiField: sup |mu| must stay strictly below 1");
}

BeltramiField BeltramiField::zero(std::shared_ptr<const DiskGrid> g) {
    BeltramiField f;
    f.grid_ = std::move(g);
    f.samples_.assign(f.grid_->size(), 0.0);
    f.eval_ = [](cplx) { return cplx(0.0); };
    return f;
}

BeltramiField BeltramiField::from_function(std::shared_ptr<const DiskGrid> g, Eval fn) {
    BeltramiField f;
    f.grid_ = std::move(g);
    f.samples_.resize(f.grid_->size());
    for (std::size_t i = 0; i < f.samples_.size(); ++i) {
        f.samples_[i] = fn(f.grid_->node(i));
        f.sup_abs_ = std::max(f.sup_abs_, std::abs(f.samples_[i]));
    }
    f.eval_ = std::move(fn);
    f.validate();
    return f;
}

BeltramiField BeltramiField::from_samples(std::shared_ptr<const DiskGrid> g,
                                          std::vector<cplx> v) {
    BeltramiField f;
    f.grid_ = std::move(g);
    if (v.size() != f.grid_->size())
        throw PreconditionError("BeltramiField: sample count does not match grid");
    f.samples_ = std::move(v);
    for (const cplx& z : f.samples_) f.sup_abs_ = std::max(f.sup_abs_, std::abs(z));
    f.validate();
    return f;
}

cplx BeltramiField::eval(cplx z) const {
    if (eval_) return eval_(z);
    double r = std::abs(z);
    if (r >= 1.0) throw DomainError("BeltramiField::eval: point outside the unit disk");
    return PolarLocator{*grid_}.interpolate(samples_, r, arg_positive(z));
}

BeltramiField BeltramiField::scaled(double t) const {
    BeltramiField f;
    f.grid_ = grid_;
    f.samples_.resize(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i) f.samples_[i] = t * samples_[i];
    f.sup_abs_ = std::abs(t) * sup_abs_;
    if (eval_) {
        auto base = eval_;
        f.eval_ = [base, t](cplx z) { return t * base(z); };
    }
    f.validate();
    return f;
}

// ----- HolomorphicField -----

HolomorphicField HolomorphicField::from_series(std::shared_ptr<const DiskGrid> g,
                                               LaurentSeries s) {
    HolomorphicField f;
    f.grid_ = std::move(g);
    f.series_ = std::move(s);
    f.samples_.resize(f.grid_->size());
    for (std::size_t i = 0; i < f.samples_.size(); ++i)
        f.samples_[i] = f.series_->eval(f.grid_->exterior_node(i));
    return f;
}

HolomorphicField HolomorphicField::from_function(std::shared_ptr<const DiskGrid> g, Eval fn) {
    HolomorphicField f;
    f.grid_ = std::move(g);
    f.samples_.resize(f.grid_->size());
    for (std::size_t i = 0; i < f.samples_.size(); ++i)
        f.samples_[i] = fn(f.grid_->exterior_node(i));
    f.eval_ = std::move(fn);
    return f;
}

HolomorphicField HolomorphicField::from_function_with_series(
    std::shared_ptr<const DiskGrid> g, Eval fn, LaurentSeries s) {
    HolomorphicField f = from_function(std::move(g), std::move(fn));
    f.series_ = std::move(s);
    return f;
}

HolomorphicField HolomorphicField::from_samples(std::shared_ptr<const DiskGrid> g,
                                                std::vector<cplx> v) {
    HolomorphicField f;
    f.grid_ = std::move(g);
    if (v.size() != f.grid_->size())
        throw PreconditionError("HolomorphicField: sample count does not match grid");
    f.samples_ = std::move(v);
    return f;
}

cplx HolomorphicField::eval(cplx z) const {
    if (eval_) return eval_(z);
    if (series_) return series_->eval(z);
    double r = std::abs(z);
    if (r <= 1.0) throw DomainError("HolomorphicField::eval: point not in the exterior disk");
    return PolarLocator{*grid_}.interpolate(samples_, 1.0 / r, arg_positive(z));
}

HolomorphicField HolomorphicField::scaled(cplx a) const {
    return combine(a, *this, 0.0, *this);
}

HolomorphicField HolomorphicField::combine(cplx a, const HolomorphicField& f,
                                           cplx b, const HolomorphicField& g) {
    if (f.grid_ != g.grid_)
        throw PreconditionError("HolomorphicField::combine: grids differ");
    HolomorphicField h;
    h.grid_ = f.grid_;
    h.samples_.resize(f.samples_.size());
    for (std::size_t i = 0; i < h.samples_.size(); ++i)
        h.samples_[i] = a * f.samples_[i] + b * g.samples_[i];
    if (f.series_ && g.series_) {
        LaurentSeries s;
        s.k0 = std::min(f.series_->k0, g.series_->k0);
        int kmax = std::max(f.series_->kmax(), g.series_->kmax());
        s.c.resize(std::size_t(kmax - s.k0 + 1));
        for (int k = s.k0; k <= kmax; ++k)
            s.c[std::size_t(k - s.k0)] = a * f.series_->coeff(k) + b * g.series_->coeff(k);
        h.series_ = s.truncated(0.0);
    }
    if (f.analytic() && g.analytic()) {
        HolomorphicField fc = f, gc = g;
        h.eval_ = [a, b, fc, gc](cplx z) { return a * fc.eval(z) + b * gc.eval(z); };
    }
    return h;
}

// ----- quadrature and norms -----

cplx disk_integral(const DiskGrid& g, const std::function<cplx(cplx)>& fn) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += g.weight(i) * fn(g.node(i));
    return acc;
}

NormReport beltrami_sup_weighted(const BeltramiField& mu, double alpha) {
    const DiskGrid& g = mu.grid();
    auto weight = [alpha](cplx z) {
        return alpha == 0.0 ? 1.0 : std::pow(2.0 / (1.0 - abs2(z)), alpha);
    };
    auto scan = scan_rings(g, [&](std::size_t idx) {
        return std::abs(mu.sample(idx)) * weight(g.node(idx));
    });
    NormReport r;
    r.kind = "beltrami_sup_weighted";
    r.exponent = alpha;
    r.value = scan.max_val;
    r.max_ring = scan.max_ring;
    r.diverging = alpha > 0.0 && boundary_growth(scan.ring_max);
    if (mu.has_closed_form() && !r.diverging && scan.max_ring >= 0) {
        cplx z0 = g.node(scan.max_idx);
        double rmax = g.max_radius();
        auto h = [&](cplx z) {
            if (abs2(z) >= rmax * rmax) return kNegInf;
            return std::abs(mu.eval(z)) * weight(z);
        };
        double scale = std::max(1e-4, (1.0 - std::abs(z0)) * 0.2);
        r.value = std::max(r.value, nelder_mead_max(h, z0, scale));
    }
    return r;
}

NormReport beltrami_lp(const BeltramiField& mu, double p) {
    if (p < 1.0) throw PreconditionError("beltrami_lp: p >= 1 required");
    const DiskGrid& g = mu.grid();
    const int M = g.angles();
    std::vector<double> ring_sum(g.rings(), 0.0);
    for (int i = 0; i < g.rings(); ++i) {
        double s = 0.0;
        for (int j = 0; j < M; ++j) {
            std::size_t idx = std::size_t(i) * M + j;
            cplx z = g.node(idx);
            s += g.weight(idx) * std::pow(std::abs(mu.sample(idx)), p) * sq(rho_disk(z));
        }
        ring_sum[i] = s;
    }
    double total = 0.0;
    for (double s : ring_sum) total += s;
    NormReport r;
    r.kind = "beltrami_lp";
    r.exponent = p;
    double tail_int = 0.0;
    tail_from_octaves(ring_sum, 16, tail_int, r.diverging);
    r.value = std::pow(total, 1.0 / p);
    if (r.diverging)
        r.tail_estimate = std::numeric_limits<double>::infinity();
    else
        r.tail_estimate = std::pow(total + tail_int, 1.0 / p) - r.value;
    int best = 0;
    for (int i = 1; i < g.rings(); ++i)
        if (ring_sum[i] > ring_sum[best]) best = i;
    r.max_ring = best;
    return r;
}

NormReport exterior_sup_weighted(const HolomorphicField& phi, double expo) {
    const DiskGrid& g = phi.grid();
    auto weight = [expo](cplx z) { return std::pow(2.0 / (abs2(z) - 1.0), expo); };
    auto scan = scan_rings(g, [&](std::size_t idx) {
        return std::abs(phi.samples()[idx]) * weight(g.exterior_node(idx));
    });
    NormReport r;
    r.kind = "exterior_sup_weighted";
    r.exponent = expo;
    r.value = scan.max_val;
    r.max_ring = scan.max_ring;
    r.diverging = boundary_growth(scan.ring_max);
    if (phi.series()) {
        LaurentSeries s = phi.series()->truncated(1e-300);
        if (!s.c.empty()) {
            double growth = -2.0 * expo - s.k0;
            if (growth > 1e-12) {
                r.diverging = true;
                r.value = std::numeric_limits<double>::infinity();
                return r;
            }
            if (std::abs(growth) <= 1e-12)
                r.value = std::max(r.value, std::pow(2.0, expo) * std::abs(s.c.front()));
        }
    }
    if (phi.analytic() && scan.max_ring >= 0) {
        cplx z0 = g.exterior_node(scan.max_idx);
        auto h = [&](cplx z) {
            if (abs2(z) <= 1.0 + 1e-12) return kNegInf;
            return std::abs(phi.eval(z)) * weight(z);
        };
        double scale = std::max(1e-5, (std::abs(z0) - 1.0) * 0.2);
        r.value = std::max(r.value, nelder_mead_max(h, z0, scale));
    }
    return r;
}

NormReport exterior_lp(const HolomorphicField& phi, double p) {
    if (p < 1.0) throw PreconditionError("exterior_lp: p >= 1 required");
    const DiskGrid& g = phi.grid();
    const int M = g.angles();
    std::vector<double> ring_sum(g.rings(), 0.0);
    for (int i = 0; i < g.rings(); ++i) {
        double s = 0.0;
        for (int j = 0; j < M; ++j) {
            std::size_t idx = std::size_t(i) * M + j;
            cplx Z = g.exterior_node(idx);
            double w = g.exterior_weight(idx);
            s += w * std::pow(rho_ext(Z), 2.0 - 2.0 * p) * std::pow(std::abs(phi.samples()[idx]), p);
        }
        ring_sum[i] = s;
    }
    double total = 0.0;
    for (double s : ring_sum) total += s;
    NormReport r;
    r.kind = "exterior_lp";
    r.exponent = p;
    double tail_int = 0.0;
    tail_from_octaves(ring_sum, 16, tail_int, r.diverging);
    r.value = std::pow(total, 1.0 / p);
    if (r.diverging)
        r.tail_estimate = std::numeric_limits<double>::infinity();
    else
        r.tail_estimate = std::pow(total + tail_int, 1.0 / p) - r.value;
    int best = 0;
    for (int i = 1; i < g.rings(); ++i)
        if (ring_sum[i] > ring_sum[best]) best = i;
    r.max_ring = best;
    return r;
}

KernelIntegral quartic_kernel_disk(const DiskGrid& g, cplx zeta) {
    if (abs2(zeta) <= 1.0)
        throw DomainError("quartic_kernel_disk: zeta must lie strictly outside the disk");
    KernelIntegral out;
    for (std::size_t i = 0; i < g.size(); ++i)
        out.value += g.weight(i) / sq(abs2(g.node(i) - zeta));
    // closure ring for the annulus beyond the radial cutoff (integrand is
    // smooth up to the boundary since zeta is outside)
    double rmax = g.max_radius();
    double rc = 0.5 * (rmax + 1.0);
    double wc = pi * (1.0 - rmax * rmax) / g.angles();
    for (int j = 0; j < g.angles(); ++j) {
        cplx z = rc * cis(g.angle(j));
        out.tail += wc / sq(abs2(z - zeta));
    }
    out.value += out.tail;
    return out;
}

KernelIntegral quartic_kernel_exterior(const DiskGrid& g, cplx zeta) {
    if (abs2(zeta) >= 1.0)
        throw DomainError("quartic_kernel_exterior: zeta must lie strictly inside the disk");
    KernelIntegral out;
    for (std::size_t i = 0; i < g.size(); ++i)
        out.value += g.exterior_weight(i) / sq(abs2(g.exterior_node(i) - zeta));
    double rmax = g.max_radius();
    double Rc = 0.5 * (1.0 + 1.0 / rmax);
    double wc = pi * (1.0 / (rmax * rmax) - 1.0) / g.angles();
    for (int j = 0; j < g.angles(); ++j) {
        cplx z = Rc * cis(g.angle(j));
        out.tail += wc / sq(abs2(z - zeta));
    }
    out.value += out.tail;
    return out;
}

double decay_exponent_fit(const HolomorphicField& phi) {
    const DiskGrid& g = phi.grid();
    const int M = g.angles();
    std::vector<double> xs, ys;
    for (int i = 0; i < g.rings(); ++i) {
        double R = 1.0 / g.ring_radius(i);
        double d = R - 1.0;
        if (d > std::pow(2.0, -4)) continue;
        double m = 0.0;
        for (int j = 0; j < M; ++j) {
            std::size_t idx = std::size_t(i) * M + j;
            double v = std::abs(phi.samples()[idx]) * sq((abs2(g.exterior_node(idx)) - 1.0) / 2.0);
            m = std::max(m, v);
        }
        if (m < 1e-300) continue;
        xs.push_back(std::log(d));
        ys.push_back(std::log(m));
    }
    if (xs.size() < 4) return std::numeric_limits<double>::infinity();
    double slope = fit_slope(xs, ys);
    return std::min(2.0, std::max(-6.0, slope));
}

double cr_residual(const HolomorphicField& phi) {
    const DiskGrid& g = phi.grid();
    const int M = g.angles();
    std::vector<int> probe;
    for (int i = 0; i < g.rings(); ++i) {
        double R = 1.0 / g.ring_radius(i);
        if (R >= 1.25 && R <= 3.5) probe.push_back(i);
    }
    if (probe.size() > 12) {
        std::vector<int> sub;
        for (std::size_t t = 0; t < 12; ++t)
            sub.push_back(probe[t * (probe.size() - 1) / 11]);
        probe = sub;
    }
    if (probe.size() < 2) throw PreconditionError("cr_residual: grid lacks probe rings");
    const int m_lo = -40, m_hi = 8;
    std::vector<std::vector<cplx>> am(probe.size(), std::vector<cplx>(m_hi - m_lo + 1, 0.0));
    std::vector<double> radii(probe.size());
    for (std::size_t t = 0; t < probe.size(); ++t) {
        int i = probe[t];
        radii[t] = 1.0 / g.ring_radius(i);
        for (int m = m_lo; m <= m_hi; ++m) {
            cplx acc = 0.0;
            for (int j = 0; j < M; ++j)
                acc += phi.samples()[std::size_t(i) * M + j] * cis(-m * g.angle(j));
            am[t][std::size_t(m - m_lo)] = acc / double(M);
        }
    }
    double scale = 0.0;
    for (auto& row : am)
        for (cplx a : row) scale = std::max(scale, std::abs(a));
    if (scale < 1e-300) return 0.0;
    // sort probes by radius ascending, compare adjacent rings
    std::vector<std::size_t> order(probe.size());
    for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return radii[a] < radii[b]; });
    double worst = 0.0;
    for (std::size_t t = 0; t + 1 < order.size(); ++t) {
        std::size_t a = order[t], b = order[t + 1];
        double ratio = radii[b] / radii[a];
        for (int m = m_lo; m <= m_hi; ++m) {
            cplx predicted = am[a][std::size_t(m - m_lo)] * std::pow(ratio, double(m));
            double err = std::abs(am[b][std::size_t(m - m_lo)] - predicted);
            worst = std::max(worst, err / scale);
        }
    }
    return worst;
}

} // namespace teich
