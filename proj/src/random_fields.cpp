#include "teich/random_fields.hpp"

#include "teich/errors.hpp"
#include "teich/numeric.hpp"

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

namespace teich {

namespace {

cplx uniform_cplx(std::mt19937& rng) {
    // one distribution object per draw keeps the stream layout independent
    // of how many fields a caller interleaves
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double re = u(rng);
    double im = u(rng);
    return {re, im};
}

} // namespace

BeltramiField random_beltrami(std::shared_ptr<const DiskGrid> g, std::mt19937& rng,
                              double sup_target, double envelope_s, int max_mode) {
    if (!g) throw PreconditionError("random_beltrami: null grid");
    if (!(sup_target >= 0.0) || sup_target >= 1.0)
        throw PreconditionError("random_beltrami: sup_target must lie in [0, 1)");
    if (!(envelope_s > 0.0))
        throw PreconditionError("random_beltrami: envelope exponent must be positive");
    if (max_mode < 0) throw PreconditionError("random_beltrami: max_mode must be >= 0");

    std::vector<cplx> c(max_mode + 1), d(max_mode + 1);
    for (int m = 0; m <= max_mode; ++m) c[m] = uniform_cplx(rng);
    for (int m = 0; m <= max_mode; ++m) d[m] = uniform_cplx(rng);

    auto raw = [c, d, envelope_s, max_mode](cplx z) {
        cplx p = 0.0, q = 0.0, zm = 1.0;
        for (int m = 0; m <= max_mode; ++m) {
            p += c[m] * zm;
            q += d[m] * std::conj(zm);
            zm *= z;
        }
        double env = std::pow(1.0 - abs2(z), envelope_s);
        return env * (p + q);
    };

    double peak = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i)
        peak = std::max(peak, std::abs(raw(g->node(i))));
    double scale = peak > 0.0 ? sup_target / peak : 0.0;

    return BeltramiField::from_function(
        std::move(g), [raw, scale](cplx z) { return scale * raw(z); });
}

HolomorphicField random_laurent_field(std::shared_ptr<const DiskGrid> g, std::mt19937& rng,
                                      double p, double norm_target, int kmin, int kmax) {
    if (!g) throw PreconditionError("random_laurent_field: null grid");
    if (!(p >= 1.0)) throw PreconditionError("random_laurent_field: p must be >= 1");
    if (!(norm_target > 0.0))
        throw PreconditionError("random_laurent_field: norm_target must be positive");
    if (kmin < 3 || kmax < kmin)
        throw PreconditionError("random_laurent_field: need 3 <= kmin <= kmax");

    LaurentSeries s;
    s.k0 = kmin;
    s.c.resize(kmax - kmin + 1);
    for (auto& ck : s.c) ck = uniform_cplx(rng);

    HolomorphicField f = HolomorphicField::from_series(g, std::move(s));
    NormReport nrm = exterior_lp(f, p);
    double total = nrm.value + nrm.tail_estimate;
    if (!(total > 0.0))
        throw ValidationError("random_laurent_field: drawn field has zero norm");
    return f.scaled(norm_target / total);
}

} // namespace teich
