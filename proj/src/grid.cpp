#include "teich/grid.hpp"

#include "teich/errors.hpp"

#include <cmath>

namespace teich {

DiskGrid::DiskGrid(int cutoff_exp, int angles, int rings_per_octave)
    : cutoff_exp_(cutoff_exp), angles_(angles) {
    if (cutoff_exp < 2 || angles < 8 || rings_per_octave < 1)
        throw PreconditionError("DiskGrid: degenerate parameters");
    const int n_cells = cutoff_exp * rings_per_octave;
    std::vector<double> s(n_cells + 1);
    s[0] = 0.0;
    for (int j = 1; j <= n_cells; ++j)
        s[j] = 1.0 - std::pow(2.0, -double(j) / rings_per_octave);
    ring_r_.resize(n_cells);
    ring_w_.resize(n_cells);
    for (int i = 0; i < n_cells; ++i) {
        ring_r_[i] = std::sqrt(0.5 * (s[i] * s[i] + s[i + 1] * s[i + 1])); // area centroid
        ring_w_[i] = pi * (s[i + 1] * s[i + 1] - s[i] * s[i]) / angles;
    }
}

cplx DiskGrid::node(std::size_t idx) const {
    return node(int(idx / angles_), int(idx % angles_));
}

double DiskGrid::truncated_area() const {
    double rmax = 1.0 - std::pow(2.0, -cutoff_exp_);
    return pi * rmax * rmax;
}

std::shared_ptr<const DiskGrid> DiskGrid::standard() {
    static auto g = std::make_shared<const DiskGrid>(14, 1024, 16);
    return g;
}

std::shared_ptr<const DiskGrid> DiskGrid::coarse() {
    static auto g = std::make_shared<const DiskGrid>(12, 256, 8);
    return g;
}

} // namespace teich
