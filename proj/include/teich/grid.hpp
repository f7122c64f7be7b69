#pragma once

#include "teich/numeric.hpp"

#include <memory>
#include <vector>

namespace teich {

// Polar quadrature grid on the truncated unit disk |z| <= 1 - 2^-cutoff_exp.
//
// Radial cell boundaries follow a geometric ladder in 1-r (rings_per_octave
// subdivisions per halving of 1-r, so hyperbolic area is equidistributed per
// octave); nodes sit at radial cell area centroids, one node per angular cell,
// so linear-in-r^2 integrands are integrated exactly per cell.
// Weights are exact euclidean cell areas, so they are positive and sum to the
// truncated disk area by construction.
//
// The same grid doubles as the exterior quadrature grid under the reflection
// z -> 1/conj(z): exterior_node(i) = 1/conj(node(i)) and the exterior weight
// picks up the |w|^-4 area factor of that substitution.
class DiskGrid {
public:
    DiskGrid(int cutoff_exp = 14, int angles = 1024, int rings_per_octave = 16);

    int rings() const { return int(ring_r_.size()); }
    int angles() const { return angles_; }
    int cutoff_exp() const { return cutoff_exp_; }
    std::size_t size() const { return ring_r_.size() * std::size_t(angles_); }

    double ring_radius(int i) const { return ring_r_[i]; }
    double ring_cell_weight(int i) const { return ring_w_[i]; } // per node
    double angle(int j) const { return (2.0 * pi) * (j + 0.5) / angles_; }

    cplx node(std::size_t idx) const;
    cplx node(int i, int j) const { return ring_r_[i] * cis(angle(j)); }
    double weight(std::size_t idx) const { return ring_w_[idx / angles_]; }

    cplx exterior_node(std::size_t idx) const { return exterior_node(int(idx / angles_), int(idx % angles_)); }
    cplx exterior_node(int i, int j) const { return (1.0 / ring_r_[i]) * cis(angle(j)); }
    double exterior_weight(std::size_t idx) const {
        double r = ring_r_[idx / angles_];
        return ring_w_[idx / angles_] / (r * r * r * r);
    }

    double max_radius() const { return ring_r_.back(); }
    double truncated_area() const;

    static std::shared_ptr<const DiskGrid> standard();
    static std::shared_ptr<const DiskGrid> coarse(); // small grid for cheap trials

private:
    int cutoff_exp_;
    int angles_;
    std::vector<double> ring_r_; // node radii (cell area centroids)
    std::vector<double> ring_w_; // per-node cell area
};

} // namespace teich
