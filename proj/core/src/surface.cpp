#include "tzone/surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tzone {

void Grid1D::validate() const {
    if (!(z_max > z_min)) throw std::invalid_argument("grid: z_max must exceed z_min");
    if (nz < 3) throw std::invalid_argument("grid: nz must be >= 3");
    if (nt < 1) throw std::invalid_argument("grid: nt must be >= 1");
    if (!(t_max > t0)) throw std::invalid_argument("grid: t_max must exceed t0");
}

Surface::Surface(Grid1D grid) : grid_(grid), values_((grid.nt + 1) * grid.nz, 0.0) {
    grid_.validate();
}

Surface::Surface(Grid1D grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != (grid_.nt + 1) * grid_.nz) {
        throw std::invalid_argument("surface: value count does not match grid");
    }
}

namespace {

struct Bracket {
    std::size_t lo;
    double w;  // weight of lo+1
};

Bracket bracket(double x, double x0, double step, std::size_t n) {
    const double u = std::clamp((x - x0) / step, 0.0, static_cast<double>(n - 1));
    auto lo = static_cast<std::size_t>(u);
    if (lo >= n - 1) lo = n - 2;
    return {lo, u - static_cast<double>(lo)};
}

}  // namespace

double Surface::interpolate(double t, double z) const {
    const Bracket bt = bracket(t, grid_.t0, grid_.dt(), rows());
    const Bracket bz = bracket(z, grid_.z_min, grid_.dz(), cols());
    const double v00 = at(bt.lo, bz.lo);
    const double v01 = at(bt.lo, bz.lo + 1);
    const double v10 = at(bt.lo + 1, bz.lo);
    const double v11 = at(bt.lo + 1, bz.lo + 1);
    const double a = v00 + bz.w * (v01 - v00);
    const double b = v10 + bz.w * (v11 - v10);
    return a + bt.w * (b - a);
}

double Surface::interpolate_dz(double t, double z) const {
    if (z < grid_.z_min || z > grid_.z_max) return 0.0;
    const std::size_t n = cols();
    const double h = grid_.dz();
    auto nodal = [&](std::size_t k, std::size_t j) {
        if (j == 0) return (-3.0 * at(k, 0) + 4.0 * at(k, 1) - at(k, 2)) / (2.0 * h);
        if (j == n - 1) return (3.0 * at(k, n - 1) - 4.0 * at(k, n - 2) + at(k, n - 3)) / (2.0 * h);
        return (at(k, j + 1) - at(k, j - 1)) / (2.0 * h);
    };
    const Bracket bt = bracket(t, grid_.t0, grid_.dt(), rows());
    const Bracket bz = bracket(z, grid_.z_min, h, n);
    const double a = nodal(bt.lo, bz.lo) + bz.w * (nodal(bt.lo, bz.lo + 1) - nodal(bt.lo, bz.lo));
    const double b =
        nodal(bt.lo + 1, bz.lo) + bz.w * (nodal(bt.lo + 1, bz.lo + 1) - nodal(bt.lo + 1, bz.lo));
    return a + bt.w * (b - a);
}

double Surface::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool Surface::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace tzone
