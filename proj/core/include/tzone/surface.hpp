#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tzone {

/// Uniform space-time grid. Rows are times t0 + k*dt (k = 0..nt),
/// columns are prices z_min + j*dz (j = 0..nz-1).
struct Grid1D {
    double z_min = 0.0;
    double z_max = 6.0;
    std::size_t nz = 601;
    std::size_t nt = 2000;
    double t_max = 1.0;
    double t0 = 0.0;

    double dz() const { return (z_max - z_min) / static_cast<double>(nz - 1); }
    double dt() const { return (t_max - t0) / static_cast<double>(nt); }
    double z(std::size_t j) const { return z_min + static_cast<double>(j) * dz(); }
    double t(std::size_t k) const { return t0 + static_cast<double>(k) * dt(); }

    /// Throws std::invalid_argument unless z_max > z_min, nz >= 3, nt >= 1
    /// and t_max > t0.
    void validate() const;
};

/// Dense (nt+1) x nz table of values on a Grid1D, row-major by time.
class Surface {
public:
    Surface() = default;
    explicit Surface(Grid1D grid);
    Surface(Grid1D grid, std::vector<double> values);

    const Grid1D& grid() const { return grid_; }
    std::size_t rows() const { return grid_.nt + 1; }
    std::size_t cols() const { return grid_.nz; }

    double& at(std::size_t k, std::size_t j) { return values_[k * grid_.nz + j]; }
    double at(std::size_t k, std::size_t j) const { return values_[k * grid_.nz + j]; }

    std::span<double> row(std::size_t k) { return {values_.data() + k * grid_.nz, grid_.nz}; }
    std::span<const double> row(std::size_t k) const {
        return {values_.data() + k * grid_.nz, grid_.nz};
    }
    std::span<const double> values() const { return values_; }

    /// Bilinear interpolation; (t, z) is clamped to the grid hull first.
    double interpolate(double t, double z) const;

    /// Spatial derivative by linear interpolation in t of the centered
    /// (one-sided at the edges) difference in z. Zero outside [z_min, z_max].
    double interpolate_dz(double t, double z) const;

    double max_abs() const;
    bool all_finite() const;

private:
    Grid1D grid_{};
    std::vector<double> values_;
};

}  // namespace tzone
