#pragma once

#include <cstddef>
#include <stdexcept>

#include "tzone/model.hpp"
#include "tzone/surface.hpp"

namespace tzone {

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::size_t time_index)
        : std::runtime_error(what + " at time index " + std::to_string(time_index)),
          time_index_(time_index) {}
    std::size_t time_index() const { return time_index_; }

private:
    std::size_t time_index_;
};

/// Worst value over the solve of dt * gamma * max|dU/dz| / (2 kappa dz).
/// Must stay <= 1 for the explicit gradient-squared term.
struct StabilityCertificate {
    double worst_ratio = 0.0;
    std::size_t worst_time_index = 0;
};

struct PdeSolution {
    Surface values;
    StabilityCertificate certificate;
};

/// Quadratic-gradient HJB on [z_min, z_max]:
///   U_t = (sigma^2/2) U_zz + source_scale * G_eps(z) + (gamma^2/(4 kappa)) (U_z)^2
///   U(0,z) = 0,  U_z(t, z_min) = left_gradient,  U_z(t, z_max) = 0.
///
/// Diffusion is Crank-Nicolson on a tridiagonal system; the source and the
/// gradient-squared term are explicit, the latter extrapolated from the two
/// previous levels. The first `startup_steps` rows are each taken as
/// `startup_substeps` backward-Euler substeps: with U_z(t,c) = -1 the data
/// are incompatible at the corner (0, c), and plain Crank-Nicolson would
/// carry the resulting oscillation through the whole solve. Neumann data
/// enter through ghost nodes U_{-1} = U_1 - 2 dz g.
struct HjbProblem {
    double eps = 0.0;           ///< kernel variance; ignored when source_scale == 0
    double source_scale = 1.0;  ///< 0 drops the G_eps term
    double left_gradient = 0.0;
    std::size_t startup_steps = 2;
    std::size_t startup_substeps = 64;
};

PdeSolution solve_hjb(const ModelParams& params, const HjbProblem& problem, const Grid1D& grid);

/// Regularized HJB with homogeneous Neumann data. Requires dz <= sqrt(eps)/4.
/// grid.z_min may lie below c (symmetric-extension checks).
PdeSolution solve_hjb_eps(const ModelParams& params, double eps, const Grid1D& grid);

/// Singular-limit HJB: zero source, U_z(t, c) = -1. Requires grid.z_min == c.
PdeSolution solve_singular(const ModelParams& params, const Grid1D& grid);

struct HopfColeSolution {
    Surface h;  ///< solution of the linear equation, h >= 1
    Surface u;  ///< log(h) / beta
};

/// Linear equation for h = exp(beta U):
///   h_t = (sigma^2/2) h_zz + potential_scale * beta * G_eps(z) * h,
///   h(0,z) = 1,  h_z = 0 at both ends. Crank-Nicolson.
HopfColeSolution solve_hopf_cole(const ModelParams& params, double eps, const Grid1D& grid,
                                 double potential_scale = 1.0);

enum class EquationKind { hjb_eps, singular };

struct Equation {
    EquationKind kind = EquationKind::singular;
    double eps = 0.0;

    static Equation hjb_eps(double e) { return {EquationKind::hjb_eps, e}; }
    static Equation singular() { return {EquationKind::singular, 0.0}; }
};

/// Max |U_t - (sigma^2/2) U_zz - source - (gamma^2/(4 kappa)) (U_z)^2| over
/// rows 1..nt and interior columns, by centered differences (second-order
/// backward difference in t on the last row).
double residual(const ModelParams& params, const Surface& surface, const Equation& equation);

/// Samples f(t, z) on the grid.
template <class F>
Surface sample_surface(const Grid1D& grid, F&& f) {
    Surface s(grid);
    for (std::size_t k = 0; k <= grid.nt; ++k) {
        for (std::size_t j = 0; j < grid.nz; ++j) s.at(k, j) = f(grid.t(k), grid.z(j));
    }
    return s;
}

}  // namespace tzone
