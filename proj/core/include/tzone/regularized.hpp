#pragma once

#include <span>
#include <vector>

#include "tzone/model.hpp"
#include "tzone/sim.hpp"
#include "tzone/stats.hpp"
#include "tzone/surface.hpp"

namespace tzone {

/// The eps-smoothed problem: local time at c is replaced by
/// int_0^t G_eps(S_r) dr with G_eps the N(c, eps) density. Its value has
/// the Feynman-Kac form
///   U^eps(t,z) = (1/beta) log E[exp(beta int_0^t G_eps(z + sigma W_r) dr)]
/// with W a free Brownian motion.
struct RegularizedValue {
    ModelParams params;
    double eps = 1e-2;
    /// n_steps discretizes [0, t] for whichever t is evaluated.
    SimConfig mc;
};

/// N(c, eps) density at x.
double g_eps(double eps, double c, double x);
/// d/dx g_eps = -((x - c)/eps) g_eps.
double g_eps_prime(double eps, double c, double x);

/// Per-path kernel functionals along z + sigma W (trapezoidal in time).
struct KernelFunctionals {
    double integral = 0.0;        ///< int G_eps(z + sigma W_r) dr
    double integral_prime = 0.0;  ///< int G_eps'(z + sigma W_r) dr
};

/// Samples laid out [path][z]: element (i, j) at i * zs.size() + j. All z
/// share the same Brownian paths. Throws std::invalid_argument when
/// dt > eps/(4 sigma^2) and std::overflow_error when beta * integral > 700.
std::vector<KernelFunctionals> sample_kernel_functionals(const RegularizedValue& rv, double t,
                                                         std::span<const double> zs);

McEstimate u_eps_mc(const RegularizedValue& rv, double t, double z);
std::vector<McEstimate> u_eps_mc(const RegularizedValue& rv, double t, std::span<const double> zs);

/// Ratio estimator E[I' e^{beta I}] / E[e^{beta I}] on shared paths.
McEstimate du_eps_dz_mc(const RegularizedValue& rv, double t, double z);

/// gamma/(2 kappa) * dU^eps/dz(T - t, z) by Monte Carlo.
McEstimate v_star_eps(const RegularizedValue& rv, double t, double z);
/// Same, read from a solved U^eps surface (rows = time-to-go).
double v_star_eps(const ModelParams& params, const Surface& u_eps, double t, double z);

/// Both sides of the occupation-time identity on one path:
///   int G_eps(z + sigma W_r) dr  (trapezoid)  vs  sum_bins G_eps(z + x_b) * time_in_bin(b)
struct OccupationSides {
    double time_integral = 0.0;
    double space_integral = 0.0;
};
/// `path` holds sigma W sampled every dt from W_0 = 0. Bins have width
/// `band` and are centered on multiples of `band`.
OccupationSides occupation_identity_on_path(double eps, double c, double z,
                                            std::span<const double> path, double dt, double band);

/// Max over `path_count` paths of |time - space| / max(|time|, 1e-12).
double occupation_identity_check(const RegularizedValue& rv, double t, double z,
                                 std::size_t path_count);

struct ConvergenceRow {
    double eps = 0.0;
    double sup_abs_error = 0.0;
    double z_at_sup = 0.0;
    std::vector<McEstimate> u_eps;     ///< per z
    std::vector<double> u_closed_form; ///< per z
};

/// sup over z_grid of |U^eps(t,z) - U(t,z)| for each eps.
std::vector<ConvergenceRow> convergence_study(const ModelParams& params,
                                              std::span<const double> eps_list, double t,
                                              std::span<const double> z_grid, const SimConfig& mc);

struct LocalTimeRmsRow {
    double eps = 0.0;
    double rms = 0.0;             ///< sqrt(E|int G_eps dr - l|^2)
    double rms_std_error = 0.0;
};

/// L^2 distance between int_0^t G_eps(z + sigma W_r) dr and the local time
/// of z + sigma W at c (as occupation density in dr), on shared paths. The
/// reference local time is the Brownian-bridge conditional estimate.
std::vector<LocalTimeRmsRow> local_time_rms_study(const ModelParams& params,
                                                  std::span<const double> eps_list, double t,
                                                  double z, const SimConfig& mc);

}  // namespace tzone
