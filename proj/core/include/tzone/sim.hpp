#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tzone/model.hpp"
#include "tzone/stats.hpp"

namespace tzone {

struct SimConfig {
    std::size_t n_steps = 2000;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 20240611;
    /// Band width for occupation estimators; 0 selects 2 sigma sqrt(dt).
    double band_eps = 0.0;
    /// Each Euler step uses the normalized sum of this many consecutive
    /// fine-grid normals. A run with (n_steps, m) sees the same Brownian
    /// path as one with (m * n_steps, 1), which couples step-size studies.
    std::size_t brownian_refinement = 1;
    /// Worker threads; 0 = hardware concurrency. Results do not depend on it.
    unsigned workers = 0;

    /// Throws std::invalid_argument on a malformed config.
    void validate() const;
    double band_width(double sigma, double horizon) const;
};

enum class InventoryConvention { pushing, band };

/// One reflected trajectory of the controlled exchange rate.
struct PathRecord {
    double terminal_s = 0.0;
    double pushing = 0.0;          ///< cumulative Skorokhod push R_T
    double band_local_time = 0.0;  ///< (sigma^2/band) * time spent in [c, c+band]
    double cost = 0.0;             ///< kappa * sum v^2 dt
    double payoff = 0.0;           ///< pushing - cost

    double payoff_with(InventoryConvention conv) const {
        return (conv == InventoryConvention::pushing ? pushing : band_local_time) - cost;
    }
};

/// Full state history of one path, for reflection diagnostics.
struct Trajectory {
    std::vector<double> states;             ///< S_0 .. S_N
    std::vector<double> pushing_increments; ///< r_1 .. r_N
};

/// Projected Euler scheme on [0,T]:
///   S' = S + gamma v(t_n, S) dt + sigma sqrt(dt) xi_n
///   r_n = max(0, c - S'),  S_{n+1} = max(c, S')
/// Deterministic in (config.seed, path_index).
PathRecord simulate_path(const ModelParams& params, const Strategy& strategy,
                         const SimConfig& config, std::size_t path_index);

Trajectory simulate_trajectory(const ModelParams& params, const Strategy& strategy,
                               const SimConfig& config, std::size_t path_index);

/// All n_paths records, in path-index order.
std::vector<PathRecord> simulate_paths(const ModelParams& params, const Strategy& strategy,
                                       const SimConfig& config);

/// E[inventory - kappa int v^2 dt] over config.n_paths paths.
McEstimate mc_objective(const ModelParams& params, const Strategy& strategy,
                        const SimConfig& config,
                        InventoryConvention convention = InventoryConvention::pushing);

enum class LocalTimeMethod {
    band,       ///< occupation of [level - band/2, level + band/2] on a time grid
    exact_law,  ///< L^x_t has the law of (|W_t| - |x|)^+
};

/// Monte Carlo estimate of E[exp(beta sigma L^level_t(W))] for a standard
/// Brownian motion W started at 0.
McEstimate brownian_local_time_mc(const ModelParams& params, double t, double level,
                                  const SimConfig& config,
                                  LocalTimeMethod method = LocalTimeMethod::exact_law);

/// U(t,z) = (1/beta) log E[exp(beta sigma L^{(z-c)/sigma}_t(W))] by Monte
/// Carlo, standard error by the delta method.
McEstimate value_u_mc(const ModelParams& params, double t, double z, const SimConfig& config,
                      LocalTimeMethod method = LocalTimeMethod::exact_law);

/// Local time at `level` of a Brownian path sampled every dt, using the
/// conditional expectation of each Brownian bridge segment:
///   E[L | a, b] = 0.5 sqrt(2 pi dt) exp((b-a)^2/(2 dt)) erfc((|a-l| + |b-l|)/sqrt(2 dt))
/// Normalized as occupation density w.r.t. d<W> = dt.
double bridge_local_time(std::span<const double> path, double dt, double level);

}  // namespace tzone
