#include "tzone/regularized.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tzone/closed_form.hpp"
#include "tzone/rng.hpp"

namespace tzone {

namespace {

constexpr double kMaxExponent = 700.0;

// sigma W at t_n = n dt, n = 0..n_steps, for one path.
void brownian_path(const SimConfig& mc, std::size_t path_index, double sigma, double dt,
                   std::vector<double>& out) {
    rng::NormalStream normals(mc.seed, path_index);
    const double step = sigma * std::sqrt(dt);
    out.resize(mc.n_steps + 1);
    out[0] = 0.0;
    const std::size_t m = mc.brownian_refinement;
    const double coarsen = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t n = 0; n < mc.n_steps; ++n) {
        double xi;
        if (m == 1) {
            xi = normals(n);
        } else {
            xi = 0.0;
            for (std::size_t j = 0; j < m; ++j) xi += normals(n * m + j);
            xi *= coarsen;
        }
        out[n + 1] = out[n] + step * xi;
    }
}

void check_resolution(const RegularizedValue& rv, double t) {
    if (!(rv.eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    rv.mc.validate();
    const double dt = t / static_cast<double>(rv.mc.n_steps);
    const double limit = rv.eps / (4.0 * rv.params.sigma * rv.params.sigma);
    if (dt > limit) {
        throw std::invalid_argument("time step " + std::to_string(dt) +
                                    " under-resolves the kernel; need dt <= eps/(4 sigma^2) = " +
                                    std::to_string(limit));
    }
}

McEstimate log_mean_estimate(std::span<const double> weights, double beta) {
    const McEstimate m = estimate(weights);
    return {std::log(m.mean) / beta, m.std_error / (beta * m.mean), m.n_paths};
}

}  // namespace

double g_eps(double eps, double c, double x) {
    const double d = x - c;
    return std::exp(-d * d / (2.0 * eps)) / std::sqrt(2.0 * std::numbers::pi * eps);
}

double g_eps_prime(double eps, double c, double x) { return -((x - c) / eps) * g_eps(eps, c, x); }

std::vector<KernelFunctionals> sample_kernel_functionals(const RegularizedValue& rv, double t,
                                                         std::span<const double> zs) {
    validate(rv.params);
    check_resolution(rv, t);
    const std::size_t nz = zs.size();
    const std::size_t n_steps = rv.mc.n_steps;
    const double dt = t / static_cast<double>(n_steps);
    const double beta = rv.params.beta();
    const double c = rv.params.c;
    std::vector<KernelFunctionals> out(rv.mc.n_paths * nz);

    parallel_for(rv.mc.n_paths, rv.mc.workers, [&](std::size_t i) {
        std::vector<double> w;
        brownian_path(rv.mc, i, rv.params.sigma, dt, w);
        for (std::size_t j = 0; j < nz; ++j) {
            double g_sum = 0.0;
            double gp_sum = 0.0;
            for (std::size_t n = 0; n <= n_steps; ++n) {
                const double weight = (n == 0 || n == n_steps) ? 0.5 : 1.0;
                const double x = zs[j] + w[n];
                const double g = g_eps(rv.eps, c, x);
                g_sum += weight * g;
                gp_sum += weight * (-(x - c) / rv.eps) * g;
            }
            KernelFunctionals& f = out[i * nz + j];
            f.integral = g_sum * dt;
            f.integral_prime = gp_sum * dt;
            if (beta * f.integral > kMaxExponent) {
                throw std::overflow_error("exponent beta*int G_eps dr exceeds 700 on path " +
                                          std::to_string(i));
            }
        }
    });
    return out;
}

std::vector<McEstimate> u_eps_mc(const RegularizedValue& rv, double t, std::span<const double> zs) {
    if (t == 0.0) return std::vector<McEstimate>(zs.size(), McEstimate{0.0, 0.0, rv.mc.n_paths});
    if (!(t > 0.0)) throw DomainError("u_eps_mc requires t >= 0");
    const auto samples = sample_kernel_functionals(rv, t, zs);
    const double beta = rv.params.beta();
    std::vector<McEstimate> out;
    out.reserve(zs.size());
    std::vector<double> weights(rv.mc.n_paths);
    for (std::size_t j = 0; j < zs.size(); ++j) {
        for (std::size_t i = 0; i < rv.mc.n_paths; ++i) {
            weights[i] = std::exp(beta * samples[i * zs.size() + j].integral);
        }
        out.push_back(log_mean_estimate(weights, beta));
    }
    return out;
}

McEstimate u_eps_mc(const RegularizedValue& rv, double t, double z) {
    const double zs[] = {z};
    return u_eps_mc(rv, t, zs).front();
}

McEstimate du_eps_dz_mc(const RegularizedValue& rv, double t, double z) {
    if (!(t > 0.0)) throw DomainError("du_eps_dz_mc requires t > 0");
    const double zs[] = {z};
    const auto samples = sample_kernel_functionals(rv, t, zs);
    const double beta = rv.params.beta();
    const std::size_t n = rv.mc.n_paths;
    std::vector<double> num(n);
    std::vector<double> den(n);
    for (std::size_t i = 0; i < n; ++i) {
        den[i] = std::exp(beta * samples[i].integral);
        num[i] = samples[i].integral_prime * den[i];
    }
    const double mean_num = pairwise_sum(num) / static_cast<double>(n);
    const double mean_den = pairwise_sum(den) / static_cast<double>(n);
    const double ratio = mean_num / mean_den;
    // Delta method: Var(ratio) ~ Var(num - ratio * den) / (n * mean_den^2).
    std::vector<double> influence(n);
    for (std::size_t i = 0; i < n; ++i) influence[i] = (num[i] - ratio * den[i]) / mean_den;
    const McEstimate inf = estimate(influence);
    return {ratio, inf.std_error, n};
}

McEstimate v_star_eps(const RegularizedValue& rv, double t, double z) {
    if (!(t >= 0.0) || !(t < rv.params.horizon)) throw DomainError("v_star_eps requires 0 <= t < T");
    const McEstimate d = du_eps_dz_mc(rv, rv.params.horizon - t, z);
    const double k = rv.params.speed_scale();
    return {k * d.mean, k * d.std_error, d.n_paths};
}

double v_star_eps(const ModelParams& params, const Surface& u_eps, double t, double z) {
    if (!(t >= 0.0) || !(t < params.horizon)) throw DomainError("v_star_eps requires 0 <= t < T");
    return params.speed_scale() * u_eps.interpolate_dz(params.horizon - t, z);
}

OccupationSides occupation_identity_on_path(double eps, double c, double z,
                                            std::span<const double> path, double dt, double band) {
    OccupationSides out;
    if (path.size() < 2) return out;
    const std::size_t last = path.size() - 1;
    double trapezoid = 0.0;
    for (std::size_t n = 0; n <= last; ++n) {
        const double weight = (n == 0 || n == last) ? 0.5 : 1.0;
        trapezoid += weight * g_eps(eps, c, z + path[n]);
    }
    out.time_integral = trapezoid * dt;

    // Occupation time per bin, left-point rule.
    const auto [lo_it, hi_it] = std::minmax_element(path.begin(), path.begin() + last);
    const auto first_bin = static_cast<long long>(std::llround(*lo_it / band));
    const auto last_bin = static_cast<long long>(std::llround(*hi_it / band));
    std::vector<double> occupation(static_cast<std::size_t>(last_bin - first_bin + 1), 0.0);
    for (std::size_t n = 0; n < last; ++n) {
        occupation[static_cast<std::size_t>(std::llround(path[n] / band) - first_bin)] += dt;
    }
    double space = 0.0;
    for (std::size_t b = 0; b < occupation.size(); ++b) {
        if (occupation[b] == 0.0) continue;
        const double x = static_cast<double>(first_bin + static_cast<long long>(b)) * band;
        space += g_eps(eps, c, z + x) * occupation[b];
    }
    out.space_integral = space;
    return out;
}

double occupation_identity_check(const RegularizedValue& rv, double t, double z,
                                 std::size_t path_count) {
    if (!(t > 0.0)) throw DomainError("occupation_identity_check requires t > 0");
    validate(rv.params);
    check_resolution(rv, t);
    const double dt = t / static_cast<double>(rv.mc.n_steps);
    const double band = rv.mc.band_width(rv.params.sigma, t);
    std::vector<double> deviation(path_count);
    parallel_for(path_count, rv.mc.workers, [&](std::size_t i) {
        std::vector<double> w;
        brownian_path(rv.mc, i, rv.params.sigma, dt, w);
        const OccupationSides s = occupation_identity_on_path(rv.eps, rv.params.c, z, w, dt, band);
        deviation[i] =
            std::abs(s.time_integral - s.space_integral) / std::max(std::abs(s.time_integral), 1e-12);
    });
    return deviation.empty() ? 0.0 : *std::max_element(deviation.begin(), deviation.end());
}

std::vector<ConvergenceRow> convergence_study(const ModelParams& params,
                                              std::span<const double> eps_list, double t,
                                              std::span<const double> z_grid, const SimConfig& mc) {
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!(eps_list[k] > 0.0)) throw std::invalid_argument("eps values must be > 0");
        if (k > 0 && !(eps_list[k] < eps_list[k - 1])) {
            throw std::invalid_argument("eps_list must be strictly decreasing");
        }
    }
    const ClosedForm cf(params);
    std::vector<ConvergenceRow> rows;
    for (double eps : eps_list) {
        ConvergenceRow row;
        row.eps = eps;
        row.u_eps = u_eps_mc(RegularizedValue{params, eps, mc}, t, z_grid);
        for (std::size_t j = 0; j < z_grid.size(); ++j) {
            const double exact = cf.value_u(t, z_grid[j]);
            row.u_closed_form.push_back(exact);
            const double err = std::abs(row.u_eps[j].mean - exact);
            if (j == 0 || err > row.sup_abs_error) {
                row.sup_abs_error = err;
                row.z_at_sup = z_grid[j];
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<LocalTimeRmsRow> local_time_rms_study(const ModelParams& params,
                                                  std::span<const double> eps_list, double t,
                                                  double z, const SimConfig& mc) {
    validate(params);
    if (eps_list.empty()) return {};
    const double smallest = *std::min_element(eps_list.begin(), eps_list.end());
    check_resolution(RegularizedValue{params, smallest, mc}, t);
    const double dt = t / static_cast<double>(mc.n_steps);
    const double sigma = params.sigma;
    const std::size_t ne = eps_list.size();
    std::vector<double> sq(mc.n_paths * ne);

    parallel_for(mc.n_paths, mc.workers, [&](std::size_t i) {
        std::vector<double> w;
        brownian_path(mc, i, sigma, dt, w);
        // Standardized distance to the barrier: (z + sigma W - c) / sigma.
        std::vector<double> scaled(w.size());
        for (std::size_t n = 0; n < w.size(); ++n) scaled[n] = (z + w[n] - params.c) / sigma;
        const double local_time = bridge_local_time(scaled, dt, 0.0) / sigma;
        const std::size_t last = w.size() - 1;
        for (std::size_t k = 0; k < ne; ++k) {
            double g_sum = 0.0;
            for (std::size_t n = 0; n <= last; ++n) {
                const double weight = (n == 0 || n == last) ? 0.5 : 1.0;
                g_sum += weight * g_eps(eps_list[k], params.c, z + w[n]);
            }
            const double d = g_sum * dt - local_time;
            sq[i * ne + k] = d * d;
        }
    });

    std::vector<LocalTimeRmsRow> rows;
    std::vector<double> column(mc.n_paths);
    for (std::size_t k = 0; k < ne; ++k) {
        for (std::size_t i = 0; i < mc.n_paths; ++i) column[i] = sq[i * ne + k];
        const McEstimate ms = estimate(column);
        const double rms = std::sqrt(ms.mean);
        rows.push_back({eps_list[k], rms, rms > 0.0 ? ms.std_error / (2.0 * rms) : 0.0});
    }
    return rows;
}

}  // namespace tzone
