#include "tzone/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "tzone/closed_form.hpp"
#include "tzone/rng.hpp"
#include "tzone/special_functions.hpp"

namespace tzone {

void SimConfig::validate() const {
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    if (n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
    if (brownian_refinement < 1) throw std::invalid_argument("brownian_refinement must be >= 1");
    if (!(band_eps >= 0.0) || !std::isfinite(band_eps)) {
        throw std::invalid_argument("band_eps must be > 0 (or 0 for the default)");
    }
}

double SimConfig::band_width(double sigma, double horizon) const {
    if (band_eps > 0.0) return band_eps;
    return 2.0 * sigma * std::sqrt(horizon / static_cast<double>(n_steps));
}

namespace {

// Speed function with per-call dispatch hoisted out of the Euler loop.
std::function<double(double, double)> make_speed(const Strategy& strategy,
                                                  const ModelParams& params) {
    if (const auto* opt = std::get_if<strategy::ClosedFormOptimal>(&strategy)) {
        return [cf = ClosedForm(params), scale = opt->scale](double t, double z) {
            return scale * cf.v_star(t, z);
        };
    }
    if (std::holds_alternative<strategy::Zero>(strategy)) {
        return [](double, double) { return 0.0; };
    }
    return [&strategy, &params](double t, double z) { return eval_strategy(strategy, params, t, z); };
}

// Brownian increments for one path: standard normals, coarsened by
// summing `refinement` fine draws.
class Increments {
public:
    Increments(const SimConfig& config, std::size_t path_index)
        : normals_(config.seed, path_index),
          refinement_(config.brownian_refinement),
          scale_(1.0 / std::sqrt(static_cast<double>(config.brownian_refinement))) {}

    double operator()(std::size_t step) {
        if (refinement_ == 1) return normals_(step);
        double s = 0.0;
        const std::uint64_t base = static_cast<std::uint64_t>(step) * refinement_;
        for (std::size_t j = 0; j < refinement_; ++j) s += normals_(base + j);
        return s * scale_;
    }

private:
    rng::NormalStream normals_;
    std::size_t refinement_;
    double scale_;
};

template <class Observer>
PathRecord run_path(const ModelParams& params, const std::function<double(double, double)>& speed,
                    const SimConfig& config, std::size_t path_index, Observer&& observe) {
    const double dt = params.horizon / static_cast<double>(config.n_steps);
    const double sqrt_dt = std::sqrt(dt);
    const double band = config.band_width(params.sigma, params.horizon);
    const double c = params.c;

    Increments xi(config, path_index);
    PathRecord rec;
    double s = params.s0;
    double occupation = 0.0;
    double cost = 0.0;
    for (std::size_t n = 0; n < config.n_steps; ++n) {
        const double t = static_cast<double>(n) * dt;
        const double v = speed(t, s);
        if (s <= c + band) occupation += dt;
        cost += v * v;
        const double moved = s + params.gamma * v * dt + params.sigma * sqrt_dt * xi(n);
        const double push = std::max(0.0, c - moved);
        s = std::max(c, moved);
        rec.pushing += push;
        observe(s, push);
    }
    rec.terminal_s = s;
    rec.band_local_time = params.sigma * params.sigma / band * occupation;
    rec.cost = params.kappa * cost * dt;
    rec.payoff = rec.pushing - rec.cost;
    return rec;
}

}  // namespace

PathRecord simulate_path(const ModelParams& params, const Strategy& strategy,
                         const SimConfig& config, std::size_t path_index) {
    validate(params);
    config.validate();
    if (path_index >= config.n_paths) throw std::out_of_range("path_index >= n_paths");
    const auto speed = make_speed(strategy, params);
    return run_path(params, speed, config, path_index, [](double, double) {});
}

Trajectory simulate_trajectory(const ModelParams& params, const Strategy& strategy,
                               const SimConfig& config, std::size_t path_index) {
    validate(params);
    config.validate();
    const auto speed = make_speed(strategy, params);
    Trajectory out;
    out.states.reserve(config.n_steps + 1);
    out.pushing_increments.reserve(config.n_steps);
    out.states.push_back(params.s0);
    run_path(params, speed, config, path_index, [&](double s, double push) {
        out.states.push_back(s);
        out.pushing_increments.push_back(push);
    });
    return out;
}

std::vector<PathRecord> simulate_paths(const ModelParams& params, const Strategy& strategy,
                                       const SimConfig& config) {
    validate(params);
    config.validate();
    const auto speed = make_speed(strategy, params);
    std::vector<PathRecord> out(config.n_paths);
    parallel_for(config.n_paths, config.workers, [&](std::size_t i) {
        out[i] = run_path(params, speed, config, i, [](double, double) {});
    });
    return out;
}

McEstimate mc_objective(const ModelParams& params, const Strategy& strategy,
                        const SimConfig& config, InventoryConvention convention) {
    validate(params);
    config.validate();
    const auto speed = make_speed(strategy, params);
    std::vector<double> payoffs(config.n_paths);
    parallel_for(config.n_paths, config.workers, [&](std::size_t i) {
        payoffs[i] = run_path(params, speed, config, i, [](double, double) {}).payoff_with(convention);
    });
    return estimate(payoffs);
}

double bridge_local_time(std::span<const double> path, double dt, double level) {
    const double scale = std::sqrt(2.0 * dt);
    const double prefactor = 0.5 * std::sqrt(2.0 * std::numbers::pi * dt);
    double total = 0.0;
    for (std::size_t n = 0; n + 1 < path.size(); ++n) {
        const double a = path[n];
        const double b = path[n + 1];
        const double u = (std::abs(a - level) + std::abs(b - level)) / scale;
        const double w = (b - a) / scale;
        if (u - std::abs(w) > 40.0) continue;  // far from the level: < e^-1600
        // exp(w^2) erfc(u) = erfcx(u) exp(w^2 - u^2), with |w| <= u
        total += prefactor * special::erfcx(u) * std::exp((w - u) * (w + u));
    }
    return total;
}

McEstimate brownian_local_time_mc(const ModelParams& params, double t, double level,
                                  const SimConfig& config, LocalTimeMethod method) {
    validate(params);
    config.validate();
    if (!(t > 0.0)) throw std::invalid_argument("brownian_local_time_mc requires t > 0");
    const double lambda = params.beta() * params.sigma;
    std::vector<double> samples(config.n_paths);

    if (method == LocalTimeMethod::exact_law) {
        const double sqrt_t = std::sqrt(t);
        const double x = std::abs(level);
        parallel_for(config.n_paths, config.workers, [&](std::size_t i) {
            rng::NormalStream normals(config.seed, i);
            const double local_time = std::max(0.0, std::abs(sqrt_t * normals(0)) - x);
            samples[i] = std::exp(lambda * local_time);
        });
    } else {
        const double dt = t / static_cast<double>(config.n_steps);
        const double sqrt_dt = std::sqrt(dt);
        const double band = config.band_eps > 0.0 ? config.band_eps : 2.0 * sqrt_dt;
        const double half = 0.5 * band;
        parallel_for(config.n_paths, config.workers, [&](std::size_t i) {
            Increments xi(config, i);
            double w = 0.0;
            double occupation = 0.0;
            for (std::size_t n = 0; n < config.n_steps; ++n) {
                if (std::abs(w - level) <= half) occupation += dt;
                w += sqrt_dt * xi(n);
            }
            samples[i] = std::exp(lambda * occupation / band);
        });
    }
    return estimate(samples);
}

McEstimate value_u_mc(const ModelParams& params, double t, double z, const SimConfig& config,
                      LocalTimeMethod method) {
    if (!(z >= params.c)) throw DomainError("value_u_mc requires z >= c");
    const McEstimate m = brownian_local_time_mc(params, t, (z - params.c) / params.sigma, config, method);
    const double beta = params.beta();
    return {std::log(m.mean) / beta, m.std_error / (beta * m.mean), m.n_paths};
}

}  // namespace tzone
