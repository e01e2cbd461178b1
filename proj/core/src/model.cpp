#include "tzone/model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "tzone/closed_form.hpp"

namespace tzone {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

std::string shortest(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

// Largest nodal |dU/dz| estimate used by Surface::interpolate_dz.
double max_abs_gradient(const Surface& s) {
    double m = 0.0;
    const Grid1D& g = s.grid();
    for (std::size_t k = 0; k < s.rows(); ++k) {
        for (std::size_t j = 0; j < s.cols(); ++j) {
            m = std::max(m, std::abs(s.interpolate_dz(g.t(k), g.z(j))));
        }
    }
    return m;
}

}  // namespace

ModelParams validate(const ModelParams& p) {
    require(std::isfinite(p.sigma) && p.sigma > 0.0, "sigma must be > 0");
    require(std::isfinite(p.gamma) && p.gamma > 0.0, "gamma must be > 0");
    require(std::isfinite(p.kappa) && p.kappa > 0.0, "kappa must be > 0");
    require(std::isfinite(p.horizon) && p.horizon > 0.0, "horizon must be > 0");
    require(std::isfinite(p.c), "barrier c must be finite");
    require(std::isfinite(p.s0), "s0 must be finite");
    require(p.s0 >= p.c, "s0 < c: initial rate below the barrier");
    const double beta = p.beta();
    require(std::isfinite(beta) && beta > 0.0, "beta = gamma^2/(2 kappa sigma^2) must be finite and > 0");
    return p;
}

double eval_strategy(const Strategy& s, const ModelParams& params, double t, double z) {
    if (!(t >= 0.0) || !(t <= params.horizon) || !(z >= params.c)) {
        throw DomainError("strategy evaluated outside [0,T] x [c,inf) at t=" + std::to_string(t) +
                          ", z=" + std::to_string(z));
    }
    return std::visit(
        overloaded{
            [](const strategy::Zero&) { return 0.0; },
            [](const strategy::Constant& k) { return k.speed; },
            [&](const strategy::ClosedFormOptimal& k) {
                return k.scale * ClosedForm(params).v_star(t, z);
            },
            [&](const strategy::RegularizedOptimal& k) {
                if (!k.value_surface) throw std::invalid_argument("RegularizedOptimal without surface");
                return params.speed_scale() * k.value_surface->interpolate_dz(params.horizon - t, z);
            },
            [&](const strategy::Tabulated& k) {
                if (!k.speeds) throw std::invalid_argument("Tabulated strategy without table");
                return k.speeds->interpolate(t, z);
            },
        },
        s);
}

double growth_constant(const Strategy& s, const ModelParams& params) {
    return std::visit(
        overloaded{
            [](const strategy::Zero&) { return 0.0; },
            [](const strategy::Constant& k) { return std::abs(k.speed); },
            [&](const strategy::ClosedFormOptimal& k) {
                return std::abs(k.scale) * params.speed_scale();
            },
            [&](const strategy::RegularizedOptimal& k) {
                return k.value_surface ? params.speed_scale() * max_abs_gradient(*k.value_surface) : 0.0;
            },
            [](const strategy::Tabulated& k) { return k.speeds ? k.speeds->max_abs() : 0.0; },
        },
        s);
}

std::string strategy_name(const Strategy& s) {
    return std::visit(
        overloaded{
            [](const strategy::Zero&) -> std::string { return "zero"; },
            [](const strategy::Constant& k) -> std::string {
                return "constant(" + shortest(k.speed) + ")";
            },
            [](const strategy::ClosedFormOptimal& k) -> std::string {
                return k.scale == 1.0 ? "optimal" : "optimal*" + shortest(k.scale);
            },
            [](const strategy::RegularizedOptimal& k) -> std::string {
                return "regularized(" + shortest(k.eps) + ")";
            },
            [](const strategy::Tabulated&) -> std::string { return "tabulated"; },
        },
        s);
}

}  // namespace tzone
