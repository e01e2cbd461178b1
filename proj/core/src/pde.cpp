#include "tzone/pde.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tzone/regularized.hpp"

namespace tzone {

namespace {

// Thomas algorithm; overwrites rhs with the solution.
void solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                       const std::vector<double>& upper, std::vector<double>& rhs,
                       std::vector<double>& scratch) {
    const std::size_t n = diag.size();
    scratch.resize(n);
    double denom = diag[0];
    scratch[0] = upper[0] / denom;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower[i] * scratch[i - 1];
        scratch[i] = upper[i] / denom;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

// Second-difference operator with reflecting ghost nodes:
// (A u)_0 = 2a(u_1 - u_0), (A u)_{n-1} = 2a(u_{n-2} - u_{n-1}), interior a(u+ - 2u + u-).
struct DiffusionOperator {
    double a;
    std::size_t n;

    double apply(std::span<const double> u, std::size_t j) const {
        if (j == 0) return 2.0 * a * (u[1] - u[0]);
        if (j == n - 1) return 2.0 * a * (u[n - 2] - u[n - 1]);
        return a * (u[j + 1] - 2.0 * u[j] + u[j - 1]);
    }

    // Matrix of (I - w (A + diag(reaction))).
    void implicit_matrix(double w, const std::vector<double>& reaction, std::vector<double>& lower,
                         std::vector<double>& diag, std::vector<double>& upper) const {
        lower.assign(n, -w * a);
        upper.assign(n, -w * a);
        diag.resize(n);
        for (std::size_t j = 0; j < n; ++j) diag[j] = 1.0 + 2.0 * w * a - w * reaction[j];
        upper[0] = -2.0 * w * a;
        lower[n - 1] = -2.0 * w * a;
        lower[0] = 0.0;
        upper[n - 1] = 0.0;
    }
};

void check_finite(std::span<const double> row, std::size_t k) {
    if (!std::all_of(row.begin(), row.end(), [](double v) { return std::isfinite(v); })) {
        throw SolverError("non-finite value in PDE solution", k);
    }
}

void check_kernel_resolution(const Grid1D& grid, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    if (grid.dz() > std::sqrt(eps) / 4.0) {
        throw std::invalid_argument("grid under-resolves the kernel: need dz <= sqrt(eps)/4");
    }
}

void check_time_origin(const Grid1D& grid) {
    if (grid.t0 != 0.0) throw std::invalid_argument("PDE solves start at t0 = 0");
}

}  // namespace

PdeSolution solve_hjb(const ModelParams& params, const HjbProblem& problem, const Grid1D& grid) {
    validate(params);
    grid.validate();
    check_time_origin(grid);
    const std::size_t n = grid.nz;
    const double h = grid.dz();
    const double dt = grid.dt();
    const double q = params.gamma * params.gamma / (4.0 * params.kappa);
    const DiffusionOperator op{0.5 * params.sigma * params.sigma / (h * h), n};

    std::vector<double> forcing(n, 0.0);  // source + ghost-node boundary contribution
    if (problem.source_scale != 0.0) {
        for (std::size_t j = 0; j < n; ++j) {
            forcing[j] = problem.source_scale * g_eps(problem.eps, params.c, grid.z(j));
        }
    }
    forcing[0] += -2.0 * op.a * h * problem.left_gradient;

    const std::vector<double> no_reaction(n, 0.0);
    // Crank-Nicolson over dt and backward Euler over dt/2 share one matrix.
    std::vector<double> lower, diag, upper;
    op.implicit_matrix(0.5 * dt, no_reaction, lower, diag, upper);

    auto gradient_term = [&](std::span<const double> u, std::vector<double>& out, double& max_grad) {
        out.resize(n);
        max_grad = std::abs(problem.left_gradient);
        out[0] = q * problem.left_gradient * problem.left_gradient;
        out[n - 1] = 0.0;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double g = (u[j + 1] - u[j - 1]) / (2.0 * h);
            max_grad = std::max(max_grad, std::abs(g));
            out[j] = q * g * g;
        }
    };

    PdeSolution sol{Surface(grid), {}};
    Surface& s = sol.values;
    std::vector<double> u(s.row(0).begin(), s.row(0).end());
    std::vector<double> rhs(n), scratch, f_now, f_prev;
    double max_grad = 0.0;
    gradient_term(u, f_now, max_grad);

    auto certify = [&](std::size_t k, double grad) {
        const double ratio = dt * params.gamma * grad / (2.0 * params.kappa * h);
        if (ratio > sol.certificate.worst_ratio) sol.certificate = {ratio, k};
        if (ratio > 1.0) {
            throw SolverError("explicit gradient term unstable: dt > 2 kappa dz / (gamma max|U_z|)", k);
        }
    };
    certify(0, max_grad);

    for (std::size_t k = 1; k <= grid.nt; ++k) {
        if (k <= problem.startup_steps) {
            const std::size_t m = problem.startup_substeps;
            std::vector<double> sub_lower, sub_diag, sub_upper;
            for (std::size_t i = 0; i < m; ++i) {
                const double sub = dt / static_cast<double>(m);
                if (i == 0) op.implicit_matrix(sub, no_reaction, sub_lower, sub_diag, sub_upper);
                std::vector<double> f_sub;
                double g_sub = 0.0;
                gradient_term(u, f_sub, g_sub);
                for (std::size_t j = 0; j < n; ++j) rhs[j] = u[j] + sub * (forcing[j] + f_sub[j]);
                solve_tridiagonal(sub_lower, sub_diag, sub_upper, rhs, scratch);
                u.swap(rhs);
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                const double f = f_prev.empty() ? f_now[j] : 1.5 * f_now[j] - 0.5 * f_prev[j];
                rhs[j] = u[j] + 0.5 * dt * op.apply(u, j) + dt * (forcing[j] + f);
            }
            solve_tridiagonal(lower, diag, upper, rhs, scratch);
            u.swap(rhs);
        }
        check_finite(u, k);
        std::copy(u.begin(), u.end(), s.row(k).begin());
        f_prev.swap(f_now);
        gradient_term(u, f_now, max_grad);
        certify(k, max_grad);
    }
    return sol;
}

PdeSolution solve_hjb_eps(const ModelParams& params, double eps, const Grid1D& grid) {
    check_kernel_resolution(grid, eps);
    return solve_hjb(params, HjbProblem{eps, 1.0, 0.0}, grid);
}

PdeSolution solve_singular(const ModelParams& params, const Grid1D& grid) {
    if (grid.z_min != params.c) throw std::invalid_argument("solve_singular requires z_min == c");
    return solve_hjb(params, HjbProblem{0.0, 0.0, -1.0}, grid);
}

HopfColeSolution solve_hopf_cole(const ModelParams& params, double eps, const Grid1D& grid,
                                 double potential_scale) {
    validate(params);
    grid.validate();
    check_time_origin(grid);
    check_kernel_resolution(grid, eps);
    const std::size_t n = grid.nz;
    const double h = grid.dz();
    const double dt = grid.dt();
    const double beta = params.beta();
    const DiffusionOperator op{0.5 * params.sigma * params.sigma / (h * h), n};

    std::vector<double> reaction(n);
    for (std::size_t j = 0; j < n; ++j) {
        reaction[j] = potential_scale * beta * g_eps(eps, params.c, grid.z(j));
    }
    std::vector<double> lower, diag, upper;
    op.implicit_matrix(0.5 * dt, reaction, lower, diag, upper);

    HopfColeSolution out{Surface(grid), Surface(grid)};
    std::vector<double> v(n, 1.0), rhs(n), scratch;
    std::copy(v.begin(), v.end(), out.h.row(0).begin());
    constexpr std::size_t kStartup = 2;
    for (std::size_t k = 1; k <= grid.nt; ++k) {
        if (k <= kStartup) {
            for (int half = 0; half < 2; ++half) {
                rhs = v;
                solve_tridiagonal(lower, diag, upper, rhs, scratch);
                v.swap(rhs);
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                rhs[j] = v[j] + 0.5 * dt * (op.apply(v, j) + reaction[j] * v[j]);
            }
            solve_tridiagonal(lower, diag, upper, rhs, scratch);
            v.swap(rhs);
        }
        check_finite(v, k);
        std::copy(v.begin(), v.end(), out.h.row(k).begin());
    }
    for (std::size_t k = 0; k <= grid.nt; ++k) {
        for (std::size_t j = 0; j < n; ++j) out.u.at(k, j) = std::log(out.h.at(k, j)) / beta;
    }
    return out;
}

double residual(const ModelParams& params, const Surface& surface, const Equation& equation) {
    const Grid1D& g = surface.grid();
    if (g.nt < 2) throw std::invalid_argument("residual needs at least two time steps");
    const double dt = g.dt();
    const double h = g.dz();
    const double half_var = 0.5 * params.sigma * params.sigma;
    const double q = params.gamma * params.gamma / (4.0 * params.kappa);
    double worst = 0.0;
    for (std::size_t k = 1; k <= g.nt; ++k) {
        for (std::size_t j = 1; j + 1 < g.nz; ++j) {
            const double u_t = k < g.nt
                ? (surface.at(k + 1, j) - surface.at(k - 1, j)) / (2.0 * dt)
                : (3.0 * surface.at(k, j) - 4.0 * surface.at(k - 1, j) + surface.at(k - 2, j)) / (2.0 * dt);
            const double u_z = (surface.at(k, j + 1) - surface.at(k, j - 1)) / (2.0 * h);
            const double u_zz =
                (surface.at(k, j + 1) - 2.0 * surface.at(k, j) + surface.at(k, j - 1)) / (h * h);
            const double source =
                equation.kind == EquationKind::hjb_eps ? g_eps(equation.eps, params.c, g.z(j)) : 0.0;
            worst = std::max(worst, std::abs(u_t - half_var * u_zz - source - q * u_z * u_z));
        }
    }
    return worst;
}

}  // namespace tzone
