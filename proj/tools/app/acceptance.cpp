#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "output.hpp"
#include "tzone/closed_form.hpp"
#include "tzone/pde.hpp"
#include "tzone/regularized.hpp"
#include "tzone/rng.hpp"
#include "tzone/sim.hpp"
#include "tzone/special_functions.hpp"

namespace tzone::app {

namespace {

ModelParams unit_params() { return ModelParams{1.0, 1.0, 1.0, 0.0, 0.5, 1.0}; }

// Sample sizes; quick runs trade paths for wall-clock time.
struct Sizes {
    std::size_t c4_samples, c5_paths, c8_paths, c9_paths, c9_rms_paths, c11_paths;
};

Sizes sizes(bool quick) {
    if (quick) return {1'000'000, 20'000, 10'000, 4'000, 500, 300};
    return {1'000'000, 200'000, 100'000, 20'000, 2'000, 1'000};
}

class Context {
public:
    explicit Context(const AcceptanceOptions& o) : opts_(o), tol_(tolerance_table(o.quick)), size_(sizes(o.quick)) {
        for (const auto& [name, value] : o.tolerance_overrides) {
            const auto it = tol_.find(name);
            if (it == tol_.end()) throw std::invalid_argument("unknown tolerance '" + name + "'");
            it->second = value;
        }
    }

    double tol(const std::string& name) const { return tol_.at(name); }
    const Sizes& size() const { return size_; }

    SimConfig sim(std::size_t paths, std::size_t steps) const {
        SimConfig c;
        c.n_paths = paths;
        c.n_steps = steps;
        c.seed = opts_.seed;
        c.workers = opts_.workers;
        return c;
    }

    // Criteria 5 and 6 share the ClosedFormOptimal run.
    McEstimate objective(const Strategy& s, const SimConfig& cfg) {
        const std::string key = strategy_name(s) + "/" + std::to_string(cfg.n_steps) + "/" +
                                std::to_string(cfg.brownian_refinement) + "/" + std::to_string(cfg.n_paths);
        const auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        return cache_[key] = mc_objective(unit_params(), s, cfg);
    }

private:
    AcceptanceOptions opts_;
    std::map<std::string, double> tol_;
    Sizes size_;
    std::map<std::string, McEstimate> cache_;
};

struct Outcome {
    bool passed = false;
    std::string detail;
    std::vector<std::pair<std::string, double>> metrics;
};

std::string g(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

Outcome boundary_identity(Context& ctx) {
    const double tol = ctx.tol("c1.tol");
    const double sets[3][3] = {{1, 1, 1}, {2, 1, 0.5}, {1, 3, 2}};
    double worst = 0.0;
    for (const auto& s : sets) {
        const ModelParams p{s[0], s[1], s[2], 0.0, 0.5, 1.0};
        const ClosedForm cf(p);
        for (double t : {0.1, 0.5, 1.0}) {
            worst = std::max(worst, std::abs(cf.du_dz(t, p.c) + 1.0));
            // generic quotient, no special-casing of the barrier
            worst = std::max(worst, std::abs(cf.dpsi_dx(t, 0.0) / (p.beta() * cf.psi(t, 0.0)) + 1.0));
        }
    }
    return {worst < tol, "max |dU/dz(t,c) + 1| = " + g(worst) + " (tol " + g(tol) + ")", {{"max_abs_error", worst}}};
}

Outcome pde_residual(Context& ctx) {
    const double tol = ctx.tol("c2.tol");
    const double h = 1e-4;
    const double sets[3][3] = {{1, 1, 1}, {2, 1, 0.5}, {1, 3, 2}};
    double worst = 0.0;
    for (const auto& s : sets) {
        // horizon past 1 so the time stencil at t = 1 stays in the domain
        const ModelParams p{s[0], s[1], s[2], 0.0, 0.5, 1.0 + 10 * h};
        const ClosedForm cf(p);
        const double q = p.gamma * p.gamma / (4.0 * p.kappa);
        for (int i = 1; i <= 200; ++i) {
            const double t = 0.05 + 0.95 * i / 200.0;
            for (int j = 0; j < 200; ++j) {
                const double z = std::max(p.c + h, p.c + 6.0 * j / 199.0);
                const double u = cf.value_u(t, z);
                const double ut = (cf.value_u(t + h, z) - cf.value_u(t - h, z)) / (2 * h);
                const double up = cf.value_u(t, z + h);
                const double um = cf.value_u(t, z - h);
                const double uz = (up - um) / (2 * h);
                const double uzz = (up - 2 * u + um) / (h * h);
                worst = std::max(worst, std::abs(ut - 0.5 * p.sigma * p.sigma * uzz - q * uz * uz));
            }
        }
    }
    return {worst < tol, "max FD residual = " + g(worst) + " (tol " + g(tol) + ")", {{"max_residual", worst}}};
}

Outcome heat_identity(Context& ctx) {
    const double tol = ctx.tol("c3.tol");
    const double h = 1e-5;
    const ModelParams p = unit_params();
    const ClosedForm cf(p);
    double worst = 0.0;
    for (std::uint32_t i = 0; i < 1000; ++i) {
        const auto r = rng::Philox4x32::generate({i, 0, 0, 0}, {0x5eed, 3});
        const double t = 0.05 + 0.95 * rng::to_open_unit(rng::join(r[0], r[1]));
        const double x = h + 6.0 * rng::to_open_unit(rng::join(r[2], r[3]));
        const double xx = (cf.dpsi_dx(t, x + h) - cf.dpsi_dx(t, x - h)) / (2 * h);
        worst = std::max(worst, std::abs(xx - 2.0 / (p.sigma * p.sigma) * cf.dpsi_dt(t, x)));
    }
    return {worst < tol, "max |psi_xx - (2/sigma^2) psi_t| = " + g(worst) + " over 1000 points (tol " + g(tol) + ")",
            {{"max_abs_error", worst}}};
}

Outcome barrier_value(Context& ctx) {
    const double tol = ctx.tol("c4.tol");
    const double k = ctx.tol("c4.sigmas");
    const ModelParams p = unit_params();
    const double b = p.beta() * p.sigma;
    const double dual = std::log(2.0 * std::exp(0.5 * b * b) * special::normal_cdf(b)) / p.beta();
    const double u = ClosedForm(p).value_u(1.0, p.c);
    const McEstimate mc = value_u_mc(p, 1.0, p.c, ctx.sim(ctx.size().c4_samples, 1), LocalTimeMethod::exact_law);
    const double diff = std::abs(u - dual);
    const double mc_diff = std::abs(mc.mean - u);
    const bool ok = diff < tol && mc_diff <= k * mc.std_error;
    return {ok,
            "U(1,c) = " + format_double(u) + ", |U - dual| = " + g(diff) + "; exact-law MC " + g(mc.mean) + " +- " +
                g(mc.std_error) + " (|diff| = " + g(mc_diff / mc.std_error) + " se)",
            {{"u", u}, {"dual_abs_error", diff}, {"mc_mean", mc.mean}, {"mc_std_error", mc.std_error}}};
}

Outcome theorem_one(Context& ctx) {
    const double k = ctx.tol("c5.sigmas");
    const double slack = ctx.tol("c5.abs");
    const ModelParams p = unit_params();
    const double target = ClosedForm(p).value_u(1.0, p.s0);
    const SimConfig fine = ctx.sim(ctx.size().c5_paths, 2000);
    SimConfig coarse = fine;
    coarse.n_steps = 1000;
    coarse.brownian_refinement = 2;  // same Brownian paths as `fine`
    const McEstimate mf = ctx.objective(strategy::ClosedFormOptimal{}, fine);
    const McEstimate mc = ctx.objective(strategy::ClosedFormOptimal{}, coarse);
    const double ef = mf.mean - target;
    const double ec = mc.mean - target;
    const double bound = std::max(k * mf.std_error, slack);
    const bool ok = std::abs(ef) <= bound && std::abs(ef) < std::abs(ec);
    return {ok,
            "mc " + g(mf.mean) + " +- " + g(mf.std_error) + " vs U(1,s0) " + g(target) + ", |err| " + g(std::abs(ef)) +
                " <= " + g(bound) + "; |err| 1000 -> 2000 steps: " + g(std::abs(ec)) + " -> " + g(std::abs(ef)),
            {{"mean", mf.mean}, {"std_error", mf.std_error}, {"target", target}, {"err_2000", ef}, {"err_1000", ec}}};
}

Outcome suboptimality(Context& ctx) {
    const double k = ctx.tol("c6.sigmas");
    const SimConfig cfg = ctx.sim(ctx.size().c5_paths, 2000);
    const McEstimate opt = ctx.objective(strategy::ClosedFormOptimal{}, cfg);
    const Strategy others[] = {strategy::Zero{}, strategy::Constant{-0.5}, strategy::Constant{0.5},
                               strategy::ClosedFormOptimal{1.5}};
    bool ok = true;
    std::string detail = "optimal " + g(opt.mean) + ";";
    Outcome out;
    for (const auto& s : others) {
        const McEstimate m = ctx.objective(s, cfg);
        const double gap = opt.mean - m.mean;
        const double se = std::hypot(opt.std_error, m.std_error);
        ok = ok && gap > k * se;
        detail += " " + strategy_name(s) + " gap " + g(gap / se) + " se;";
        out.metrics.emplace_back(strategy_name(s), m.mean);
    }
    detail.pop_back();
    out.passed = ok;
    out.detail = detail + " (need > " + g(k) + ")";
    return out;
}

Grid1D unit_grid(std::size_t nz, std::size_t nt) { return {0.0, 6.0, nz, nt, 1.0, 0.0}; }

Outcome hopf_cole(Context& ctx) {
    const double tol = ctx.tol("c7.tol");
    const ModelParams p = unit_params();
    const Grid1D grid = unit_grid(601, 2000);
    const auto hjb = solve_hjb_eps(p, 1e-2, grid);
    const auto hc = solve_hopf_cole(p, 1e-2, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < hjb.values.values().size(); ++i) {
        worst = std::max(worst, std::abs(hjb.values.values()[i] - hc.u.values()[i]));
    }
    return {worst < tol, "sup |U_hjb - log(h)/beta| = " + g(worst) + " (tol " + g(tol) + ")", {{"sup_diff", worst}}};
}

Outcome feynman_kac(Context& ctx) {
    const double k = ctx.tol("c8.sigmas");
    const double slack = ctx.tol("c8.abs");
    const ModelParams p = unit_params();
    const double eps = 1e-2;
    const auto pde = solve_hjb_eps(p, eps, unit_grid(601, 2000)).values;
    const RegularizedValue rv{p, eps, ctx.sim(ctx.size().c8_paths, 1000)};
    const std::vector<double> zs{0.0, 0.5, 1.0};
    bool ok = true;
    double worst_se = 0.0;
    double worst_abs = 0.0;
    Outcome out;
    for (double t : {0.5, 1.0}) {
        const auto mc = u_eps_mc(rv, t, zs);
        for (std::size_t j = 0; j < zs.size(); ++j) {
            const double diff = std::abs(pde.interpolate(t, zs[j]) - mc[j].mean);
            ok = ok && diff <= std::max(k * mc[j].std_error, slack);
            worst_abs = std::max(worst_abs, diff);
            worst_se = std::max(worst_se, diff / mc[j].std_error);
        }
    }
    out.passed = ok;
    out.detail = "6 probes: max |pde - mc| = " + g(worst_abs) + " (max " + g(worst_se) + " se; bound max(" + g(k) +
                 " se, " + g(slack) + "))";
    out.metrics = {{"max_abs_diff", worst_abs}, {"max_diff_in_se", worst_se}};
    return out;
}

Outcome eps_convergence(Context& ctx) {
    const double min_slope = ctx.tol("c9.slope");
    const ModelParams p = unit_params();
    const std::vector<double> eps{1e-1, 1e-2, 1e-3};
    const std::vector<double> zs{0.0, 0.25, 0.5, 1.0, 2.0};
    const auto rows = convergence_study(p, eps, 1.0, zs, ctx.sim(ctx.size().c9_paths, 4000));
    bool decreasing = true;
    for (std::size_t i = 1; i < rows.size(); ++i) decreasing = decreasing && rows[i].sup_abs_error < rows[i - 1].sup_abs_error;

    const auto rms = local_time_rms_study(p, eps, 1.0, p.c, ctx.sim(ctx.size().c9_rms_paths, 40000));
    // least-squares slope of log rms against log eps
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rms) {
        const double x = std::log(r.eps);
        const double y = std::log(r.rms);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(rms.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    Outcome out;
    out.passed = decreasing && slope >= min_slope;
    out.detail = "sup|U_eps - U|: " + g(rows[0].sup_abs_error) + ", " + g(rows[1].sup_abs_error) + ", " +
                 g(rows[2].sup_abs_error) + (decreasing ? " (decreasing)" : " (NOT decreasing)") + "; rms " +
                 g(rms[0].rms) + ", " + g(rms[1].rms) + ", " + g(rms[2].rms) + " slope " + g(slope) + " (need >= " +
                 g(min_slope) + ")";
    for (const auto& r : rows) out.metrics.emplace_back("sup_error_eps_" + format_double(r.eps), r.sup_abs_error);
    out.metrics.emplace_back("rms_slope", slope);
    return out;
}

double singular_error(const ModelParams& p, const Grid1D& grid) {
    const auto sol = solve_singular(p, grid);
    const ClosedForm cf(p);
    double worst = 0.0;
    for (std::size_t k = 1; k <= grid.nt; ++k) {
        for (std::size_t j = 0; j < grid.nz; ++j) {
            worst = std::max(worst, std::abs(sol.values.at(k, j) - cf.value_u(grid.t(k), grid.z(j))));
        }
    }
    return worst;
}

Outcome singular_accuracy(Context& ctx) {
    const double tol = ctx.tol("c10.tol");
    const double max_ratio = ctx.tol("c10.ratio");
    const ModelParams p = unit_params();
    const double e1 = singular_error(p, unit_grid(601, 2000));
    const double e2 = singular_error(p, unit_grid(1201, 4000));
    const double ratio = e2 / e1;
    return {e1 < tol && ratio <= max_ratio,
            "sup error 601x2000 " + g(e1) + " (tol " + g(tol) + "), 1201x4000 " + g(e2) + ", ratio " + g(ratio) +
                " (need <= " + g(max_ratio) + ")",
            {{"error_601x2000", e1}, {"error_1201x4000", e2}, {"ratio", ratio}}};
}

Outcome reflected_sanity(Context& ctx) {
    const double k = ctx.tol("c11.sigmas");
    const double lo = ctx.tol("c11.ratio_lo");
    const double hi = ctx.tol("c11.ratio_hi");
    ModelParams p = unit_params();
    p.s0 = p.c;
    SimConfig cfg = ctx.sim(ctx.size().c11_paths, 1'000'000);
    cfg.band_eps = 1e-2;
    const auto records = simulate_paths(p, strategy::Zero{}, cfg);
    std::vector<double> push, band;
    for (const auto& r : records) {
        push.push_back(r.pushing);
        band.push_back(r.band_local_time);
    }
    const McEstimate mp = estimate(push);
    const McEstimate mb = estimate(band);
    const double target = std::sqrt(2.0 / std::numbers::pi);
    const double ratio = mb.mean / mp.mean;
    const bool ok = std::abs(mp.mean - target) <= k * mp.std_error && ratio >= lo && ratio <= hi;
    return {ok,
            "E[pushing] " + g(mp.mean) + " +- " + g(mp.std_error) + " vs sqrt(2/pi) " + g(target) +
                "; band/pushing " + g(ratio) + " (need [" + g(lo) + ", " + g(hi) + "])",
            {{"mean_pushing", mp.mean}, {"std_error", mp.std_error}, {"band_ratio", ratio}}};
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*run)(Context&);
};

constexpr Criterion kCriteria[] = {
    {1, "boundary identity", boundary_identity},
    {2, "singular PDE residual", pde_residual},
    {3, "heat identity for psi", heat_identity},
    {4, "value at the barrier", barrier_value},
    {5, "optimal strategy attains U", theorem_one},
    {6, "suboptimality ordering", suboptimality},
    {7, "Hopf-Cole equivalence", hopf_cole},
    {8, "PDE vs Feynman-Kac", feynman_kac},
    {9, "eps -> 0 convergence", eps_convergence},
    {10, "singular PDE accuracy", singular_accuracy},
    {11, "reflected simulator sanity", reflected_sanity},
};

}  // namespace

std::map<std::string, double> tolerance_table(bool quick) {
    return {
        {"c1.tol", 1e-10},
        {"c2.tol", 1e-4},
        {"c3.tol", 1e-6},
        {"c4.tol", 1e-10},
        {"c4.sigmas", 3.0},
        {"c5.sigmas", 3.0},
        {"c5.abs", quick ? 0.03 : 0.02},
        {"c6.sigmas", 2.0},
        {"c7.tol", 1e-3},
        {"c8.sigmas", 3.0},
        {"c8.abs", quick ? 3e-2 : 2e-2},
        {"c9.slope", quick ? 0.15 : 0.2},
        {"c10.tol", 5e-3},
        {"c10.ratio", 0.5},
        {"c11.sigmas", 3.0},
        {"c11.ratio_lo", quick ? 1.7 : 1.8},
        {"c11.ratio_hi", quick ? 2.3 : 2.2},
    };
}

int criterion_count() { return static_cast<int>(std::size(kCriteria)); }

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    for (int id : options.only) {
        if (id < 1 || id > criterion_count()) throw std::invalid_argument("no criterion " + std::to_string(id));
    }
    Context ctx(options);
    std::vector<CriterionResult> results;
    for (const auto& c : kCriteria) {
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) {
            continue;
        }
        CriterionResult r;
        r.id = c.id;
        r.name = c.name;
        const auto start = std::chrono::steady_clock::now();
        try {
            Outcome o = c.run(ctx);
            r.passed = o.passed;
            r.detail = std::move(o.detail);
            r.metrics = std::move(o.metrics);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (on_result) on_result(r);
        results.push_back(std::move(r));
    }
    return results;
}

std::string format_result_line(const CriterionResult& r) {
    std::ostringstream s;
    s << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << ": " << r.detail << " ["
      << std::fixed;
    s.precision(1);
    s << r.seconds << " s]";
    return s.str();
}

std::string results_json(const std::vector<CriterionResult>& results) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json m = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.metrics) m[k] = v;
        arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"metrics", m}});
    }
    return arr.dump(2) + "\n";
}

}  // namespace tzone::app
