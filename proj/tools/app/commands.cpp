#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "acceptance.hpp"
#include "output.hpp"
#include "tzone/closed_form.hpp"
#include "tzone/pde.hpp"
#include "tzone/regularized.hpp"
#include "tzone/sim.hpp"

namespace tzone::app {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json params_json(const ModelParams& p) {
    return {{"sigma", p.sigma}, {"gamma", p.gamma}, {"kappa", p.kappa}, {"c", p.c},
            {"s0", p.s0},       {"horizon", p.horizon}, {"beta", p.beta()}};
}

// Calendar-time x price grid used for tabulated surfaces.
Grid1D display_grid(const RunSpec& spec) {
    if (spec.t_points < 2 || spec.z_points < 3) {
        throw std::invalid_argument("need --t-points >= 2 and --z-points >= 3");
    }
    if (!(spec.z_span > 0.0)) throw std::invalid_argument("--z-span must be > 0");
    return {spec.params.c, spec.params.c + spec.z_span, spec.z_points, spec.t_points - 1,
            spec.params.horizon, 0.0};
}

std::string heatmap(const Surface& s, const std::string& title, const std::string& label) {
    std::ostringstream svg;
    write_heatmap_svg(svg, s, HeatmapOptions{title, "z", "t", label});
    return svg.str();
}

std::vector<double> default_z_list(const RunSpec& spec) {
    if (!spec.z_list.empty()) return spec.z_list;
    std::vector<double> zs;
    for (double dz : {0.0, 0.25, 0.5, 1.0, 2.0}) zs.push_back(spec.params.c + dz * spec.params.sigma);
    return zs;
}

// Enough steps that dt <= eps / (4 sigma^2) for the smallest eps.
SimConfig sized_for_kernel(const RunSpec& spec, const std::vector<double>& eps_list, double t) {
    SimConfig cfg = spec.sim;
    if (spec.steps_given) return cfg;
    const double eps = *std::min_element(eps_list.begin(), eps_list.end());
    const double max_dt = eps / (4.0 * spec.params.sigma * spec.params.sigma);
    cfg.n_steps = std::max<std::size_t>(1000, static_cast<std::size_t>(std::ceil(t / max_dt)));
    return cfg;
}

}  // namespace

int cmd_value(const RunSpec& spec, std::ostream& out) {
    const ClosedForm cf(spec.params);
    const Grid1D g = display_grid(spec);
    const double T = spec.params.horizon;
    Surface u(g), du(g), v(g);
    for (std::size_t k = 0; k <= g.nt; ++k) {
        const double t = g.t(k);
        for (std::size_t j = 0; j < g.nz; ++j) {
            const double z = g.z(j);
            u.at(k, j) = cf.value_u(t, z);
            du.at(k, j) = t > 0.0 ? cf.du_dz(t, z) : kNaN;
            v.at(k, j) = t < T ? cf.v_star(t, z) : kNaN;
        }
    }
    if (spec.wants(Format::csv)) {
        std::ostringstream csv;
        CsvWriter w(csv, {"t", "z", "U", "dUdz", "v_star"});
        for (std::size_t k = 0; k <= g.nt; ++k) {
            for (std::size_t j = 0; j < g.nz; ++j) {
                w.cell(g.t(k)).cell(g.z(j)).cell(u.at(k, j)).cell(du.at(k, j)).cell(v.at(k, j));
                w.end_row();
            }
        }
        out << "wrote " << write_text_file(spec.out_dir, "value.csv", csv.str()).string() << "\n";
    }
    if (spec.wants(Format::svg)) {
        out << "wrote "
            << write_text_file(spec.out_dir, "value_U.svg", heatmap(u, "value function U(t,z)", "U")).string()
            << "\n";
        out << "wrote "
            << write_text_file(spec.out_dir, "value_vstar.svg",
                               heatmap(v, "optimal speed v*(t,z)", "v*"))
                   .string()
            << "\n";
    }
    out << "U(T, c) = " << format_double(cf.value_u(T, spec.params.c)) << "\n";
    return 0;
}

int cmd_strategy(const RunSpec& spec, std::ostream& out) {
    const Strategy strat = parse_strategy(spec.strategies.at(0), spec.params);
    const Grid1D g = display_grid(spec);
    Surface v(g);
    for (std::size_t k = 0; k <= g.nt; ++k) {
        for (std::size_t j = 0; j < g.nz; ++j) {
            const bool undefined = std::holds_alternative<strategy::ClosedFormOptimal>(strat) &&
                                   g.t(k) >= spec.params.horizon;
            v.at(k, j) = undefined ? kNaN : eval_strategy(strat, spec.params, g.t(k), g.z(j));
        }
    }
    if (spec.wants(Format::csv)) {
        std::ostringstream csv;
        CsvWriter w(csv, {"t", "z", "v"});
        for (std::size_t k = 0; k <= g.nt; ++k) {
            for (std::size_t j = 0; j < g.nz; ++j) {
                w.cell(g.t(k)).cell(g.z(j)).cell(v.at(k, j));
                w.end_row();
            }
        }
        out << "wrote " << write_text_file(spec.out_dir, "strategy.csv", csv.str()).string() << "\n";
    }
    if (spec.wants(Format::svg)) {
        out << "wrote "
            << write_text_file(spec.out_dir, "strategy.svg",
                               heatmap(v, "speed of " + strategy_name(strat), "v"))
                   .string()
            << "\n";
    }
    out << strategy_name(strat) << ": growth constant " << format_double(growth_constant(strat, spec.params))
        << "\n";
    return 0;
}

int cmd_simulate(const RunSpec& spec, std::ostream& out) {
    const Strategy strat = parse_strategy(spec.strategies.at(0), spec.params);
    const auto records = simulate_paths(spec.params, strat, spec.sim);
    std::vector<double> payoff, cost, pushing, band;
    for (const auto& r : records) {
        payoff.push_back(r.payoff_with(spec.convention));
        cost.push_back(r.cost);
        pushing.push_back(r.pushing);
        band.push_back(r.band_local_time);
    }
    const McEstimate m = estimate(payoff);
    const double target = ClosedForm(spec.params).value_u(spec.params.horizon, spec.params.s0);

    json summary;
    summary["strategy"] = strategy_name(strat);
    summary["convention"] = spec.convention == InventoryConvention::pushing ? "pushing" : "band";
    summary["mean"] = m.mean;
    summary["std_error"] = m.std_error;
    summary["n_paths"] = m.n_paths;
    summary["n_steps"] = spec.sim.n_steps;
    summary["seed"] = spec.sim.seed;
    summary["band_width"] = spec.sim.band_width(spec.params.sigma, spec.params.horizon);
    summary["closed_form_target"] = target;
    if (m.std_error > 0.0) {
        summary["z_score"] = (m.mean - target) / m.std_error;
    } else {
        summary["z_score"] = nullptr;
    }
    summary["mean_cost"] = estimate(cost).mean;
    summary["mean_pushing"] = estimate(pushing).mean;
    summary["mean_band_local_time"] = estimate(band).mean;
    summary["params"] = params_json(spec.params);

    const std::string text = summary.dump(2) + "\n";
    out << text;
    if (spec.wants(Format::json)) write_text_file(spec.out_dir, "simulate.json", text);
    if (spec.per_path && spec.wants(Format::csv)) {
        std::ostringstream csv;
        CsvWriter w(csv, {"path_index", "terminal_s", "pushing", "band_local_time", "cost", "payoff"});
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& r = records[i];
            w.cell(i).cell(r.terminal_s).cell(r.pushing).cell(r.band_local_time).cell(r.cost).cell(
                r.payoff_with(spec.convention));
            w.end_row();
        }
        write_text_file(spec.out_dir, "paths.csv", csv.str());
    }
    return 0;
}

namespace {

void write_ueps_rows(CsvWriter& w, double eps, std::span<const double> zs,
                     std::span<const McEstimate> u_eps, const ClosedForm& cf, double t) {
    for (std::size_t j = 0; j < zs.size(); ++j) {
        const double exact = cf.value_u(t, zs[j]);
        w.cell(eps).cell(zs[j]).cell(u_eps[j].mean).cell(u_eps[j].std_error).cell(exact).cell(
            std::abs(u_eps[j].mean - exact));
        w.end_row();
    }
}

const std::vector<std::string> kUepsHeader{"eps", "z", "U_eps", "std_error", "U_closed_form", "abs_error"};

}  // namespace

int cmd_ueps(const RunSpec& spec, std::ostream& out) {
    const std::vector<double> eps_list = spec.eps_list.empty() ? std::vector<double>{1e-2} : spec.eps_list;
    const auto zs = default_z_list(spec);
    const SimConfig mc = sized_for_kernel(spec, eps_list, spec.t_eval);
    const ClosedForm cf(spec.params);
    std::ostringstream csv;
    CsvWriter w(csv, kUepsHeader);
    for (double eps : eps_list) {
        const auto u = u_eps_mc(RegularizedValue{spec.params, eps, mc}, spec.t_eval, zs);
        write_ueps_rows(w, eps, zs, u, cf, spec.t_eval);
    }
    out << csv.str();
    if (spec.wants(Format::csv)) write_text_file(spec.out_dir, "ueps.csv", csv.str());
    return 0;
}

int cmd_converge(const RunSpec& spec, std::ostream& out) {
    const std::vector<double> eps_list =
        spec.eps_list.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3} : spec.eps_list;
    const auto zs = default_z_list(spec);
    const SimConfig mc = sized_for_kernel(spec, eps_list, spec.t_eval);
    const ClosedForm cf(spec.params);
    const auto rows = convergence_study(spec.params, eps_list, spec.t_eval, zs, mc);

    std::ostringstream csv, sup;
    CsvWriter w(csv, kUepsHeader);
    CsvWriter ws(sup, {"eps", "sup_abs_error", "z_at_sup"});
    out << "      eps   sup|U_eps - U|   at z\n";
    for (const auto& row : rows) {
        write_ueps_rows(w, row.eps, zs, row.u_eps, cf, spec.t_eval);
        ws.cell(row.eps).cell(row.sup_abs_error).cell(row.z_at_sup);
        ws.end_row();
        out << std::setw(9) << format_double(row.eps) << "   " << std::setw(14) << std::setprecision(6)
            << row.sup_abs_error << "   " << format_double(row.z_at_sup) << "\n";
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        decreasing = decreasing && rows[k].sup_abs_error < rows[k - 1].sup_abs_error;
    }
    out << "strictly decreasing: " << (decreasing ? "yes" : "no") << "\n";
    if (spec.params.sigma != 1.0) {
        out << "note: the eps-limit has boundary slope -1/sigma^2 and matches U only for sigma = 1\n";
    }
    if (spec.wants(Format::csv)) {
        write_text_file(spec.out_dir, "converge.csv", csv.str());
        write_text_file(spec.out_dir, "converge_sup.csv", sup.str());
    }
    return 0;
}

int cmd_pde(const RunSpec& spec, std::ostream& out) {
    const ModelParams& p = spec.params;
    Grid1D g = spec.grid;
    g.t_max = p.horizon;
    const double eps = spec.eps_list.empty() ? 1e-2 : spec.eps_list.front();
    Surface u;
    std::string label;
    if (spec.equation == "singular") {
        const auto sol = solve_singular(p, g);
        u = sol.values;
        label = "singular HJB";
        out << "stability ratio " << format_double(sol.certificate.worst_ratio) << "\n";
    } else if (spec.equation == "hjb-eps") {
        const auto sol = solve_hjb_eps(p, eps, g);
        u = sol.values;
        label = "eps-HJB, eps=" + format_double(eps);
        out << "stability ratio " << format_double(sol.certificate.worst_ratio) << "\n";
    } else if (spec.equation == "hopf-cole") {
        u = solve_hopf_cole(p, eps, g).u;
        label = "Hopf-Cole, eps=" + format_double(eps);
    } else {
        throw std::invalid_argument("unknown --equation '" + spec.equation + "' (singular, hjb-eps, hopf-cole)");
    }
    const std::size_t st = std::max<std::size_t>(1, spec.csv_t_stride);
    const std::size_t sz = std::max<std::size_t>(1, spec.csv_z_stride);
    auto on_output_grid = [&](std::size_t k, std::size_t j) {
        return (k % st == 0 || k == g.nt) && (j % sz == 0 || j + 1 == g.nz);
    };

    if (spec.wants(Format::csv)) {
        std::ostringstream csv;
        CsvWriter w(csv, {"t", "z", "value"});
        for (std::size_t k = 0; k <= g.nt; ++k) {
            for (std::size_t j = 0; j < g.nz; ++j) {
                if (!on_output_grid(k, j)) continue;
                w.cell(g.t(k)).cell(g.z(j)).cell(u.at(k, j));
                w.end_row();
            }
        }
        out << "wrote " << write_text_file(spec.out_dir, "pde.csv", csv.str()).string() << "\n";
    }
    if (spec.wants(Format::svg)) {
        out << "wrote " << write_text_file(spec.out_dir, "pde.svg", heatmap(u, label, "U")).string() << "\n";
    }
    if (spec.compare) {
        if (*spec.compare != "closed-form") {
            throw std::invalid_argument("--compare supports only 'closed-form'");
        }
        if (g.z_min < p.c) throw std::invalid_argument("--compare closed-form needs z_min >= c");
        const ClosedForm cf(p);
        std::ostringstream csv;
        CsvWriter w(csv, {"t", "sup_abs_error", "z_at_sup"});
        double worst = 0.0;
        for (std::size_t k = 1; k <= g.nt; ++k) {
            double row_worst = 0.0;
            double z_at = g.z_min;
            for (std::size_t j = 0; j < g.nz; ++j) {
                const double e = std::abs(u.at(k, j) - cf.value_u(g.t(k), g.z(j)));
                if (e > row_worst) {
                    row_worst = e;
                    z_at = g.z(j);
                }
            }
            worst = std::max(worst, row_worst);
            if (k % st == 0 || k == g.nt) {
                w.cell(g.t(k)).cell(row_worst).cell(z_at);
                w.end_row();
            }
        }
        out << "sup |U_pde - U_closed_form| = " << format_double(worst) << "\n";
        if (spec.wants(Format::csv)) {
            out << "wrote " << write_text_file(spec.out_dir, "pde_compare.csv", csv.str()).string() << "\n";
        } else {
            out << csv.str();
        }
    }
    return 0;
}

int cmd_compare(const RunSpec& spec, std::ostream& out) {
    if (spec.strategies.size() < 2) throw std::invalid_argument("compare needs at least two strategies");
    struct Row {
        std::string name;
        McEstimate m;
        bool optimal;
    };
    std::vector<Row> rows;
    for (const auto& s : spec.strategies) {
        const Strategy strat = parse_strategy(s, spec.params);
        const auto* opt = std::get_if<strategy::ClosedFormOptimal>(&strat);
        rows.push_back({strategy_name(strat), mc_objective(spec.params, strat, spec.sim, spec.convention),
                        opt != nullptr && opt->scale == 1.0});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.m.mean > b.m.mean; });

    std::ostringstream csv;
    CsvWriter w(csv, {"rank", "strategy", "mean", "std_error"});
    out << "rank  strategy              mean          std_error\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        w.cell(i + 1).cell(rows[i].name).cell(rows[i].m.mean).cell(rows[i].m.std_error);
        w.end_row();
        out << std::left << std::setw(6) << i + 1 << std::setw(22) << rows[i].name << std::setprecision(6)
            << std::setw(14) << rows[i].m.mean << rows[i].m.std_error << "\n";
    }
    out << std::right;
    const auto best_opt = std::find_if(rows.begin(), rows.end(), [](const Row& r) { return r.optimal; });
    if (best_opt != rows.end()) {
        bool first = true;
        for (const auto& r : rows) {
            const double gap = r.m.mean - best_opt->m.mean;
            const double se = std::hypot(r.m.std_error, best_opt->m.std_error);
            if (!r.optimal && gap > 2.0 * se) first = false;
        }
        out << "optimal first within noise: " << (first ? "yes" : "no") << "\n";
    }
    if (spec.wants(Format::csv)) write_text_file(spec.out_dir, "compare.csv", csv.str());
    return 0;
}

int cmd_accept(const RunSpec& spec, std::ostream& out) {
    AcceptanceOptions opts;
    opts.quick = spec.quick;
    opts.only = spec.only;
    opts.tolerance_overrides = spec.tolerance_overrides;
    opts.workers = spec.sim.workers;
    opts.seed = spec.sim.seed;
    const auto results = run_acceptance(opts, [&](const CriterionResult& r) {
        out << format_result_line(r) << std::endl;
    });
    bool ok = true;
    for (const auto& r : results) ok = ok && r.passed;
    out << (ok ? "ALL PASS" : "FAILURES") << " (" << results.size() << " criteria"
        << (spec.quick ? ", quick" : "") << ")\n";
    if (spec.wants(Format::json)) write_text_file(spec.out_dir, "accept.json", results_json(results));
    return ok ? 0 : 1;
}

int dispatch(const RunSpec& spec, std::ostream& out) {
    const std::string& c = spec.subcommand;
    if (c == "value") return cmd_value(spec, out);
    if (c == "strategy") return cmd_strategy(spec, out);
    if (c == "simulate") return cmd_simulate(spec, out);
    if (c == "ueps") return cmd_ueps(spec, out);
    if (c == "pde") return cmd_pde(spec, out);
    if (c == "converge") return cmd_converge(spec, out);
    if (c == "compare") return cmd_compare(spec, out);
    if (c == "accept") return cmd_accept(spec, out);
    throw std::invalid_argument("unknown subcommand '" + c + "'");
}

}  // namespace tzone::app
