#include "cli.hpp"

#include <cmath>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"

namespace tzone::app {

namespace {

struct Flags {
    std::optional<std::string> config;
    std::optional<double> sigma, gamma, kappa, barrier, s0, horizon;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths, steps;
    std::optional<double> band;
    std::size_t refinement = 1;
    unsigned workers = 0;
    std::vector<double> eps;
    std::string out = "tzone-out";
    std::string format = "csv,json,svg";

    std::string strategy = "optimal";
    std::vector<std::string> strategies{"optimal", "zero", "constant:-0.5", "constant:0.5", "optimal*1.5"};
    std::size_t t_points = 51, z_points = 121;
    double z_span = 3.0;
    std::string convention = "pushing";
    bool per_path = false;
    std::optional<double> t_eval;
    std::vector<double> z_list;
    std::string equation = "singular";
    std::size_t nz = 601, nt = 2000;
    std::optional<double> z_max;
    std::optional<std::string> compare;
    std::size_t t_stride = 20, z_stride = 5;
    bool quick = false;
    std::vector<int> only;
    std::vector<std::string> tolerances;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "key=value parameter file (sigma, gamma, kappa, c, s0, horizon)");
    cmd->add_option("--sigma", f.sigma, "volatility");
    cmd->add_option("--gamma", f.gamma, "permanent impact");
    cmd->add_option("--kappa", f.kappa, "slippage coefficient");
    cmd->add_option("--barrier", f.barrier, "barrier level c");
    cmd->add_option("--s0", f.s0, "initial exchange rate");
    cmd->add_option("--horizon", f.horizon, "trading horizon T");
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_option("--paths", f.paths, "Monte Carlo paths");
    cmd->add_option("--steps", f.steps, "time steps per path");
    cmd->add_option("--band", f.band, "band width for the band convention (default 2 sigma sqrt(dt))");
    cmd->add_option("--refinement", f.refinement, "fine normals summed per step");
    cmd->add_option("--workers", f.workers, "worker threads (0 = all cores)");
    cmd->add_option("--eps", f.eps, "kernel variance(s), comma separated")->delimiter(',');
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--format", f.format, "comma list of csv, json, svg");
}

RunSpec build_spec(const std::string& name, const Flags& f) {
    RunSpec spec;
    spec.subcommand = name;
    if (f.config) apply_config(read_config_file(*f.config), spec.params);
    auto set = [](double& dst, const std::optional<double>& src) {
        if (src) dst = *src;
    };
    set(spec.params.sigma, f.sigma);
    set(spec.params.gamma, f.gamma);
    set(spec.params.kappa, f.kappa);
    set(spec.params.c, f.barrier);
    set(spec.params.s0, f.s0);
    set(spec.params.horizon, f.horizon);
    tzone::validate(spec.params);

    if (f.seed) spec.sim.seed = *f.seed;
    if (f.paths) spec.sim.n_paths = *f.paths;
    if (f.steps) spec.sim.n_steps = *f.steps;
    spec.steps_given = f.steps.has_value();
    if (f.band) spec.sim.band_eps = *f.band;
    spec.sim.brownian_refinement = f.refinement;
    spec.sim.workers = f.workers;
    spec.sim.validate();

    spec.eps_list = f.eps;
    spec.out_dir = f.out;
    spec.formats = parse_formats(f.format);
    spec.strategies = name == "compare" ? f.strategies : std::vector<std::string>{f.strategy};
    spec.t_points = f.t_points;
    spec.z_points = f.z_points;
    spec.z_span = f.z_span;
    if (f.convention == "pushing") spec.convention = tzone::InventoryConvention::pushing;
    else if (f.convention == "band") spec.convention = tzone::InventoryConvention::band;
    else throw std::invalid_argument("--convention must be pushing or band");
    spec.per_path = f.per_path;
    spec.t_eval = f.t_eval.value_or(spec.params.horizon);
    spec.z_list = f.z_list;

    spec.equation = f.equation;
    spec.grid.z_min = spec.params.c;
    spec.grid.z_max = f.z_max.value_or(spec.params.c + 6.0 * spec.params.sigma * std::sqrt(spec.params.horizon));
    spec.grid.nz = f.nz;
    spec.grid.nt = f.nt;
    spec.grid.t_max = spec.params.horizon;
    spec.grid.validate();
    spec.compare = f.compare;
    spec.csv_t_stride = f.t_stride;
    spec.csv_z_stride = f.z_stride;

    spec.quick = f.quick;
    spec.only = f.only;
    for (const auto& t : f.tolerances) spec.tolerance_overrides.insert(parse_override(t));
    return spec;
}

struct Parser {
    CLI::App app{"tzone: target-zone trader value functions, simulation and PDE checks"};
    Flags f;

    Parser() {
        app.require_subcommand(1);

        auto* value = app.add_subcommand("value", "closed-form U and v* surfaces (CSV + SVG)");
        auto* strat = app.add_subcommand("strategy", "tabulate a strategy's speed v(t,z)");
        auto* simulate = app.add_subcommand("simulate", "Monte Carlo objective of a strategy (JSON summary)");
        auto* ueps = app.add_subcommand("ueps", "regularized value U^eps by Feynman-Kac Monte Carlo");
        auto* pde = app.add_subcommand("pde", "solve the singular or regularized HJB on a grid");
        auto* converge = app.add_subcommand("converge", "sup |U^eps - U| along a decreasing eps list");
        auto* compare = app.add_subcommand("compare", "rank strategies by Monte Carlo payoff");
        auto* accept = app.add_subcommand("accept", "run the acceptance suite");
        for (auto* cmd : {value, strat, simulate, ueps, pde, converge, compare, accept}) add_common(cmd, f);

        for (auto* cmd : {value, strat}) {
            cmd->add_option("--t-points", f.t_points, "time nodes on [0, T]");
            cmd->add_option("--z-points", f.z_points, "price nodes on [c, c + z-span]");
            cmd->add_option("--z-span", f.z_span, "price range above the barrier");
        }
        for (auto* cmd : {strat, simulate}) {
            cmd->add_option("--strategy", f.strategy,
                            "optimal | optimal*<k> | zero | constant:<a> | regularized:<eps> | tabulated:<csv>");
        }
        simulate->add_option("--convention", f.convention, "inventory measure: pushing or band");
        simulate->add_flag("--per-path", f.per_path, "also write paths.csv");
        compare->add_option("--strategies", f.strategies, "comma separated strategy list")->delimiter(',');
        compare->add_option("--convention", f.convention, "inventory measure: pushing or band");
        for (auto* cmd : {ueps, converge}) {
            cmd->add_option("--t", f.t_eval, "time-to-go (default T)");
            cmd->add_option("--z", f.z_list, "prices, comma separated")->delimiter(',');
        }
        pde->add_option("--equation", f.equation, "singular | hjb-eps | hopf-cole");
        pde->add_option("--nz", f.nz, "price nodes");
        pde->add_option("--nt", f.nt, "time steps");
        pde->add_option("--z-max", f.z_max, "upper truncation (default c + 6 sigma sqrt(T))");
        pde->add_option("--compare", f.compare, "closed-form: emit the error table");
        pde->add_option("--t-stride", f.t_stride, "CSV keeps every n-th time row");
        pde->add_option("--z-stride", f.z_stride, "CSV keeps every n-th price column");
        accept->add_flag("--quick", f.quick, "reduced path counts and wider tolerances");
        accept->add_option("--only", f.only, "criterion ids, comma separated")->delimiter(',');
        accept->add_option("--tolerance", f.tolerances, "override a named tolerance, name=value");
    }

    void parse(const std::vector<std::string>& args) {
        std::vector<const char*> argv{"tzone"};
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    }

    std::string subcommand() const { return app.get_subcommands().front()->get_name(); }
};

}  // namespace

RunSpec parse_run_spec(const std::vector<std::string>& args) {
    Parser p;
    p.parse(args);
    return build_spec(p.subcommand(), p.f);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Parser p;
    try {
        p.parse(args);
    } catch (const CLI::ParseError& e) {
        return p.app.exit(e, out, err);
    }
    try {
        return dispatch(build_spec(p.subcommand(), p.f), out);
    } catch (const std::exception& e) {
        err << "tzone: error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace tzone::app
