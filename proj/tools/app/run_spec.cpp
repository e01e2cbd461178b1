#include "run_spec.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tzone/pde.hpp"

namespace tzone::app {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& s, const std::string& context) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw std::invalid_argument(context + ": not a number: '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

std::map<std::string, double> parse_config(const std::string& text) {
    static const std::set<std::string> keys{"sigma", "gamma", "kappa", "c", "s0", "horizon"};
    std::map<std::string, double> out;
    std::istringstream in(text);
    std::string line;
    for (int number = 1; std::getline(in, line); ++number) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = "config line " + std::to_string(number);
        if (eq == std::string::npos) throw std::invalid_argument(where + ": expected key=value");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        if (!keys.count(key)) throw std::invalid_argument(where + ": unknown key '" + key + "'");
        out[key] = to_double(trim(std::string_view(body).substr(eq + 1)), where);
    }
    return out;
}

std::map<std::string, double> read_config_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read config file " + path.string());
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

void apply_config(const std::map<std::string, double>& config, ModelParams& params) {
    for (const auto& [key, value] : config) {
        if (key == "sigma") params.sigma = value;
        else if (key == "gamma") params.gamma = value;
        else if (key == "kappa") params.kappa = value;
        else if (key == "c") params.c = value;
        else if (key == "s0") params.s0 = value;
        else if (key == "horizon") params.horizon = value;
    }
}

std::set<Format> parse_formats(const std::string& text) {
    std::set<Format> out;
    for (const auto& item : split(text, ',')) {
        if (item == "csv") out.insert(Format::csv);
        else if (item == "json") out.insert(Format::json);
        else if (item == "svg") out.insert(Format::svg);
        else throw std::invalid_argument("unknown format '" + item + "' (csv, json, svg)");
    }
    return out;
}

Grid1D regularized_grid(const ModelParams& params, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("regularized strategy needs eps > 0");
    Grid1D g;
    g.z_min = params.c;
    g.z_max = params.c + 6.0 * params.sigma * std::sqrt(params.horizon);
    const double dz = std::sqrt(eps) / 4.0;
    g.nz = std::max<std::size_t>(601, static_cast<std::size_t>(std::ceil((g.z_max - g.z_min) / dz)) + 1);
    g.t_max = params.horizon;
    g.nt = 2000;
    return g;
}

Strategy parse_strategy(const std::string& text, const ModelParams& params) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (text == "optimal") return strategy::ClosedFormOptimal{};
    if (text.rfind("optimal*", 0) == 0) {
        return strategy::ClosedFormOptimal{to_double(text.substr(8), "strategy " + text)};
    }
    if (text == "zero") return strategy::Zero{};
    if (head == "constant" && !arg.empty()) return strategy::Constant{to_double(arg, "strategy " + text)};
    if (head == "regularized" && !arg.empty()) {
        const double eps = to_double(arg, "strategy " + text);
        auto sol = solve_hopf_cole(params, eps, regularized_grid(params, eps));
        return strategy::RegularizedOptimal{eps, std::make_shared<const Surface>(std::move(sol.u))};
    }
    if (head == "tabulated" && !arg.empty()) {
        return strategy::Tabulated{std::make_shared<const Surface>(read_table_csv(arg))};
    }
    throw std::invalid_argument("unknown strategy '" + text +
                                "' (optimal, optimal*<k>, zero, constant:<a>, regularized:<eps>, "
                                "tabulated:<file>)");
}

Surface read_table_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read table " + path.string());
    std::string line;
    std::getline(f, line);  // header
    std::vector<std::array<double, 3>> rows;
    while (std::getline(f, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() < 3) throw std::invalid_argument("table rows need t,z,value: " + line);
        rows.push_back({to_double(cells[0], path.string()), to_double(cells[1], path.string()),
                        to_double(cells[2], path.string())});
    }
    std::vector<double> ts, zs;
    for (const auto& r : rows) {
        ts.push_back(r[0]);
        zs.push_back(r[1]);
    }
    auto uniq = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(ts);
    uniq(zs);
    if (ts.size() < 2 || zs.size() < 3 || ts.size() * zs.size() != rows.size()) {
        throw std::invalid_argument("table " + path.string() + " is not a full regular grid");
    }
    Grid1D g{zs.front(), zs.back(), zs.size(), ts.size() - 1, ts.back(), ts.front()};
    g.validate();
    Surface s(g);
    auto index = [](const std::vector<double>& axis, double v, double lo, double step) {
        const auto i = static_cast<std::size_t>(std::lround((v - lo) / step));
        if (i >= axis.size() || std::abs(axis[i] - v) > 1e-9 * std::max(1.0, std::abs(v))) {
            throw std::invalid_argument("table axis is not uniformly spaced");
        }
        return i;
    };
    for (const auto& r : rows) {
        s.at(index(ts, r[0], g.t0, g.dt()), index(zs, r[1], g.z_min, g.dz())) = r[2];
    }
    return s;
}

std::pair<std::string, double> parse_override(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("override must be name=value: " + text);
    return {trim(std::string_view(text).substr(0, eq)), to_double(trim(std::string_view(text).substr(eq + 1)), text)};
}

}  // namespace tzone::app
