#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "app/cli.hpp"
#include "app/output.hpp"
#include "app/run_spec.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tzone::app;

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("tzone_cli_" + std::to_string(counter_++) + "_" +
                                                   testing::UnitTest::GetInstance()->current_test_info()->name())) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

int run(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
    std::ostringstream o, e;
    const int code = run_cli(args, o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return code;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(-0.5), "-0.5");
    EXPECT_EQ(format_double(1e-300), "1e-300");
    const double x = 0.8984015305425779;
    EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Config, ParsesCommentsAndBlanks) {
    const auto cfg = parse_config("# unit case\n\nsigma = 2  # vol\n  c=1.5\nhorizon=0.5\n");
    EXPECT_EQ(cfg.size(), 3u);
    EXPECT_DOUBLE_EQ(cfg.at("sigma"), 2.0);
    EXPECT_DOUBLE_EQ(cfg.at("c"), 1.5);
    tzone::ModelParams p;
    apply_config(cfg, p);
    EXPECT_DOUBLE_EQ(p.sigma, 2.0);
    EXPECT_DOUBLE_EQ(p.c, 1.5);
    EXPECT_DOUBLE_EQ(p.horizon, 0.5);
    EXPECT_DOUBLE_EQ(p.gamma, 1.0);
}

TEST(Config, RejectsBadLines) {
    EXPECT_THROW(parse_config("sigma 2\n"), std::invalid_argument);
    EXPECT_THROW(parse_config("volatility=2\n"), std::invalid_argument);
    EXPECT_THROW(parse_config("sigma=two\n"), std::invalid_argument);
    EXPECT_THROW(parse_config("sigma=2x\n"), std::invalid_argument);
}

TEST(Config, FlagsOverrideFileOverridesDefaults) {
    TempDir dir;
    const auto file = dir.path() / "run.cfg";
    std::ofstream(file) << "sigma=2\ngamma=3\nc=0.25\ns0=1\n";
    const RunSpec spec = parse_run_spec({"simulate", "--config", file.string(), "--gamma", "4"});
    EXPECT_DOUBLE_EQ(spec.params.sigma, 2.0);   // file
    EXPECT_DOUBLE_EQ(spec.params.gamma, 4.0);   // flag beats file
    EXPECT_DOUBLE_EQ(spec.params.kappa, 1.0);   // default
    EXPECT_DOUBLE_EQ(spec.params.c, 0.25);
    EXPECT_DOUBLE_EQ(spec.grid.z_min, 0.25);
}

TEST(Formats, Parse) {
    EXPECT_EQ(parse_formats("csv,svg").size(), 2u);
    EXPECT_THROW(parse_formats("csv,png"), std::invalid_argument);
}

TEST(StrategySpec, Parse) {
    const tzone::ModelParams p;
    EXPECT_EQ(tzone::strategy_name(parse_strategy("optimal", p)), "optimal");
    EXPECT_EQ(tzone::strategy_name(parse_strategy("optimal*1.5", p)), "optimal*1.5");
    EXPECT_EQ(tzone::strategy_name(parse_strategy("zero", p)), "zero");
    EXPECT_EQ(tzone::strategy_name(parse_strategy("constant:-0.5", p)), "constant(-0.5)");
    EXPECT_THROW(parse_strategy("greedy", p), std::invalid_argument);
    EXPECT_THROW(parse_strategy("constant:", p), std::invalid_argument);
}

TEST(StrategySpec, RegularizedSolvesSurface) {
    const tzone::ModelParams p;
    const auto s = parse_strategy("regularized:0.01", p);
    ASSERT_TRUE(std::holds_alternative<tzone::strategy::RegularizedOptimal>(s));
    // zero flux at the barrier, pushing down just above it
    EXPECT_NEAR(tzone::eval_strategy(s, p, 0.0, 0.0), 0.0, 2e-4);
    EXPECT_LT(tzone::eval_strategy(s, p, 0.0, 0.2), -0.1);
}

TEST(Commands, ValueSurfaces) {
    TempDir dir;
    std::string out;
    ASSERT_EQ(run({"value", "--out", dir.str(), "--t-points", "11", "--z-points", "31"}, &out), 0);
    const auto lines = csv_lines(slurp(dir.path() / "value.csv"));
    ASSERT_EQ(lines.size(), 1u + 11u * 31u);
    EXPECT_EQ(lines[0], "t,z,U,dUdz,v_star");
    // t = 0 row is exactly zero; z = c column has v* = -1/2
    for (int j = 0; j < 31; ++j) EXPECT_EQ(lines[1 + j].substr(lines[1 + j].find(',', 2) + 1, 2), "0,");
    for (int k = 0; k < 10; ++k) {
        const auto& row = lines[1 + 31 * k];
        EXPECT_EQ(row.substr(row.rfind(',') + 1), "-0.5") << row;
    }
    EXPECT_TRUE(fs::exists(dir.path() / "value_U.svg"));
    EXPECT_TRUE(fs::exists(dir.path() / "value_vstar.svg"));
    const std::string svg = slurp(dir.path() / "value_U.svg");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_EQ(svg.find("href"), std::string::npos);
}

TEST(Commands, OutputsAreByteIdenticalOnRerun) {
    TempDir a, b;
    const std::vector<std::string> common{"--paths", "300", "--steps", "200", "--seed", "11"};
    for (const auto* dir : {&a, &b}) {
        std::vector<std::string> args{"simulate", "--out", dir->str(), "--per-path"};
        args.insert(args.end(), common.begin(), common.end());
        ASSERT_EQ(run(args), 0);
        ASSERT_EQ(run({"value", "--out", dir->str(), "--t-points", "6", "--z-points", "7"}), 0);
    }
    for (const char* f : {"simulate.json", "paths.csv", "value.csv", "value_U.svg"}) {
        EXPECT_EQ(slurp(a.path() / f), slurp(b.path() / f)) << f;
    }
}

TEST(Commands, SimulateSummary) {
    TempDir dir;
    std::string out;
    ASSERT_EQ(run({"simulate", "--out", dir.str(), "--paths", "400", "--steps", "200", "--per-path"}, &out), 0);
    const auto j = nlohmann::json::parse(slurp(dir.path() / "simulate.json"));
    for (const char* key : {"mean", "std_error", "n_paths", "n_steps", "convention", "closed_form_target", "z_score"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["n_paths"], 400);
    EXPECT_EQ(j["convention"], "pushing");
    EXPECT_NEAR(j["closed_form_target"].get<double>(), 0.47081105039476618, 1e-15);
    const auto lines = csv_lines(slurp(dir.path() / "paths.csv"));
    EXPECT_EQ(lines.size(), 401u);
    EXPECT_EQ(lines[0], "path_index,terminal_s,pushing,band_local_time,cost,payoff");
}

TEST(Commands, SimulateZeroHasNoCost) {
    TempDir dir;
    ASSERT_EQ(run({"simulate", "--out", dir.str(), "--strategy", "zero", "--paths", "100", "--steps", "100"}), 0);
    const auto j = nlohmann::json::parse(slurp(dir.path() / "simulate.json"));
    EXPECT_EQ(j["mean_cost"].get<double>(), 0.0);
}

TEST(Commands, InvalidInputExitsNonzero) {
    TempDir dir;
    std::string err;
    EXPECT_EQ(run({"simulate", "--out", dir.str(), "--s0", "-1"}, nullptr, &err), 2);
    EXPECT_NE(err.find("s0 < c"), std::string::npos);
    EXPECT_NE(run({"simulate", "--bogus"}, nullptr, &err), 0);
    EXPECT_NE(run({}, nullptr, &err), 0);
}

TEST(Commands, CompareRanksOptimalFirst) {
    TempDir dir;
    std::string out;
    ASSERT_EQ(run({"compare", "--out", dir.str(), "--paths", "4000", "--steps", "500", "--strategies",
                   "zero,optimal,constant:-0.5,constant:0.5"},
                  &out),
              0);
    const auto lines = csv_lines(slurp(dir.path() / "compare.csv"));
    ASSERT_EQ(lines.size(), 5u);
    EXPECT_EQ(lines[1].substr(0, 10), "1,optimal,");
    EXPECT_NE(out.find("optimal first within noise: yes"), std::string::npos);
}

TEST(Commands, CompareIdenticalPair) {
    TempDir dir;
    ASSERT_EQ(run({"compare", "--out", dir.str(), "--paths", "200", "--steps", "100", "--strategies", "zero,zero"}), 0);
    const auto lines = csv_lines(slurp(dir.path() / "compare.csv"));
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[1].substr(2), lines[2].substr(2));
}

TEST(Commands, CompareNeedsTwo) {
    EXPECT_EQ(run({"compare", "--strategies", "zero"}), 2);
}

TEST(Commands, UepsCsv) {
    TempDir dir;
    std::string out;
    ASSERT_EQ(run({"ueps", "--out", dir.str(), "--paths", "200", "--eps", "0.1,0.01", "--z", "0,1"}, &out), 0);
    const auto lines = csv_lines(slurp(dir.path() / "ueps.csv"));
    ASSERT_EQ(lines.size(), 5u);
    EXPECT_EQ(lines[0], "eps,z,U_eps,std_error,U_closed_form,abs_error");
}

TEST(Commands, ConvergeReportsDecrease) {
    TempDir dir;
    std::string out;
    ASSERT_EQ(run({"converge", "--out", dir.str(), "--paths", "2000", "--eps", "0.1,0.01"}, &out), 0);
    EXPECT_NE(out.find("strictly decreasing: yes"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir.path() / "converge_sup.csv"));
}

TEST(Commands, PdeCompareClosedForm) {
    TempDir dir;
    std::string out;
    ASSERT_EQ(run({"pde", "--out", dir.str(), "--nz", "301", "--nt", "1000", "--compare", "closed-form"}, &out), 0);
    EXPECT_NE(out.find("sup |U_pde - U_closed_form|"), std::string::npos);
    const auto table = csv_lines(slurp(dir.path() / "pde_compare.csv"));
    EXPECT_EQ(table[0], "t,sup_abs_error,z_at_sup");
    EXPECT_EQ(csv_lines(slurp(dir.path() / "pde.csv"))[0], "t,z,value");
    EXPECT_TRUE(fs::exists(dir.path() / "pde.svg"));
}

TEST(Commands, StrategyFromTable) {
    TempDir dir;
    const auto table = dir.path() / "v.csv";
    std::ofstream(table) << "t,z,v\n0,0,-1\n0,1,0\n0,2,0\n1,0,-1\n1,1,-0.5\n1,2,0\n";
    const tzone::Surface s = read_table_csv(table);
    EXPECT_DOUBLE_EQ(s.interpolate(1.0, 0.5), -0.75);
    ASSERT_EQ(run({"strategy", "--out", dir.str(), "--strategy", "tabulated:" + table.string(), "--t-points", "3",
                   "--z-points", "3", "--z-span", "2"}),
              0);
    const auto lines = csv_lines(slurp(dir.path() / "strategy.csv"));
    EXPECT_EQ(lines.back(), "1,2,0");
}

TEST(Commands, AcceptSubsetWithJson) {
    TempDir dir;
    std::string out;
    ASSERT_EQ(run({"accept", "--out", dir.str(), "--only", "1,3"}, &out), 0);
    const auto j = nlohmann::json::parse(slurp(dir.path() / "accept.json"));
    ASSERT_EQ(j.size(), 2u);
    EXPECT_TRUE(j[0]["passed"].get<bool>());
    EXPECT_EQ(run({"accept", "--out", dir.str(), "--only", "1", "--tolerance", "c1.tol=-1"}, &out), 1);
}

}  // namespace
