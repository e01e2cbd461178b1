#include "tzone/sim.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "tzone/closed_form.hpp"
#include "tzone/rng.hpp"

namespace {

using namespace tzone;

ModelParams unit() { return ModelParams{1.0, 1.0, 1.0, 0.0, 0.5, 1.0}; }

SimConfig small(std::size_t paths, std::size_t steps) {
    SimConfig c;
    c.n_paths = paths;
    c.n_steps = steps;
    return c;
}

TEST(SimConfig, Validation) {
    SimConfig c;
    c.n_steps = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.brownian_refinement = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.band_eps = -1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.n_steps = 400;
    EXPECT_DOUBLE_EQ(c.band_width(2.0, 1.0), 0.2);
    c.band_eps = 0.01;
    EXPECT_DOUBLE_EQ(c.band_width(2.0, 1.0), 0.01);
}

TEST(Simulate, ReflectionKeepsStateAboveBarrier) {
    ModelParams p = unit();
    p.c = -0.3;
    p.s0 = -0.3;
    const auto tr = simulate_trajectory(p, strategy::Constant{-1.0}, small(1, 5000), 0);
    ASSERT_EQ(tr.states.size(), 5001u);
    double pushed = 0.0;
    for (std::size_t n = 0; n < tr.pushing_increments.size(); ++n) {
        EXPECT_GE(tr.states[n + 1], p.c);
        EXPECT_GE(tr.pushing_increments[n], 0.0);
        if (tr.pushing_increments[n] > 0.0) {
            EXPECT_EQ(tr.states[n + 1], p.c);
        }
        pushed += tr.pushing_increments[n];
    }
    EXPECT_GT(pushed, 0.0);
    const auto rec = simulate_path(p, strategy::Constant{-1.0}, small(1, 5000), 0);
    EXPECT_DOUBLE_EQ(rec.pushing, pushed);
    EXPECT_DOUBLE_EQ(rec.terminal_s, tr.states.back());
}

TEST(Simulate, ZeroStrategyHasNoCost) {
    const auto records = simulate_paths(unit(), strategy::Zero{}, small(200, 200));
    for (const auto& r : records) {
        EXPECT_EQ(r.cost, 0.0);
        EXPECT_EQ(r.payoff, r.pushing);
    }
}

TEST(Simulate, FarFieldNeverPushes) {
    ModelParams p = unit();
    p.s0 = 30.0;
    const auto m = mc_objective(p, strategy::Zero{}, small(500, 200));
    EXPECT_EQ(m.mean, 0.0);
    EXPECT_EQ(m.std_error, 0.0);
}

TEST(Simulate, DeterministicAcrossWorkerCounts) {
    SimConfig c = small(997, 300);
    c.workers = 1;
    const auto one = mc_objective(unit(), strategy::ClosedFormOptimal{}, c);
    c.workers = 5;
    const auto five = mc_objective(unit(), strategy::ClosedFormOptimal{}, c);
    EXPECT_EQ(one.mean, five.mean);
    EXPECT_EQ(one.std_error, five.std_error);
}

TEST(Simulate, PathsAreIndexedNotSequenced) {
    const SimConfig c = small(50, 100);
    const auto all = simulate_paths(unit(), strategy::ClosedFormOptimal{}, c);
    const auto single = simulate_path(unit(), strategy::ClosedFormOptimal{}, c, 37);
    EXPECT_EQ(all[37].pushing, single.pushing);
    EXPECT_EQ(all[37].cost, single.cost);
    EXPECT_THROW(simulate_path(unit(), strategy::Zero{}, c, 50), std::out_of_range);
}

TEST(Simulate, RefinementCouplesStepSizes) {
    // Far from the barrier with v = 0 the terminal value is s0 + sigma W_T,
    // and W_T is shared between (n, m) and (n*m, 1).
    ModelParams p = unit();
    p.s0 = 50.0;
    SimConfig coarse = small(20, 250);
    coarse.brownian_refinement = 4;
    const SimConfig fine = small(20, 1000);
    for (std::size_t i = 0; i < 20; ++i) {
        EXPECT_NEAR(simulate_path(p, strategy::Zero{}, coarse, i).terminal_s,
                    simulate_path(p, strategy::Zero{}, fine, i).terminal_s, 1e-12);
    }
}

TEST(Simulate, InvalidStartRejected) {
    ModelParams p = unit();
    p.s0 = -0.1;
    EXPECT_THROW(mc_objective(p, strategy::Zero{}, small(10, 10)), std::invalid_argument);
}

TEST(Simulate, StrategyOrderingAgainstConstants) {
    const SimConfig c = small(10'000, 500);
    const auto opt = mc_objective(unit(), strategy::ClosedFormOptimal{}, c);
    for (double a : {-1.0, 1.0}) {
        const auto m = mc_objective(unit(), strategy::Constant{a}, c);
        EXPECT_LE(m.mean, opt.mean + 2.0 * std::hypot(m.std_error, opt.std_error)) << "a = " << a;
    }
}

TEST(Simulate, BandConventionExceedsPushing) {
    // Uncontrolled path started at the barrier: occupation density of [c, c+band]
    // is about twice the push (reflection doubles the local time).
    ModelParams p = unit();
    p.s0 = p.c;
    SimConfig c = small(400, 4000);
    const auto push = mc_objective(p, strategy::Zero{}, c, InventoryConvention::pushing);
    const auto band = mc_objective(p, strategy::Zero{}, c, InventoryConvention::band);
    EXPECT_GT(band.mean, 1.5 * push.mean);
}

TEST(BridgeLocalTime, ZeroFarFromLevel) {
    const std::vector<double> path{5.0, 5.1, 4.9, 5.2};
    EXPECT_EQ(bridge_local_time(path, 0.01, 0.0), 0.0);
}

TEST(BridgeLocalTime, MeanMatchesBrownianLocalTime) {
    // E[L^0_1] = E|W_1| = sqrt(2/pi); coarse steps are fine for the bridge estimate
    const std::size_t n = 50;
    const double dt = 1.0 / n;
    std::vector<double> samples;
    for (std::uint64_t i = 0; i < 20'000; ++i) {
        rng::NormalStream normals(99, i);
        std::vector<double> w(n + 1, 0.0);
        for (std::size_t k = 0; k < n; ++k) w[k + 1] = w[k] + std::sqrt(dt) * normals(k);
        samples.push_back(bridge_local_time(w, dt, 0.0));
    }
    const auto m = estimate(samples);
    EXPECT_NEAR(m.mean, std::sqrt(2.0 / std::numbers::pi), 4.0 * m.std_error);
}

TEST(LocalTimeMc, ExactLawMatchesClosedForm) {
    const ModelParams p = unit();
    const ClosedForm cf(p);
    for (double z : {0.0, 0.5, 1.5}) {
        const auto m = value_u_mc(p, 1.0, z, small(400'000, 1));
        EXPECT_NEAR(m.mean, cf.value_u(1.0, z), 4.0 * m.std_error) << "z = " << z;
    }
}

TEST(LocalTimeMc, BandMethodAgreesWithExactLaw) {
    const ModelParams p = unit();
    const auto exact = value_u_mc(p, 1.0, 0.5, small(20'000, 1));
    const auto band = value_u_mc(p, 1.0, 0.5, small(20'000, 4000), LocalTimeMethod::band);
    EXPECT_NEAR(band.mean, exact.mean, 0.03);
}

TEST(LocalTimeMc, FarLevelGivesTinyValue) {
    const auto m = value_u_mc(unit(), 1.0, 5.0, small(1'000'000, 1));
    EXPECT_GE(m.mean, 0.0);
    EXPECT_LT(m.mean, 1e-4);
    EXPECT_THROW(value_u_mc(unit(), 1.0, -0.5, small(10, 1)), DomainError);
}

}  // namespace
