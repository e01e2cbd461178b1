#include <benchmark/benchmark.h>

#include <cmath>

#include "tzone/closed_form.hpp"
#include "tzone/pde.hpp"
#include "tzone/regularized.hpp"
#include "tzone/rng.hpp"
#include "tzone/sim.hpp"
#include "tzone/special_functions.hpp"

namespace {

const tzone::ModelParams kUnit{1.0, 1.0, 1.0, 0.0, 0.5, 1.0};

void BM_Erfcx(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tzone::special::erfcx(x));
        x = x < 20.0 ? x + 0.37 : -2.0;
    }
}
BENCHMARK(BM_Erfcx);

void BM_ValueU(benchmark::State& state) {
    const tzone::ClosedForm cf(kUnit);
    double z = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cf.value_u(0.7, z));
        z = z < 6.0 ? z + 0.013 : 0.0;
    }
}
BENCHMARK(BM_ValueU);

void BM_VStar(benchmark::State& state) {
    const tzone::ClosedForm cf(kUnit);
    double z = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cf.v_star(0.3, z));
        z = z < 6.0 ? z + 0.013 : 0.0;
    }
}
BENCHMARK(BM_VStar);

void BM_Normals(benchmark::State& state) {
    tzone::rng::NormalStream g(1, 2);
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(g(i++));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Normals);

void BM_SimulatePath(benchmark::State& state) {
    tzone::SimConfig cfg;
    cfg.n_steps = static_cast<std::size_t>(state.range(0));
    cfg.n_paths = 1 << 20;
    std::size_t i = 0;
    const tzone::Strategy opt = tzone::strategy::ClosedFormOptimal{};
    for (auto _ : state) benchmark::DoNotOptimize(tzone::simulate_path(kUnit, opt, cfg, i++ % cfg.n_paths));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePath)->Arg(2000);

void BM_KernelFunctionals(benchmark::State& state) {
    tzone::SimConfig cfg;
    cfg.n_steps = 1000;
    cfg.n_paths = 64;
    cfg.workers = 1;
    const tzone::RegularizedValue rv{kUnit, 1e-2, cfg};
    const double zs[] = {0.0, 0.5, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(tzone::sample_kernel_functionals(rv, 1.0, zs));
}
BENCHMARK(BM_KernelFunctionals)->Unit(benchmark::kMillisecond);

void BM_SolveSingular(benchmark::State& state) {
    const tzone::Grid1D g{0.0, 6.0, static_cast<std::size_t>(state.range(0)),
                          static_cast<std::size_t>(state.range(1)), 1.0, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(tzone::solve_singular(kUnit, g));
}
BENCHMARK(BM_SolveSingular)->Args({601, 2000})->Unit(benchmark::kMillisecond);

void BM_SolveHopfCole(benchmark::State& state) {
    const tzone::Grid1D g{0.0, 6.0, 601, 2000, 1.0, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(tzone::solve_hopf_cole(kUnit, 1e-2, g));
}
BENCHMARK(BM_SolveHopfCole)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
