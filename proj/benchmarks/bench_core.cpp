#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "angio/dynamics.hpp"
#include "angio/elliptic.hpp"
#include "angio/grid.hpp"

namespace {

angio::Grid grid_for(int dim, int n)
{
    return dim == 1 ? angio::build_grid(1, {1.0}, {n}) : angio::build_grid(2, {1.0, 1.0}, {n, n});
}

angio::Field bump(const angio::Grid& g)
{
    if (g.dim() == 1) {
        return angio::Field::sample(g, [](double x) { return 1.0 + 0.3 * std::cos(std::numbers::pi * x); });
    }
    return angio::Field::sample(g, [](double x, double y) {
        return 1.0 + 0.3 * std::cos(std::numbers::pi * x) * std::cos(std::numbers::pi * y);
    });
}

void BM_Laplacian(benchmark::State& state)
{
    const auto g = grid_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto u = bump(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(angio::laplacian(u));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_Laplacian)->Args({1, 1024})->Args({2, 128});

void BM_EllipticSolve(benchmark::State& state)
{
    const auto g = grid_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto u = bump(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(angio::solve_w(u));
    }
}
BENCHMARK(BM_EllipticSolve)->Args({1, 256})->Args({2, 64})->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state)
{
    const auto g = grid_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    angio::InitialSpec spec;
    spec.profile = angio::InitialProfile::cosine_bump;
    spec.amplitude = 0.3;
    auto s = angio::make_initial(g, spec);
    angio::ModelParams p;
    p.chi = 0.5;
    angio::SolverConfig cfg;
    cfg.dt = 0.5 * angio::stable_dt(s, p, cfg);
    for (auto _ : state) {
        s = angio::step(s, p, cfg);
    }
}
BENCHMARK(BM_Step)->Args({1, 128})->Args({2, 64})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
