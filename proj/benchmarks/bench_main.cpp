#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gfl/solver.hpp"
#include "gfl/synth.hpp"
#include "gfl/trails.hpp"
#include "gfl/tv1d.hpp"

namespace {

using namespace gfl;

std::vector<double> noisy_steps(std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> y(m);
    double level = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (i % 97 == 0) level = 4.0 * gauss(rng);
        y[i] = level + gauss(rng);
    }
    return y;
}

void BM_Tv1d(benchmark::State& state) {
    const auto y = noisy_steps(static_cast<std::size_t>(state.range(0)), 1);
    std::vector<double> z(y.size());
    Tv1dSolver solver;
    for (auto _ : state) {
        solver.solve(y, 0.5, z);
        benchmark::DoNotOptimize(z.data());
    }
    state.SetComplexityN(state.range(0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Tv1d)->RangeMultiplier(4)->Range(64, 1 << 20)->Complexity(benchmark::oN);

void BM_Decompose(benchmark::State& state) {
    const auto kind = static_cast<StrategyKind>(state.range(0));
    const std::size_t n = static_cast<std::size_t>(state.range(1));
    const Graph g = synth::grid_graph(n, n);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto ts = decompose(g, DecompositionStrategy{kind, ++seed}, std::pair{n, n});
        benchmark::DoNotOptimize(ts.trails.data());
    }
    state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Decompose)
    ->ArgsProduct({{static_cast<int>(StrategyKind::PseudoTour), static_cast<int>(StrategyKind::MedianTrails),
                    static_cast<int>(StrategyKind::EdgeWise), static_cast<int>(StrategyKind::GridRowsCols)},
                   {32, 100}})
    ->Unit(benchmark::kMillisecond);

// Cost of one ADMM iteration: fixed step budget with an unreachable tolerance.
void BM_AdmmIterations(benchmark::State& state) {
    const auto kind = static_cast<StrategyKind>(state.range(0));
    const std::size_t n = 100;
    const Graph g = synth::grid_graph(n, n);
    synth::BlobSpec spec;
    spec.seed = 3;
    const auto signal = synth::blob_signal(g, spec);
    const TrailSet ts = decompose(g, DecompositionStrategy{kind, 3}, std::pair{n, n});
    SolverConfig cfg;
    cfg.tol = 1e-300;
    cfg.max_iters = 20;
    cfg.record_history = false;
    cfg.threads = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) {
        auto res = solve_gfl(ts, ProblemInstance{signal.y, 1.0}, cfg);
        benchmark::DoNotOptimize(res.beta.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.max_iters));
    state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_AdmmIterations)
    ->ArgsProduct({{static_cast<int>(StrategyKind::PseudoTour), static_cast<int>(StrategyKind::GridRowsCols),
                    static_cast<int>(StrategyKind::EdgeWise)},
                   {1, 0}})
    ->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
