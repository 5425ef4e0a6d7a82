#include <benchmark/benchmark.h>

#include "semidiscrete/conservation.hpp"
#include "semidiscrete/distributions.hpp"
#include "semidiscrete/transport.hpp"

using namespace semidiscrete;

namespace {

TransportProblem problem_on(TimeScale ts) {
    TransportProblem p;
    p.scale = std::move(ts);
    return p;
}

void BM_SolveInterval(benchmark::State& state) {
    const auto p = problem_on(TimeScale::interval(static_cast<double>(state.range(0))));
    const Grid grid = Grid::build(p.scale);
    for (auto _ : state) benchmark::DoNotOptimize(solve(p, grid));
}
BENCHMARK(BM_SolveInterval)->Arg(10)->Arg(40)->Arg(160);

void BM_SolveUniform(benchmark::State& state) {
    const auto p = problem_on(TimeScale::uniform(0.25, static_cast<std::size_t>(state.range(0))));
    const Grid grid = Grid::build(p.scale);
    for (auto _ : state) benchmark::DoNotOptimize(solve(p, grid));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveUniform)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_SolveStopStart(benchmark::State& state) {
    const auto p = problem_on(TimeScale::stopstart(0.5, 0.5, static_cast<std::size_t>(state.range(0))));
    const Grid grid = Grid::build(p.scale, 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(solve(p, grid));
}
BENCHMARK(BM_SolveStopStart)->Arg(10)->Arg(40);

void BM_TimeConservation(benchmark::State& state) {
    const auto p = problem_on(TimeScale::stopstart(0.5, 0.5, 40));
    const auto field = solve(p, Grid::build(p.scale));
    for (auto _ : state) benchmark::DoNotOptimize(check_time_conservation(field, 0, 10, 1e-10));
}
BENCHMARK(BM_TimeConservation);

void BM_HeterogeneousRow(benchmark::State& state) {
    const auto plan = HeterogeneousTrialPlan::harmonic(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(heterogeneous_row(plan, plan.size()));
}
BENCHMARK(BM_HeterogeneousRow)->Arg(100)->Arg(1000);

void BM_PoissonLimit(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(poisson_limit_distance(static_cast<std::size_t>(state.range(0)), 1.0));
}
BENCHMARK(BM_PoissonLimit)->Arg(64)->Arg(1024);

}  // namespace
BENCHMARK_MAIN();
