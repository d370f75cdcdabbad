#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "ccfd/benchmark.hpp"
#include "ccfd/derivative.hpp"
#include "ccfd/solver.hpp"

using namespace ccfd;

namespace {

TensorGrid square(std::size_t intervals, AxisFamily family = AxisFamily::sinh)
{
    return build_grid(study_axes(2, {family}, 1.0, intervals));
}

void BM_Tdma(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> lower(n - 1), upper(n - 1), diag(n), rhs(n), x(n), scratch(n);
    for (auto& v : lower) v = u(rng);
    for (auto& v : upper) v = u(rng);
    for (auto& v : rhs) v = u(rng);
    for (auto& v : diag) v = 3.0 + u(rng);
    for (auto _ : state) {
        tdma_solve(lower, diag, upper, rhs, x, scratch);
        benchmark::DoNotOptimize(x.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Tdma)->RangeMultiplier(4)->Range(16, 4096);

void BM_CompactLine(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto axis = build_axis(AxisSpec{1.0, n, AxisFamily::tanh, 1.1});
    const auto stencils = build_axis_stencils(axis);
    std::vector<double> line(n), out(n);
    for (std::size_t i = 0; i < n; ++i) line[i] = std::sin(3.0 * axis.coord(i));
    CompactWorkspace work;
    for (auto _ : state) {
        compact_second_derivative(line, stencils, out, work);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_CompactLine)->RangeMultiplier(4)->Range(16, 4096);

void BM_Correction2D(benchmark::State& state)
{
    const auto g = square(static_cast<std::size_t>(state.range(0)));
    const StencilSet stencils(g);
    const auto field = sample(g, *problem_catalog(2).exact);
    for (auto _ : state) benchmark::DoNotOptimize(compute_correction(field, g, stencils));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}
BENCHMARK(BM_Correction2D)->Arg(40)->Arg(160);

// Fixed sweep count, so the time is per-sweep cost rather than convergence.
void BM_GaussSeidelSweeps(benchmark::State& state)
{
    const auto g = square(static_cast<std::size_t>(state.range(0)));
    const auto problem = problem_catalog(2);
    const auto coeffs = assemble_operator(g, problem);
    SolverConfig cfg;
    cfg.max_sweeps = 50;
    const auto start = initial_field(g, problem, cfg);
    for (auto _ : state) benchmark::DoNotOptimize(gauss_seidel_solve(coeffs, g, start, nullptr, cfg));
    state.SetItemsProcessed(state.iterations() * 50 * static_cast<std::int64_t>(g.node_count()));
}
BENCHMARK(BM_GaussSeidelSweeps)->Arg(40)->Arg(160);

void BM_Solve(benchmark::State& state)
{
    const auto method = static_cast<Method>(state.range(0));
    const auto g = square(static_cast<std::size_t>(state.range(1)));
    const auto problem = problem_catalog(2);
    const auto cfg = reference_solver_config();
    for (auto _ : state) benchmark::DoNotOptimize(solve(method, problem, g, cfg));
    state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_Solve)
    ->Args({static_cast<int>(Method::fdm), 20})
    ->Args({static_cast<int>(Method::ccfdm), 20})
    ->Args({static_cast<int>(Method::fdm), 40})
    ->Args({static_cast<int>(Method::ccfdm), 40})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
