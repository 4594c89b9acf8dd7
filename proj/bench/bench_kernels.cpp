// Serial reference vs OpenMP for the matrix assembly and the numerical-range sweep.
#include <benchmark/benchmark.h>

#include <numbers>

#include "kfrac/directional.hpp"
#include "kfrac/geometry.hpp"
#include "kfrac/spectral.hpp"

using namespace kfrac;

namespace {

Exec policy(const benchmark::State& s) { return s.range(1) ? Exec::parallel : Exec::serial; }

void BM_assemble_sector(benchmark::State& s) {
    const auto n = static_cast<std::size_t>(s.range(0));
    const GridPtr g = build_ray_grid(ConvexDomain::sector(1.0, std::numbers::pi / 3), 32, n);
    const DirSpec spec{DirOp::formal, 0.5, 0.0};
    for (auto _ : s) benchmark::DoNotOptimize(assemble_matrix(g, spec, policy(s)));
}

void BM_assemble_interval(benchmark::State& s) {
    const auto n = static_cast<std::size_t>(s.range(0));
    const GridPtr g = build_ray_grid(ConvexDomain::interval(1.0), 1, n);
    const DirSpec spec{DirOp::integral_left, 0.5, 0.0};
    for (auto _ : s) benchmark::DoNotOptimize(assemble_matrix(g, spec, policy(s)));
}

void BM_numerical_range(benchmark::State& s) {
    const auto n = static_cast<std::size_t>(s.range(0));
    const GridPtr g = build_ray_grid(ConvexDomain::interval(1.0), 1, n);
    const OperatorMatrix a = assemble_matrix(g, DirSpec{DirOp::formal, 0.5, 0.0});
    for (auto _ : s) benchmark::DoNotOptimize(numerical_range(a, 16, 10, 42, policy(s)));
}

}  // namespace

BENCHMARK(BM_assemble_sector)->ArgsProduct({{64, 128}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assemble_interval)->ArgsProduct({{512, 2048}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_numerical_range)->ArgsProduct({{128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
