#include "qsra/allocator.hpp"
#include "qsra/chip.hpp"
#include "qsra/merger.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>

using namespace qsra;

static void
BM_AllPairsDistances(benchmark::State& state)
{
    const int side = static_cast<int>(state.range(0));
    const Chip chip = generate_grid(side, side);
    for (auto _ : state)
        benchmark::DoNotOptimize(all_pairs_distances(chip));
    state.SetComplexityN(static_cast<std::int64_t>(side) * side);
}
BENCHMARK(BM_AllPairsDistances)->RangeMultiplier(2)->Range(4, 32)->Complexity();

static void
BM_GrowRegion(benchmark::State& state)
{
    const Chip chip = generate_grid(16, 16, QubitSpec{0, 120.0, 100.0, 0.02}, 3);
    const Occupancy empty(chip.size());
    const int demand = static_cast<int>(state.range(0));
    AllocatorOptions opts;
    opts.record_steps = state.range(1) != 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(grow_region(chip, empty, 119, demand, 2e-3, opts));
}
BENCHMARK(BM_GrowRegion)->ArgsProduct({{4, 16, 64}, {0, 1}});

// One scheduling pass worth of placement: eight groups of 12 qubits on an empty 16x16 chip.
static void
BM_Allocate(benchmark::State& state)
{
    const Chip chip = generate_grid(16, 16, QubitSpec{0, 120.0, 100.0, 0.02}, 3);
    const DistanceMatrix dist = all_pairs_distances(chip);
    std::vector<Group> groups;
    for (int i = 0; i < 8; ++i)
        groups.push_back(make_group(i, {Job{i, 12, 500, 0.0, 1e-3 * (1 + i % 3)}}, {static_cast<std::size_t>(i)}));
    AllocatorOptions opts;
    opts.record_steps = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(allocate(chip, dist, Occupancy(chip.size()), groups, opts));
}
BENCHMARK(BM_Allocate);
