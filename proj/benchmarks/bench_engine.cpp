#include "qsra/engine.hpp"

#include <benchmark/benchmark.h>

using namespace qsra;

// Full simulation on a 16x16 chip; the argument is the arrival rate in jobs per second.
static void
BM_Simulate(benchmark::State& state)
{
    const auto kind = static_cast<PolicyKind>(state.range(0));
    const double lambda = static_cast<double>(state.range(1));
    SimConfig cfg;
    cfg.chip = generate_grid(16, 16, QubitSpec{0, 120.0, 100.0, 0.02}, 1);
    cfg.workload = generate_poisson_workload(default_workload_spec(cfg.chip.size(), lambda, 30.0, 7));
    cfg.policy.kind = kind;
    cfg.record_growth_steps = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(run(cfg));
    state.SetLabel(std::string(policy_name(kind)));
    state.counters["jobs"] = static_cast<double>(cfg.workload.jobs.size());
}
BENCHMARK(BM_Simulate)
    ->ArgsProduct({{static_cast<long>(PolicyKind::FCFS), static_cast<long>(PolicyKind::QHRRF),
                    static_cast<long>(PolicyKind::RR)},
                   {2, 10}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
