#pragma once

#include "qsra/allocator.hpp"
#include "qsra/chip.hpp"
#include "qsra/merger.hpp"
#include "qsra/metrics.hpp"
#include "qsra/scheduler.hpp"
#include "qsra/trace.hpp"
#include "qsra/workload.hpp"

#include <cstdint>

namespace qsra {

struct MergeSettings
{
    bool enabled{true};
    double alpha{1.5};
    GroupingKey key{GroupingKey::PerShot};
};

struct SimConfig
{
    Chip chip;
    Workload workload;
    Policy policy;
    MergeSettings merge;
    bool backfill{false};
    // One group on the chip at a time, no merging: single-program baseline.
    bool exclusive{false};
    CoherenceMode coherence{CoherenceMode::T2};
    bool record_growth_steps{true};
    std::uint64_t seed{0};
};

struct SimResult
{
    Trace trace;
    MetricsReport metrics;
};

// Runs the event loop until every job has completed. Throws InputError for
// an invalid config and SimulationError for a job larger than the chip.
Trace simulate(const SimConfig& config);

SimResult run(const SimConfig& config);

// Remaining shots times the group's per-shot duration, in seconds.
double remaining_demand(const Group& group, int shots_done);

}  // namespace qsra
