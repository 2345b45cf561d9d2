#pragma once

#include "qsra/allocator.hpp"
#include "qsra/workload.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qsra {

// The engine keeps time as integer nanoseconds so that shot boundaries and
// occupancy integrals are exact.
using Tick = std::int64_t;
inline constexpr double kTicksPerSecond = 1e9;

Tick to_ticks(double seconds);
inline double to_seconds(Tick t) { return static_cast<double>(t) / kTicksPerSecond; }

enum class EventKind
{
    Arrival,
    GroupStart,
    GroupComplete,
    QuantumExpiry,
    PreemptPoint,
    Preempt,
    Requeue,
    JobComplete,
};

std::string_view event_kind_name(EventKind kind);

struct TraceEvent
{
    Tick time{0};
    EventKind kind{EventKind::Arrival};
    int group{-1};
    std::vector<JobId> jobs;
    std::vector<QubitId> qubits;  // region on GroupStart
    int shots{0};                 // group shots run (Preempt/GroupComplete) or planned (GroupStart)
};

// One stretch of a job holding qubits inside a group.
struct Segment
{
    int group{0};
    Tick start{0};
    Tick end{0};
    int shots_credited{0};
    Tick t_e_group{0};              // per-shot duration of the group
    std::vector<QubitId> qubits;    // this job's share of the group region
    bool preempted{false};
};

struct JobRecord
{
    Job job;                 // t_sub and t_e_shot rounded to the tick grid
    Tick submitted{0};
    Tick t_e_shot{0};
    Tick service{0};         // shots * t_e_shot
    Tick completed{-1};      // -1 while incomplete
    int shots_done{0};
    int preemptions{0};
    std::vector<Segment> segments;

    bool done() const { return completed >= 0; }
};

struct GroupRecord
{
    int id{0};
    std::vector<JobId> members;
    int demand{0};
    QubitId root{0};
    std::vector<QubitId> region;
    RegionStats stats;
    Tick start{0};
    Tick end{-1};
    Tick t_e_group{0};
    int shots_planned{0};
    int shots_run{0};
    bool preempted{false};
    std::vector<GrowthStep> steps;
};

// Occupancy from `time` until the next sample.
struct OccupancySample
{
    Tick time{0};
    int busy{0};    // qubits owned by executing groups
    int buffer{0};  // free qubits adjacent to an executing group
    int active_groups{0};
};

struct Trace
{
    int chip_qubits{0};
    std::vector<TraceEvent> events;
    std::vector<JobRecord> jobs;       // ascending job id
    std::vector<GroupRecord> groups;   // ascending group id, placed groups only
    std::vector<OccupancySample> timeline;
};

// JSON lines: one "event" record per log entry, then a "job" summary per job
// and a "group" allocation record per placed group.
void write_trace_jsonl(std::ostream& out, const Trace& trace, bool include_growth_steps = true);
std::string trace_to_jsonl(const Trace& trace, bool include_growth_steps = true);

}  // namespace qsra
