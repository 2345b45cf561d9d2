#pragma once

#include "qsra/workload.hpp"

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qsra {

enum class PolicyKind
{
    FCFS,
    SJF,
    QSJF,
    SRTF,
    RR,
    MFQ,
    HRRF,
    QHRRF,
};

inline constexpr PolicyKind kAllPolicies[] = {
    PolicyKind::FCFS, PolicyKind::SJF, PolicyKind::QSJF, PolicyKind::SRTF,
    PolicyKind::RR,   PolicyKind::MFQ, PolicyKind::HRRF, PolicyKind::QHRRF,
};

std::string_view policy_name(PolicyKind kind);
PolicyKind parse_policy(std::string_view name);  // case-insensitive; throws InputError

struct Policy
{
    PolicyKind kind{PolicyKind::FCFS};
    int rr_quantum_shots{100};
    int mfq_levels{3};
    int mfq_base_quantum_shots{100};
    double mfq_aging_s{5.0};

    // RR quantum at every level; MFQ doubles per level and the bottom level
    // runs to completion (nullopt). Other policies never expire.
    std::optional<int> quantum_shots(int level) const;

    void validate() const;
};

// Per-job bookkeeping owned by one simulation.
struct JobState
{
    int remaining_shots{0};
    double run_time{0.0};        // seconds spent holding qubits
    int mfq_level{0};
    std::uint64_t enqueue_seq{0};  // ring position for RR/MFQ
    double last_enqueue{0.0};
};

class SchedulerState
{
public:
    // Registers (or re-registers, after preemption) a job at the back of the ring.
    JobState& enqueue(const Job& job, double now);

    JobState& at(JobId id) { return jobs_.at(id); }
    const JobState* find(JobId id) const;

    // Any MFQ job waiting longer than the aging threshold goes back to level 0.
    void apply_aging(const Policy& policy, double now);

    // Moves a job one level down (bounded by the last level).
    void demote(const Policy& policy, JobId id);

private:
    std::map<JobId, JobState> jobs_;
    std::uint64_t next_seq_{0};
};

double eta(const Job& job, int chip_qubits);

// (t_wait + t_ser) / t_ser
double response_ratio(double t_wait, double t_ser);

// (t_wait + eta * t_ser) / t_ser
double q_response_ratio(double t_wait, double t_ser, double eta);

// Lexicographic; smaller sorts first.
struct PriorityKey
{
    double primary{0.0};
    double secondary{0.0};
    double t_sub{0.0};
    JobId id{0};

    auto operator<=>(const PriorityKey&) const = default;
};

// State may be null, in which case the job is treated as fresh: full shots
// remaining, no run time, level 0, ring position by (t_sub, id).
PriorityKey priority_key(const Policy& policy, const Job& job, double now, int chip_qubits,
                         const SchedulerState* state);

// Stable sort by priority_key; the input is left untouched.
std::vector<Job> order_queue(const Policy& policy, std::span<const Job> queue, double now, int chip_qubits,
                             const SchedulerState* state);

struct RunningGroupView
{
    int group_id{0};
    double remaining_demand{0.0};  // seconds
    int shots_in_quantum{0};       // shots run since the group (re)started its quantum
    int level{0};                  // MFQ level of the group
};

// Groups to preempt at their next shot boundary. `queued_remaining` holds the
// remaining service demand of every waiting job.
std::vector<int> preemption_decision(const Policy& policy, std::span<const RunningGroupView> running,
                                     std::span<const double> queued_remaining);

}  // namespace qsra
