#include "qsra/scheduler.hpp"

#include "qsra/errors.hpp"

#include <algorithm>
#include <cctype>

namespace qsra {

std::string_view
policy_name(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::FCFS: return "FCFS";
    case PolicyKind::SJF: return "SJF";
    case PolicyKind::QSJF: return "QSJF";
    case PolicyKind::SRTF: return "SRTF";
    case PolicyKind::RR: return "RR";
    case PolicyKind::MFQ: return "MFQ";
    case PolicyKind::HRRF: return "HRRF";
    case PolicyKind::QHRRF: return "QHRRF";
    }
    return "?";
}

PolicyKind
parse_policy(std::string_view name)
{
    std::string upper(name);
    for (auto& c : upper)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (PolicyKind k : kAllPolicies)
        if (policy_name(k) == upper)
            return k;
    throw InputError("unknown policy \"" + std::string(name) + "\"");
}

std::optional<int>
Policy::quantum_shots(int level) const
{
    switch (kind) {
    case PolicyKind::RR:
        return rr_quantum_shots;
    case PolicyKind::MFQ:
        if (level >= mfq_levels - 1)
            return std::nullopt;
        return mfq_base_quantum_shots << level;
    default:
        return std::nullopt;
    }
}

void
Policy::validate() const
{
    if (rr_quantum_shots < 1)
        throw InputError("rr_quantum_shots must be >= 1");
    if (mfq_levels < 2 || mfq_levels > 20)
        throw InputError("mfq_levels must be in [2, 20]");
    if (mfq_base_quantum_shots < 1)
        throw InputError("mfq_base_quantum_shots must be >= 1");
    if (!(mfq_aging_s > 0.0))
        throw InputError("mfq_aging_s must be > 0");
}

////////////////////////////////////////////////////////////

JobState&
SchedulerState::enqueue(const Job& job, double now)
{
    auto [it, fresh] = jobs_.try_emplace(job.id);
    JobState& js = it->second;
    if (fresh)
        js.remaining_shots = job.shots;
    js.enqueue_seq = next_seq_++;
    js.last_enqueue = now;
    return js;
}

const JobState*
SchedulerState::find(JobId id) const
{
    auto it = jobs_.find(id);
    return it == jobs_.end() ? nullptr : &it->second;
}

void
SchedulerState::apply_aging(const Policy& policy, double now)
{
    if (policy.kind != PolicyKind::MFQ)
        return;
    for (auto& [id, js] : jobs_)
        if (js.remaining_shots > 0 && js.mfq_level > 0 && now - js.last_enqueue > policy.mfq_aging_s)
            js.mfq_level = 0;
}

void
SchedulerState::demote(const Policy& policy, JobId id)
{
    JobState& js = jobs_.at(id);
    js.mfq_level = std::min(js.mfq_level + 1, policy.mfq_levels - 1);
}

////////////////////////////////////////////////////////////

double
eta(const Job& job, int chip_qubits)
{
    if (job.n > chip_qubits)
        throw SimulationError("job " + std::to_string(job.id) + " is oversized: needs " + std::to_string(job.n) +
                              " qubits, chip has " + std::to_string(chip_qubits));
    if (job.n < 1)
        throw InputError("job " + std::to_string(job.id) + ": qubit demand n must be >= 1");
    return static_cast<double>(job.n) / static_cast<double>(chip_qubits);
}

double
response_ratio(double t_wait, double t_ser)
{
    if (!(t_ser > 0.0))
        throw InputError("response ratio needs t_ser > 0");
    return (t_wait + t_ser) / t_ser;
}

double
q_response_ratio(double t_wait, double t_ser, double eta)
{
    if (!(t_ser > 0.0))
        throw InputError("response ratio needs t_ser > 0");
    return (t_wait + eta * t_ser) / t_ser;
}

PriorityKey
priority_key(const Policy& policy, const Job& job, double now, int chip_qubits, const SchedulerState* state)
{
    const JobState* js = state ? state->find(job.id) : nullptr;
    const int remaining = js ? js->remaining_shots : job.shots;
    const double run_time = js ? js->run_time : 0.0;
    const double t_ser = service_demand(job);
    const double t_wait = std::max(0.0, now - job.t_sub - run_time);

    PriorityKey key{0.0, 0.0, job.t_sub, job.id};
    switch (policy.kind) {
    case PolicyKind::FCFS:
        key.primary = job.t_sub;
        break;
    case PolicyKind::SJF:
        key.primary = t_ser;
        break;
    case PolicyKind::QSJF:
        key.primary = eta(job, chip_qubits) * t_ser;
        break;
    case PolicyKind::SRTF:
        key.primary = static_cast<double>(remaining) * job.t_e_shot;
        break;
    case PolicyKind::HRRF:
        key.primary = -response_ratio(t_wait, t_ser);
        break;
    case PolicyKind::QHRRF:
        key.primary = -q_response_ratio(t_wait, t_ser, eta(job, chip_qubits));
        break;
    case PolicyKind::RR:
        // without state the ring is submission order, which the tie-break gives
        if (js)
            key.primary = static_cast<double>(js->enqueue_seq);
        break;
    case PolicyKind::MFQ:
        if (js) {
            key.primary = js->mfq_level;
            key.secondary = static_cast<double>(js->enqueue_seq);
        }
        break;
    }
    return key;
}

std::vector<Job>
order_queue(const Policy& policy, std::span<const Job> queue, double now, int chip_qubits,
            const SchedulerState* state)
{
    std::vector<std::pair<PriorityKey, std::size_t>> keyed;
    keyed.reserve(queue.size());
    for (std::size_t i = 0; i < queue.size(); ++i)
        keyed.emplace_back(priority_key(policy, queue[i], now, chip_qubits, state), i);
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Job> out;
    out.reserve(queue.size());
    for (const auto& [key, i] : keyed)
        out.push_back(queue[i]);
    return out;
}

std::vector<int>
preemption_decision(const Policy& policy, std::span<const RunningGroupView> running,
                    std::span<const double> queued_remaining)
{
    std::vector<int> marked;
    if (queued_remaining.empty())
        return marked;

    switch (policy.kind) {
    case PolicyKind::SRTF: {
        const double shortest = *std::min_element(queued_remaining.begin(), queued_remaining.end());
        for (const auto& g : running)
            if (shortest < g.remaining_demand)
                marked.push_back(g.group_id);
        break;
    }
    case PolicyKind::RR:
    case PolicyKind::MFQ:
        for (const auto& g : running) {
            auto quantum = policy.quantum_shots(g.level);
            if (quantum && g.shots_in_quantum >= *quantum && g.remaining_demand > 0.0)
                marked.push_back(g.group_id);
        }
        break;
    default:
        break;
    }
    return marked;
}

}  // namespace qsra
