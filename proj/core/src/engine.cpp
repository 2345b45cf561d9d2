#include "qsra/engine.hpp"

#include "qsra/errors.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <tuple>

namespace qsra {

double
remaining_demand(const Group& group, int shots_done)
{
    const int left = std::max(0, group.shots_group - shots_done);
    return static_cast<double>(left) * group.t_e_group;
}

namespace {

// Same-time events run in this order.
enum class Wake
{
    Complete = 0,
    Arrival = 1,
    QuantumExpiry = 2,
    PreemptPoint = 3,
};

struct Wakeup
{
    Tick time{0};
    Wake kind{Wake::Arrival};
    int id{0};
    std::uint64_t seq{0};

    bool operator>(const Wakeup& o) const
    {
        return std::tie(time, kind, id, seq) > std::tie(o.time, o.kind, o.id, o.seq);
    }
};

struct ActiveGroup
{
    Group group;  // members carry the shots still owed when the group started
    QubitId root{0};
    std::vector<QubitId> region;
    std::vector<std::vector<QubitId>> slices;  // per member
    Tick start{0};
    Tick end{0};
    Tick t_e{0};
    int level{0};
    Tick quantum_start{0};
    Tick expiry{-1};
    bool preempt_pending{false};
    std::size_t record{0};
};

class Simulation
{
public:
    explicit Simulation(const SimConfig& config);

    Trace run();

private:
    void schedule(Tick time, Wake kind, int id) { wakeups_.push({time, kind, id, seq_++}); }
    void log(Tick time, EventKind kind, int group, std::vector<JobId> jobs, std::vector<QubitId> qubits = {},
             int shots = 0)
    {
        trace_.events.push_back({time, kind, group, std::move(jobs), std::move(qubits), shots});
    }

    JobRecord& record(JobId id) { return trace_.jobs[index_.at(id)]; }
    double now_s(Tick now) const { return to_seconds(now); }
    int shots_done(const ActiveGroup& g, Tick now) const { return static_cast<int>((now - g.start) / g.t_e); }
    int group_level(const Group& g);

    void on_arrival(Tick now, JobId id);
    void on_complete(Tick now, int gid);
    void on_quantum_expiry(Tick now, int gid);
    void on_preempt_point(Tick now, int gid);

    void stop_group(Tick now, int gid, bool preempted);
    void scheduling_pass(Tick now);
    void start_group(Tick now, const Placement& placement);
    void check_srtf(Tick now);
    std::vector<double> queued_remaining() const;
    void sample(Tick now);

    const SimConfig& cfg_;
    DistanceMatrix distances_;
    Trace trace_;
    std::map<JobId, std::size_t> index_;
    SchedulerState state_;
    std::vector<JobId> queue_;  // enqueue order
    std::map<int, ActiveGroup> active_;
    Occupancy occupancy_;
    std::priority_queue<Wakeup, std::vector<Wakeup>, std::greater<>> wakeups_;
    std::uint64_t seq_{0};
    int next_group_id_{0};
};

Simulation::Simulation(const SimConfig& config)
    : cfg_(config)
{
    validate_chip(cfg_.chip);
    cfg_.policy.validate();
    if (!(cfg_.merge.alpha >= 1.0))
        throw InputError("merge alpha must be >= 1");

    const int n_qubits = cfg_.chip.size();
    distances_ = all_pairs_distances(cfg_.chip);
    occupancy_ = Occupancy(n_qubits);
    trace_.chip_qubits = n_qubits;

    std::vector<Job> jobs = cfg_.workload.jobs;
    std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.id < b.id; });
    for (const Job& src : jobs) {
        validate_job(src);
        if (src.n > n_qubits)
            throw SimulationError("job " + std::to_string(src.id) + " is oversized: needs " + std::to_string(src.n) +
                                  " qubits but the chip has " + std::to_string(n_qubits));
        if (index_.count(src.id))
            throw InputError("duplicate job id " + std::to_string(src.id));

        JobRecord rec;
        rec.job = src;
        rec.submitted = to_ticks(src.t_sub);
        rec.t_e_shot = to_ticks(src.t_e_shot);
        if (rec.t_e_shot < 1)
            throw InputError("job " + std::to_string(src.id) + ": t_e_shot below the 1 ns clock resolution");
        rec.job.t_sub = to_seconds(rec.submitted);
        rec.job.t_e_shot = to_seconds(rec.t_e_shot);
        rec.service = rec.t_e_shot * src.shots;
        index_[src.id] = trace_.jobs.size();
        trace_.jobs.push_back(std::move(rec));
    }
    for (const auto& rec : trace_.jobs)
        schedule(rec.submitted, Wake::Arrival, rec.job.id);
}

Trace
Simulation::run()
{
    while (!wakeups_.empty()) {
        const Tick now = wakeups_.top().time;
        while (!wakeups_.empty() && wakeups_.top().time == now) {
            const Wakeup w = wakeups_.top();
            wakeups_.pop();
            switch (w.kind) {
            case Wake::Complete: on_complete(now, w.id); break;
            case Wake::Arrival: on_arrival(now, w.id); break;
            case Wake::QuantumExpiry: on_quantum_expiry(now, w.id); break;
            case Wake::PreemptPoint: on_preempt_point(now, w.id); break;
            }
        }
        scheduling_pass(now);
        sample(now);
    }

    for (const auto& j : trace_.jobs)
        if (!j.done())
            throw SimulationError("simulation drained with job " + std::to_string(j.job.id) + " unfinished");
    return std::move(trace_);
}

int
Simulation::group_level(const Group& g)
{
    int level = cfg_.policy.mfq_levels;
    for (const auto& m : g.members)
        level = std::min(level, state_.at(m.id).mfq_level);
    return level;
}

////////////////////////////////////////////////////////////

void
Simulation::on_arrival(Tick now, JobId id)
{
    state_.enqueue(record(id).job, now_s(now));
    queue_.push_back(id);
    log(now, EventKind::Arrival, -1, {id});
}

void
Simulation::on_complete(Tick now, int gid)
{
    auto it = active_.find(gid);
    if (it == active_.end() || it->second.end != now)
        return;  // preempted earlier
    stop_group(now, gid, false);
}

void
Simulation::on_quantum_expiry(Tick now, int gid)
{
    auto it = active_.find(gid);
    if (it == active_.end() || it->second.expiry != now)
        return;
    ActiveGroup& g = it->second;
    log(now, EventKind::QuantumExpiry, gid, {});

    const int done = shots_done(g, now);
    const RunningGroupView view{gid, to_seconds((g.group.shots_group - done) * g.t_e),
                                static_cast<int>((now - g.quantum_start) / g.t_e), g.level};
    const auto waiting = queued_remaining();
    const auto marked = preemption_decision(cfg_.policy, std::span(&view, 1), waiting);

    if (cfg_.policy.kind == PolicyKind::MFQ)
        for (const auto& m : g.group.members)
            state_.demote(cfg_.policy, m.id);

    if (!marked.empty()) {
        stop_group(now, gid, true);
        return;
    }
    // nobody waiting: keep running under a fresh quantum
    g.level = group_level(g.group);
    g.quantum_start = now;
    g.expiry = -1;
    if (auto q = cfg_.policy.quantum_shots(g.level); q && now + *q * g.t_e < g.end) {
        g.expiry = now + *q * g.t_e;
        schedule(g.expiry, Wake::QuantumExpiry, gid);
    }
}

void
Simulation::on_preempt_point(Tick now, int gid)
{
    auto it = active_.find(gid);
    if (it == active_.end() || !it->second.preempt_pending)
        return;
    ActiveGroup& g = it->second;
    g.preempt_pending = false;
    log(now, EventKind::PreemptPoint, gid, {});

    const RunningGroupView view{gid, to_seconds((g.group.shots_group - shots_done(g, now)) * g.t_e), 0, g.level};
    const auto marked = preemption_decision(cfg_.policy, std::span(&view, 1), queued_remaining());
    if (!marked.empty())
        stop_group(now, gid, true);
}

// Ends a group at `now`, a shot boundary. Members whose shots are covered
// complete; the rest go back to the queue with their remaining shots.
void
Simulation::stop_group(Tick now, int gid, bool preempted)
{
    ActiveGroup g = std::move(active_.at(gid));
    active_.erase(gid);
    occupancy_.release(gid);

    const int ran = shots_done(g, now);
    GroupRecord& grec = trace_.groups[g.record];
    grec.end = now;
    grec.shots_run = ran;
    grec.preempted = preempted;

    std::vector<JobId> ids;
    for (const auto& m : g.group.members)
        ids.push_back(m.id);
    log(now, preempted ? EventKind::Preempt : EventKind::GroupComplete, gid, ids, {}, ran);

    for (std::size_t i = 0; i < g.group.members.size(); ++i) {
        const JobId id = g.group.members[i].id;
        JobState& js = state_.at(id);
        JobRecord& rec = record(id);

        const int credited = std::min(js.remaining_shots, ran);
        js.remaining_shots -= credited;
        js.run_time += to_seconds(now - g.start);
        rec.shots_done += credited;
        rec.segments.push_back({gid, g.start, now, credited, g.t_e, g.slices[i], preempted});

        if (js.remaining_shots == 0) {
            rec.completed = now;
            log(now, EventKind::JobComplete, gid, {id});
        } else {
            ++rec.preemptions;
            state_.enqueue(rec.job, now_s(now));
            queue_.push_back(id);
        }
    }
}

////////////////////////////////////////////////////////////

std::vector<double>
Simulation::queued_remaining() const
{
    std::vector<double> out;
    out.reserve(queue_.size());
    for (JobId id : queue_) {
        const JobRecord& rec = trace_.jobs[index_.at(id)];
        out.push_back(to_seconds(state_.find(id)->remaining_shots * rec.t_e_shot));
    }
    return out;
}

void
Simulation::check_srtf(Tick now)
{
    if (cfg_.policy.kind != PolicyKind::SRTF || queue_.empty() || active_.empty())
        return;
    std::vector<RunningGroupView> views;
    for (const auto& [gid, g] : active_)
        if (!g.preempt_pending)
            views.push_back({gid, to_seconds((g.group.shots_group - shots_done(g, now)) * g.t_e), 0, g.level});
    for (int gid : preemption_decision(cfg_.policy, views, queued_remaining())) {
        ActiveGroup& g = active_.at(gid);
        // at least one shot per start, so a group cannot be bounced at its own start time
        const Tick elapsed = now - g.start;
        const Tick shots = std::max<Tick>(1, (elapsed + g.t_e - 1) / g.t_e);
        const Tick boundary = g.start + shots * g.t_e;
        if (boundary >= g.end)
            continue;
        g.preempt_pending = true;
        schedule(boundary, Wake::PreemptPoint, gid);
    }
}

void
Simulation::scheduling_pass(Tick now)
{
    if (queue_.empty())
        return;
    const double t = now_s(now);
    const int n_qubits = cfg_.chip.size();
    state_.apply_aging(cfg_.policy, t);

    std::vector<Job> waiting;
    waiting.reserve(queue_.size());
    for (JobId id : queue_)
        waiting.push_back(record(id).job);
    const std::vector<Job> ordered = order_queue(cfg_.policy, waiting, t, n_qubits, &state_);

    auto owed = [&](Job j) {
        j.shots = state_.at(j.id).remaining_shots;
        return j;
    };

    std::vector<Group> groups;
    if (cfg_.exclusive) {
        if (!active_.empty())
            return;
        const Job head = owed(ordered.front());
        groups = singleton_groups(std::span(&head, 1), {}, next_group_id_);
    } else {
        const auto picked = select_prefix(ordered, occupancy_.usable_count(cfg_.chip), cfg_.backfill);
        if (picked.empty()) {
            check_srtf(now);
            return;
        }
        std::vector<Job> prefix;
        for (std::size_t i : picked)
            prefix.push_back(owed(ordered[i]));
        groups = cfg_.merge.enabled
                     ? group_by_exec_time(prefix, cfg_.merge.alpha, picked, cfg_.merge.key, next_group_id_)
                     : singleton_groups(prefix, picked, next_group_id_);
    }
    next_group_id_ += static_cast<int>(groups.size());

    AllocatorOptions opts{cfg_.coherence, cfg_.record_growth_steps};
    AllocationOutcome outcome = allocate(cfg_.chip, distances_, occupancy_, std::move(groups), opts);
    for (const auto& c : outcome.conflicts)
        log(now, EventKind::Requeue, c.decision.group_id, {c.decision.job});
    for (const auto& p : outcome.placed)
        start_group(now, p);

    check_srtf(now);
}

void
Simulation::start_group(Tick now, const Placement& p)
{
    ActiveGroup g;
    g.group = p.group;
    g.root = p.root;
    g.region = p.region;
    g.start = now;
    g.t_e = 0;
    std::size_t offset = 0;
    for (const auto& m : g.group.members) {
        g.t_e = std::max(g.t_e, record(m.id).t_e_shot);
        const auto n = static_cast<std::size_t>(m.n);
        g.slices.emplace_back(p.region.begin() + static_cast<std::ptrdiff_t>(offset),
                              p.region.begin() + static_cast<std::ptrdiff_t>(offset + n));
        offset += n;
        queue_.erase(std::find(queue_.begin(), queue_.end(), m.id));
    }
    g.end = now + g.group.shots_group * g.t_e;
    g.level = group_level(g.group);
    g.quantum_start = now;
    if (auto q = cfg_.policy.quantum_shots(g.level); q && now + *q * g.t_e < g.end) {
        g.expiry = now + *q * g.t_e;
        schedule(g.expiry, Wake::QuantumExpiry, p.group.id);
    }
    schedule(g.end, Wake::Complete, p.group.id);

    GroupRecord rec;
    rec.id = p.group.id;
    for (const auto& m : g.group.members)
        rec.members.push_back(m.id);
    rec.demand = p.group.demand;
    rec.root = p.root;
    rec.region = p.region;
    rec.stats = p.stats;
    rec.start = now;
    rec.t_e_group = g.t_e;
    rec.shots_planned = g.group.shots_group;
    rec.steps = p.steps;
    g.record = trace_.groups.size();
    log(now, EventKind::GroupStart, rec.id, rec.members, rec.region, rec.shots_planned);
    trace_.groups.push_back(std::move(rec));

    occupancy_.assign(p.group.id, p.region, p.root);
    active_.emplace(p.group.id, std::move(g));
}

void
Simulation::sample(Tick now)
{
    OccupancySample s{now, cfg_.chip.size() - occupancy_.free_count(), occupancy_.buffer_count(cfg_.chip),
                      static_cast<int>(active_.size())};
    if (!trace_.timeline.empty() && trace_.timeline.back().time == now)
        trace_.timeline.back() = s;
    else
        trace_.timeline.push_back(s);
}

}  // namespace

Trace
simulate(const SimConfig& config)
{
    return Simulation(config).run();
}

SimResult
run(const SimConfig& config)
{
    SimResult result;
    result.trace = simulate(config);
    if (!result.trace.jobs.empty())
        result.metrics = compute_metrics(result.trace, config.chip, config.coherence);
    return result;
}

}  // namespace qsra
