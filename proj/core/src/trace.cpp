#include "qsra/trace.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>
#include <sstream>

namespace qsra {

using nlohmann::json;

Tick
to_ticks(double seconds)
{
    return static_cast<Tick>(std::llround(seconds * kTicksPerSecond));
}

std::string_view
event_kind_name(EventKind kind)
{
    switch (kind) {
    case EventKind::Arrival: return "arrival";
    case EventKind::GroupStart: return "start";
    case EventKind::GroupComplete: return "complete";
    case EventKind::QuantumExpiry: return "quantum_expiry";
    case EventKind::PreemptPoint: return "preempt_point";
    case EventKind::Preempt: return "preempt";
    case EventKind::Requeue: return "requeue";
    case EventKind::JobComplete: return "job_done";
    }
    return "?";
}

void
write_trace_jsonl(std::ostream& out, const Trace& trace, bool include_growth_steps)
{
    for (const auto& e : trace.events) {
        json rec{{"record", "event"}, {"tick", e.time}, {"time", to_seconds(e.time)},
                 {"kind", event_kind_name(e.kind)}};
        if (e.group >= 0)
            rec["group"] = e.group;
        rec["jobs"] = e.jobs;
        if (!e.qubits.empty())
            rec["qubits"] = e.qubits;
        if (e.shots)
            rec["shots"] = e.shots;
        out << rec.dump() << '\n';
    }

    for (const auto& j : trace.jobs) {
        json segs = json::array();
        for (const auto& s : j.segments) {
            segs.push_back({{"group", s.group}, {"start", to_seconds(s.start)}, {"end", to_seconds(s.end)},
                            {"shots", s.shots_credited}, {"t_e_group", to_seconds(s.t_e_group)},
                            {"qubits", s.qubits}, {"preempted", s.preempted}});
        }
        json rec{{"record", "job"}, {"id", j.job.id}, {"n", j.job.n}, {"shots", j.job.shots},
                 {"t_sub", to_seconds(j.submitted)}, {"t_e_shot", to_seconds(j.t_e_shot)},
                 {"t_E", to_seconds(j.service)}, {"shots_done", j.shots_done}, {"preemptions", j.preemptions},
                 {"segments", std::move(segs)}};
        if (j.done()) {
            rec["t_comp"] = to_seconds(j.completed);
            rec["t_wt"] = static_cast<double>(j.completed - j.submitted) / static_cast<double>(j.service);
        }
        out << rec.dump() << '\n';
    }

    for (const auto& g : trace.groups) {
        json rec{{"record", "group"}, {"id", g.id}, {"members", g.members}, {"demand", g.demand},
                 {"root", g.root}, {"region", g.region}, {"r_i", g.stats.r_i}, {"r_a", g.stats.r_a},
                 {"ratio", g.stats.ratio}, {"start", to_seconds(g.start)}, {"end", to_seconds(g.end)},
                 {"t_e_group", to_seconds(g.t_e_group)}, {"shots_planned", g.shots_planned},
                 {"shots_run", g.shots_run}, {"preempted", g.preempted}};
        if (include_growth_steps) {
            json steps = json::array();
            for (const auto& s : g.steps) {
                json frontier = json::array();
                for (const auto& c : s.frontier)
                    frontier.push_back({c.qubit, c.r_i, c.r_a});
                steps.push_back({{"chosen", s.chosen}, {"frontier", std::move(frontier)}});
            }
            rec["growth"] = std::move(steps);
        }
        out << rec.dump() << '\n';
    }
}

std::string
trace_to_jsonl(const Trace& trace, bool include_growth_steps)
{
    std::ostringstream out;
    write_trace_jsonl(out, trace, include_growth_steps);
    return out.str();
}

}  // namespace qsra
