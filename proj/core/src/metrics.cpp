#include "qsra/metrics.hpp"

#include "qsra/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsra {

Distribution
summarize(std::vector<double> values)
{
    Distribution d;
    d.values = std::move(values);
    if (d.values.empty())
        return d;
    d.mean = std::accumulate(d.values.begin(), d.values.end(), 0.0) / static_cast<double>(d.values.size());
    std::vector<double> sorted = d.values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    d.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    d.p95 = sorted[std::max<std::size_t>(rank, 1) - 1];
    return d;
}

double
weighted_turnaround(const JobRecord& job)
{
    if (!job.done())
        throw InputError("job " + std::to_string(job.job.id) + " is incomplete");
    return static_cast<double>(job.completed - job.submitted) / static_cast<double>(job.service);
}

namespace {

void
require_jobs(const Trace& trace)
{
    if (trace.jobs.empty())
        throw InputError("empty trace");
}

Tick
first_submission(const Trace& trace)
{
    Tick t = trace.jobs.front().submitted;
    for (const auto& j : trace.jobs)
        t = std::min(t, j.submitted);
    return t;
}

Tick
last_completion(const Trace& trace)
{
    Tick t = 0;
    for (const auto& j : trace.jobs) {
        if (!j.done())
            throw InputError("trace is incomplete: job " + std::to_string(j.job.id) + " never finished");
        t = std::max(t, j.completed);
    }
    return t;
}

template <typename Field>
std::int64_t
integrate(const Trace& trace, Field field)
{
    std::int64_t total = 0;
    for (std::size_t i = 0; i + 1 < trace.timeline.size(); ++i)
        total += static_cast<std::int64_t>(field(trace.timeline[i])) * (trace.timeline[i + 1].time - trace.timeline[i].time);
    return total;
}

}  // namespace

double
makespan(const Trace& trace)
{
    require_jobs(trace);
    return to_seconds(last_completion(trace) - first_submission(trace));
}

double
throughput(const Trace& trace)
{
    const double span = makespan(trace);
    return span > 0.0 ? static_cast<double>(trace.jobs.size()) / span : 0.0;
}

std::int64_t
busy_qubit_ticks(const Trace& trace)
{
    return integrate(trace, [](const OccupancySample& s) { return s.busy; });
}

std::int64_t
buffer_qubit_ticks(const Trace& trace)
{
    return integrate(trace, [](const OccupancySample& s) { return s.buffer; });
}

std::int64_t
owned_qubit_ticks(const Trace& trace)
{
    std::int64_t total = 0;
    for (const auto& j : trace.jobs)
        for (const auto& s : j.segments)
            total += static_cast<std::int64_t>(j.job.n) * (s.end - s.start);
    return total;
}

double
utilization(const Trace& trace, int chip_qubits)
{
    require_jobs(trace);
    const Tick span = last_completion(trace) - first_submission(trace);
    if (span <= 0)
        return 0.0;
    return static_cast<double>(busy_qubit_ticks(trace)) / (static_cast<double>(chip_qubits) * static_cast<double>(span));
}

double
buffer_fraction(const Trace& trace, int chip_qubits)
{
    require_jobs(trace);
    const Tick span = last_completion(trace) - first_submission(trace);
    if (span <= 0)
        return 0.0;
    return static_cast<double>(buffer_qubit_ticks(trace)) / (static_cast<double>(chip_qubits) * static_cast<double>(span));
}

double
pst_of_region(const Chip& chip, std::span<const QubitId> qubits, double t_e_s, CoherenceMode mode)
{
    double p = 1.0;
    for (QubitId q : qubits) {
        const QubitSpec& s = chip.spec(q);
        p *= std::exp(-t_e_s / (coherence_us(s, mode) * 1e-6)) * (1.0 - s.readout_error);
    }
    return p;
}

double
pst_estimate(const JobRecord& job, const Chip& chip, CoherenceMode mode)
{
    double weighted = 0.0;
    long long shots = 0;
    for (const auto& s : job.segments) {
        if (s.shots_credited == 0)
            continue;
        weighted += s.shots_credited * pst_of_region(chip, s.qubits, to_seconds(s.t_e_group), mode);
        shots += s.shots_credited;
    }
    return shots ? weighted / static_cast<double>(shots) : 0.0;
}

double
mean_region_ratio(const Trace& trace)
{
    if (trace.groups.empty())
        throw InputError("trace has no allocations");
    double sum = 0.0;
    for (const auto& g : trace.groups)
        sum += g.stats.ratio;
    return sum / static_cast<double>(trace.groups.size());
}

MetricsReport
compute_metrics(const Trace& trace, const Chip& chip, CoherenceMode mode)
{
    require_jobs(trace);
    MetricsReport r;
    r.jobs = static_cast<int>(trace.jobs.size());
    r.makespan = makespan(trace);
    r.throughput = throughput(trace);
    r.utilization = utilization(trace, chip.size());
    r.buffer_fraction = buffer_fraction(trace, chip.size());

    std::vector<double> wt, pst;
    for (const auto& j : trace.jobs) {
        wt.push_back(weighted_turnaround(j));
        pst.push_back(pst_estimate(j, chip, mode));
    }
    r.weighted_turnaround = summarize(std::move(wt));
    r.pst = summarize(std::move(pst));
    r.mean_region_ratio = trace.groups.empty() ? 0.0 : mean_region_ratio(trace);
    return r;
}

}  // namespace qsra
