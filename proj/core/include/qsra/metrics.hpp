#pragma once

#include "qsra/chip.hpp"
#include "qsra/trace.hpp"

#include <span>
#include <vector>

namespace qsra {

struct Distribution
{
    std::vector<double> values;  // job-id order
    double mean{0.0};
    double median{0.0};
    double p95{0.0};             // nearest-rank
};

Distribution summarize(std::vector<double> values);

struct MetricsReport
{
    int jobs{0};
    double makespan{0.0};         // seconds, last completion - first submission
    double throughput{0.0};       // jobs / second
    double utilization{0.0};
    double buffer_fraction{0.0};
    Distribution weighted_turnaround;
    Distribution pst;
    double mean_region_ratio{0.0};
};

// (t_comp - t_sub) / t_E against the job's own service demand.
// Throws InputError for an incomplete job.
double weighted_turnaround(const JobRecord& job);

double makespan(const Trace& trace);
double throughput(const Trace& trace);

// Integral of owned qubits over time, in qubit-ticks, from the occupancy timeline.
std::int64_t busy_qubit_ticks(const Trace& trace);
std::int64_t buffer_qubit_ticks(const Trace& trace);
// Sum over jobs of n * (time holding qubits), in qubit-ticks, from the job records.
std::int64_t owned_qubit_ticks(const Trace& trace);

double utilization(const Trace& trace, int chip_qubits);
double buffer_fraction(const Trace& trace, int chip_qubits);

// Product over qubits of exp(-t_e / T_q) * (1 - readout_error_q).
double pst_of_region(const Chip& chip, std::span<const QubitId> qubits, double t_e_s,
                     CoherenceMode mode = CoherenceMode::T2);

// Shot-weighted mean of pst_of_region over the job's segments.
double pst_estimate(const JobRecord& job, const Chip& chip, CoherenceMode mode = CoherenceMode::T2);

// Mean r_i/r_a over every placed region. Throws InputError with no allocations.
double mean_region_ratio(const Trace& trace);

// Throws InputError for a trace without jobs.
MetricsReport compute_metrics(const Trace& trace, const Chip& chip, CoherenceMode mode = CoherenceMode::T2);

}  // namespace qsra
