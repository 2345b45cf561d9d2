#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qsra {

using JobId = int;

// A submitted program. Times are in seconds.
struct Job
{
    JobId id{0};
    int n{1};             // qubit demand
    int shots{1};
    double t_sub{0.0};    // submission time
    double t_e_shot{0.0}; // per-shot duration incl. initialization and measurement

    bool operator==(const Job&) const = default;
};

void validate_job(const Job& job);

// Total execution and result-collection time, shots * t_e_shot.
double service_demand(const Job& job);

struct Workload
{
    std::vector<Job> jobs;  // sorted by t_sub, then id
    double horizon{0.0};

    bool operator==(const Workload&) const = default;
};

// Uniform on [lo, hi] when `values` is empty, otherwise a discrete
// distribution over `values` with the given (unnormalized) weights.
struct IntDist
{
    std::int64_t lo{1};
    std::int64_t hi{1};
    std::vector<std::int64_t> values;
    std::vector<double> weights;

    static IntDist uniform(std::int64_t lo, std::int64_t hi) { return {lo, hi, {}, {}}; }
    static IntDist discrete(std::vector<std::int64_t> v, std::vector<double> w) { return {0, 0, std::move(v), std::move(w)}; }
};

struct RealDist
{
    double lo{0.0};
    double hi{0.0};
    std::vector<double> values;
    std::vector<double> weights;

    static RealDist uniform(double lo, double hi) { return {lo, hi, {}, {}}; }
    static RealDist discrete(std::vector<double> v, std::vector<double> w) { return {0.0, 0.0, std::move(v), std::move(w)}; }
};

struct WorkloadSpec
{
    double lambda{1.0};   // arrivals per second
    double horizon{1.0};  // seconds
    IntDist qubits;
    IntDist shots;
    RealDist t_e_shot;
    std::uint64_t seed{0};
};

// n ~ U[2, N/4], shots ~ U{100..1000}, t_e_shot ~ U[0.5 ms, 5 ms].
WorkloadSpec default_workload_spec(int chip_qubits, double lambda, double horizon, std::uint64_t seed);

void validate_workload_spec(const WorkloadSpec& spec);

// Exponential(lambda) inter-arrival gaps; arrivals after the horizon are
// dropped. Deterministic in spec (seed included).
Workload generate_poisson_workload(const WorkloadSpec& spec);

// JSON lines, one {"id","n","shots","t_sub","t_e_shot"} object per line.
Workload load_workload(std::istream& source);
Workload load_workload_file(const std::string& path);
Workload parse_workload(std::string_view text);
void write_workload(std::ostream& out, const Workload& workload);

// Sorts by (t_sub, id) and checks every job and id uniqueness.
void normalize_workload(Workload& workload);

}  // namespace qsra
