#pragma once

#include "qsra/metrics.hpp"
#include "qsra/scheduler.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsra::cli {

// One results.csv line. Seed rows carry a seed; cell mean rows do not.
struct ResultRow
{
    PolicyKind policy{PolicyKind::FCFS};
    double lambda{0.0};
    std::optional<std::uint64_t> seed;
    double throughput{0.0};
    double utilization{0.0};
    double mean_wt{0.0};
    double p95_wt{0.0};
    double pst{0.0};
    double mean_ratio{0.0};
    double makespan{0.0};
};

ResultRow make_row(PolicyKind policy, double lambda, std::uint64_t seed, const MetricsReport& m);

// Column-wise arithmetic mean of seed rows of one (policy, lambda) cell.
ResultRow mean_row(const std::vector<ResultRow>& rows);

inline constexpr const char* kCsvHeader =
    "policy,lambda,seed,throughput,utilization,mean_wt,p95_wt,pst,mean_ratio,makespan";

// Doubles are written with %.17g so that they round-trip exactly.
std::string csv_line(const ResultRow& row);

}  // namespace qsra::cli
