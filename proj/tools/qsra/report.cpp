#include "qsra/report.hpp"

#include "qsra/errors.hpp"

#include <cstdio>

namespace qsra::cli {

ResultRow
make_row(PolicyKind policy, double lambda, std::uint64_t seed, const MetricsReport& m)
{
    ResultRow r;
    r.policy = policy;
    r.lambda = lambda;
    r.seed = seed;
    r.throughput = m.throughput;
    r.utilization = m.utilization;
    r.mean_wt = m.weighted_turnaround.mean;
    r.p95_wt = m.weighted_turnaround.p95;
    r.pst = m.pst.mean;
    r.mean_ratio = m.mean_region_ratio;
    r.makespan = m.makespan;
    return r;
}

ResultRow
mean_row(const std::vector<ResultRow>& rows)
{
    if (rows.empty())
        throw InputError("mean_row: no rows");
    ResultRow m;
    m.policy = rows.front().policy;
    m.lambda = rows.front().lambda;
    for (const auto& r : rows) {
        m.throughput += r.throughput;
        m.utilization += r.utilization;
        m.mean_wt += r.mean_wt;
        m.p95_wt += r.p95_wt;
        m.pst += r.pst;
        m.mean_ratio += r.mean_ratio;
        m.makespan += r.makespan;
    }
    const auto n = static_cast<double>(rows.size());
    for (double* v : {&m.throughput, &m.utilization, &m.mean_wt, &m.p95_wt, &m.pst, &m.mean_ratio, &m.makespan})
        *v /= n;
    return m;
}

std::string
csv_line(const ResultRow& row)
{
    std::string line(policy_name(row.policy));
    auto num = [&](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        line += ',';
        line += buf;
    };
    num(row.lambda);
    line += ',';
    line += row.seed ? std::to_string(*row.seed) : std::string("mean");
    for (double v : {row.throughput, row.utilization, row.mean_wt, row.p95_wt, row.pst, row.mean_ratio, row.makespan})
        num(v);
    return line;
}

}  // namespace qsra::cli
