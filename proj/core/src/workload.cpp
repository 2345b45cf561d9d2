#include "qsra/workload.hpp"

#include "qsra/errors.hpp"
#include "qsra/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace qsra {

using nlohmann::json;

void
validate_job(const Job& job)
{
    const std::string where = "job " + std::to_string(job.id) + ": ";
    if (job.n < 1)
        throw InputError(where + "qubit demand n must be >= 1");
    if (job.shots < 1)
        throw InputError(where + "shots must be >= 1");
    if (!(job.t_e_shot > 0.0) || !std::isfinite(job.t_e_shot))
        throw InputError(where + "t_e_shot must be > 0");
    if (!(job.t_sub >= 0.0) || !std::isfinite(job.t_sub))
        throw InputError(where + "t_sub must be >= 0");
}

double
service_demand(const Job& job)
{
    return static_cast<double>(job.shots) * job.t_e_shot;
}

WorkloadSpec
default_workload_spec(int chip_qubits, double lambda, double horizon, std::uint64_t seed)
{
    const std::int64_t hi = std::max<std::int64_t>(1, chip_qubits / 4);
    const std::int64_t lo = std::min<std::int64_t>(2, hi);
    WorkloadSpec spec;
    spec.lambda = lambda;
    spec.horizon = horizon;
    spec.qubits = IntDist::uniform(lo, hi);
    spec.shots = IntDist::uniform(100, 1000);
    spec.t_e_shot = RealDist::uniform(0.5e-3, 5e-3);
    spec.seed = seed;
    return spec;
}

////////////////////////////////////////////////////////////

namespace {

void
check_weights(const std::vector<double>& weights, std::size_t n_values, const char* what)
{
    if (n_values == 0)
        throw InputError(std::string(what) + ": empty distribution support");
    if (weights.size() != n_values)
        throw InputError(std::string(what) + ": weights and values differ in length");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw InputError(std::string(what) + ": negative or non-finite weight");
        total += w;
    }
    if (!(total > 0.0))
        throw InputError(std::string(what) + ": empty distribution support (all weights zero)");
}

void
check_int_dist(const IntDist& d, std::int64_t min_allowed, const char* what)
{
    if (d.values.empty()) {
        if (d.lo > d.hi)
            throw InputError(std::string(what) + ": empty distribution support");
        if (d.lo < min_allowed)
            throw InputError(std::string(what) + ": support extends below " + std::to_string(min_allowed));
        return;
    }
    check_weights(d.weights, d.values.size(), what);
    for (std::size_t i = 0; i < d.values.size(); ++i)
        if (d.weights[i] > 0.0 && d.values[i] < min_allowed)
            throw InputError(std::string(what) + ": support extends below " + std::to_string(min_allowed));
}

void
check_real_dist(const RealDist& d, const char* what)
{
    if (d.values.empty()) {
        if (!(d.lo <= d.hi) || !std::isfinite(d.lo) || !std::isfinite(d.hi))
            throw InputError(std::string(what) + ": empty distribution support");
        if (!(d.lo > 0.0))
            throw InputError(std::string(what) + ": support must be > 0");
        return;
    }
    check_weights(d.weights, d.values.size(), what);
    for (std::size_t i = 0; i < d.values.size(); ++i)
        if (d.weights[i] > 0.0 && !(d.values[i] > 0.0))
            throw InputError(std::string(what) + ": support must be > 0");
}

std::size_t
draw_index(Xoshiro256& rng, const std::vector<double>& weights)
{
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    const double u = rng.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc && weights[i] > 0.0)
            return i;
    }
    // u landed on the rounding slack above the last partial sum
    for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0.0)
            return i;
    return 0;
}

std::int64_t
draw(Xoshiro256& rng, const IntDist& d)
{
    if (d.values.empty())
        return rng.uniform_int(d.lo, d.hi);
    return d.values[draw_index(rng, d.weights)];
}

double
draw(Xoshiro256& rng, const RealDist& d)
{
    if (d.values.empty())
        return d.lo == d.hi ? d.lo : rng.uniform(d.lo, d.hi);
    return d.values[draw_index(rng, d.weights)];
}

}  // namespace

void
validate_workload_spec(const WorkloadSpec& spec)
{
    if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda))
        throw InputError("workload spec: lambda must be > 0");
    if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon))
        throw InputError("workload spec: horizon must be > 0");
    check_int_dist(spec.qubits, 1, "qubit distribution");
    check_int_dist(spec.shots, 1, "shots distribution");
    check_real_dist(spec.t_e_shot, "t_e_shot distribution");
}

Workload
generate_poisson_workload(const WorkloadSpec& spec)
{
    validate_workload_spec(spec);

    Xoshiro256 rng(spec.seed);
    Workload w;
    w.horizon = spec.horizon;
    double t = 0.0;
    for (JobId id = 0;; ++id) {
        t += rng.exponential(spec.lambda);
        if (t > spec.horizon)
            break;
        Job job;
        job.id = id;
        job.t_sub = t;
        job.n = static_cast<int>(draw(rng, spec.qubits));
        job.shots = static_cast<int>(draw(rng, spec.shots));
        job.t_e_shot = draw(rng, spec.t_e_shot);
        w.jobs.push_back(job);
    }
    return w;
}

////////////////////////////////////////////////////////////

void
normalize_workload(Workload& workload)
{
    for (const auto& job : workload.jobs)
        validate_job(job);
    std::stable_sort(workload.jobs.begin(), workload.jobs.end(), [](const Job& a, const Job& b) {
        return a.t_sub < b.t_sub || (a.t_sub == b.t_sub && a.id < b.id);
    });
    std::vector<JobId> ids;
    ids.reserve(workload.jobs.size());
    for (const auto& job : workload.jobs)
        ids.push_back(job.id);
    std::sort(ids.begin(), ids.end());
    auto dup = std::adjacent_find(ids.begin(), ids.end());
    if (dup != ids.end())
        throw InputError("duplicate job id " + std::to_string(*dup));
    if (!workload.jobs.empty())
        workload.horizon = std::max(workload.horizon, workload.jobs.back().t_sub);
}

Workload
parse_workload(std::string_view text)
{
    Workload w;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos)
            continue;
        try {
            json rec = json::parse(line);
            Job job;
            job.id = rec.at("id").get<int>();
            job.n = rec.at("n").get<int>();
            job.shots = rec.at("shots").get<int>();
            job.t_sub = rec.at("t_sub").get<double>();
            job.t_e_shot = rec.at("t_e_shot").get<double>();
            w.jobs.push_back(job);
        } catch (const json::exception& e) {
            throw InputError("workload line " + std::to_string(line_no) + ": malformed record: " + e.what());
        }
    }
    normalize_workload(w);
    return w;
}

Workload
load_workload(std::istream& source)
{
    std::ostringstream buf;
    buf << source.rdbuf();
    return parse_workload(buf.str());
}

Workload
load_workload_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open workload file: " + path);
    return load_workload(in);
}

void
write_workload(std::ostream& out, const Workload& workload)
{
    for (const auto& job : workload.jobs) {
        json rec{{"id", job.id}, {"n", job.n}, {"shots", job.shots}, {"t_sub", job.t_sub}, {"t_e_shot", job.t_e_shot}};
        out << rec.dump() << '\n';
    }
}

}  // namespace qsra
