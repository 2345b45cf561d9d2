#include "qsra/run_spec.hpp"

#include "qsra/errors.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace qsra::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void
reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!keys.count(key))
            throw InputError("config: unknown key \"" + key + "\" in " + where);
}

const json&
object_at(const json& parent, const char* key)
{
    const json& v = parent.at(key);
    if (!v.is_object())
        throw InputError(std::string("config: \"") + key + "\" must be an object");
    return v;
}

template <typename T>
T
get(const json& obj, const char* key, const std::string& where)
{
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw InputError("config: bad or missing \"" + std::string(key) + "\" in " + where);
    }
}

template <typename T>
void
get_if(const json& obj, const char* key, const std::string& where, T& target)
{
    if (obj.contains(key))
        target = get<T>(obj, key, where);
}

std::string
resolve(const std::string& base_dir, const std::string& path)
{
    fs::path p(path);
    if (p.is_absolute() || base_dir.empty())
        return p.string();
    return (fs::path(base_dir) / p).string();
}

IntDist
int_dist(const json& j, const std::string& where)
{
    if (j.contains("uniform")) {
        const auto bounds = get<std::vector<std::int64_t>>(j, "uniform", where);
        if (bounds.size() != 2)
            throw InputError("config: " + where + ".uniform needs [lo, hi]");
        return IntDist::uniform(bounds[0], bounds[1]);
    }
    auto values = get<std::vector<std::int64_t>>(j, "values", where);
    std::vector<double> weights(values.size(), 1.0);
    get_if(j, "weights", where, weights);
    return IntDist::discrete(std::move(values), std::move(weights));
}

RealDist
real_dist(const json& j, const std::string& where)
{
    if (j.contains("uniform")) {
        const auto bounds = get<std::vector<double>>(j, "uniform", where);
        if (bounds.size() != 2)
            throw InputError("config: " + where + ".uniform needs [lo, hi]");
        return RealDist::uniform(bounds[0], bounds[1]);
    }
    auto values = get<std::vector<double>>(j, "values", where);
    std::vector<double> weights(values.size(), 1.0);
    get_if(j, "weights", where, weights);
    return RealDist::discrete(std::move(values), std::move(weights));
}

Chip
read_chip(const json& c, const std::string& base_dir)
{
    reject_unknown(c, "chip", {"file", "grid"});
    if (c.contains("file"))
        return load_chip_file(resolve(base_dir, get<std::string>(c, "file", "chip")));
    if (!c.contains("grid"))
        throw InputError("config: chip needs \"file\" or \"grid\"");
    const json& g = object_at(c, "grid");
    reject_unknown(g, "chip.grid", {"rows", "cols", "t1_us", "t2_us", "readout_error", "noise_seed"});
    QubitSpec tmpl;
    tmpl.t2_us = 100.0;
    tmpl.readout_error = 0.02;
    if (g.contains("t1_us"))
        tmpl.t1_us = get<double>(g, "t1_us", "chip.grid");
    get_if(g, "t2_us", "chip.grid", tmpl.t2_us);
    get_if(g, "readout_error", "chip.grid", tmpl.readout_error);
    std::optional<std::uint64_t> noise;
    if (g.contains("noise_seed"))
        noise = get<std::uint64_t>(g, "noise_seed", "chip.grid");
    return generate_grid(get<int>(g, "rows", "chip.grid"), get<int>(g, "cols", "chip.grid"), tmpl, noise);
}

void
read_workload(const json& w, const std::string& base_dir, RunSpec& spec)
{
    reject_unknown(w, "workload", {"file", "lambda", "lambdas", "horizon", "qubits", "shots", "t_e_shot"});
    if (w.contains("file")) {
        spec.workload = load_workload_file(resolve(base_dir, get<std::string>(w, "file", "workload")));
        return;
    }
    WorkloadSpec& g = spec.generator;
    get_if(w, "lambda", "workload", g.lambda);
    get_if(w, "horizon", "workload", g.horizon);
    get_if(w, "lambdas", "workload", spec.lambdas);
    if (w.contains("lambdas") && spec.lambdas.empty())
        throw InputError("config: workload.lambdas is empty");
    if (w.contains("qubits"))
        g.qubits = int_dist(w.at("qubits"), "workload.qubits");
    if (w.contains("shots"))
        g.shots = int_dist(w.at("shots"), "workload.shots");
    if (w.contains("t_e_shot"))
        g.t_e_shot = real_dist(w.at("t_e_shot"), "workload.t_e_shot");
}

void
read_policy(const json& p, RunSpec& spec)
{
    reject_unknown(p, "policy",
                   {"name", "names", "rr_quantum_shots", "mfq_levels", "mfq_base_quantum_shots", "mfq_aging_s"});
    if (p.contains("name"))
        spec.policies = {parse_policy(get<std::string>(p, "name", "policy"))};
    if (p.contains("names")) {
        spec.policies.clear();
        for (const auto& n : get<std::vector<std::string>>(p, "names", "policy"))
            spec.policies.push_back(parse_policy(n));
        if (spec.policies.empty())
            throw InputError("config: policy list is empty");
    }
    get_if(p, "rr_quantum_shots", "policy", spec.policy.rr_quantum_shots);
    get_if(p, "mfq_levels", "policy", spec.policy.mfq_levels);
    get_if(p, "mfq_base_quantum_shots", "policy", spec.policy.mfq_base_quantum_shots);
    get_if(p, "mfq_aging_s", "policy", spec.policy.mfq_aging_s);
}

void
read_merge(const json& m, RunSpec& spec)
{
    reject_unknown(m, "merge", {"enabled", "alpha", "key"});
    get_if(m, "enabled", "merge", spec.merge.enabled);
    get_if(m, "alpha", "merge", spec.merge.alpha);
    if (m.contains("key")) {
        const auto key = get<std::string>(m, "key", "merge");
        if (key == "per_shot")
            spec.merge.key = GroupingKey::PerShot;
        else if (key == "total")
            spec.merge.key = GroupingKey::Total;
        else
            throw InputError("config: merge.key must be \"per_shot\" or \"total\"");
    }
}

}  // namespace

std::optional<std::uint64_t>
seed_from_env()
{
    const char* raw = std::getenv("QSRA_SEED");
    if (!raw || !*raw)
        return std::nullopt;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(raw, &used);
        if (used != std::string(raw).size())
            throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw InputError(std::string("QSRA_SEED is not an unsigned integer: ") + raw);
    }
}

RunSpec
parse_run_spec(const std::string& text, const std::string& base_dir, const Overrides& ov)
{
    json root;
    try {
        root = text.empty() ? json::object() : json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!root.is_object())
        throw InputError("config: top level must be an object");
    reject_unknown(root, "config",
                   {"chip", "workload", "policy", "merge", "output", "seeds", "backfill", "exclusive", "coherence",
                    "jobs"});

    RunSpec spec;
    if (!root.contains("chip"))
        throw InputError("config: missing \"chip\" section");
    spec.chip = read_chip(object_at(root, "chip"), base_dir);

    spec.generator = default_workload_spec(spec.chip.size(), 5.0, 10.0, 0);
    if (root.contains("workload"))
        read_workload(object_at(root, "workload"), base_dir, spec);
    if (root.contains("policy"))
        read_policy(object_at(root, "policy"), spec);
    if (root.contains("merge"))
        read_merge(object_at(root, "merge"), spec);
    if (root.contains("output")) {
        const json& o = object_at(root, "output");
        reject_unknown(o, "output", {"dir", "trace", "growth_steps"});
        get_if(o, "dir", "output", spec.out_dir);
        get_if(o, "trace", "output", spec.write_trace);
        get_if(o, "growth_steps", "output", spec.growth_steps);
        if (o.contains("dir"))
            spec.out_dir = resolve(base_dir, spec.out_dir);
    }
    get_if(root, "seeds", "config", spec.seeds);
    if (root.contains("seeds") && spec.seeds.empty())
        throw InputError("config: seed list is empty");
    get_if(root, "backfill", "config", spec.backfill);
    get_if(root, "exclusive", "config", spec.exclusive);
    get_if(root, "jobs", "config", spec.jobs);
    if (root.contains("coherence")) {
        const auto mode = get<std::string>(root, "coherence", "config");
        if (mode == "t2")
            spec.coherence = CoherenceMode::T2;
        else if (mode == "min_t1_t2")
            spec.coherence = CoherenceMode::MinT1T2;
        else
            throw InputError("config: coherence must be \"t2\" or \"min_t1_t2\"");
    }

    if (!ov.policies.empty()) {
        spec.policies.clear();
        for (const auto& n : ov.policies)
            spec.policies.push_back(parse_policy(n));
    }
    if (!ov.lambdas.empty())
        spec.lambdas = ov.lambdas;
    if (!ov.seeds.empty())
        spec.seeds = ov.seeds;
    if (spec.seeds.empty())
        spec.seeds = {seed_from_env().value_or(0)};
    if (ov.merge_alpha)
        spec.merge.alpha = *ov.merge_alpha;
    if (ov.no_merge)
        spec.merge.enabled = false;
    spec.backfill = spec.backfill || ov.backfill;
    spec.exclusive = spec.exclusive || ov.exclusive;
    if (ov.out_dir)
        spec.out_dir = *ov.out_dir;
    if (ov.jobs)
        spec.jobs = *ov.jobs;

    if (spec.workload && !spec.lambdas.empty())
        throw InputError("config: arrival rates apply only to generated workloads, not to workload.file");
    if (spec.jobs < 1)
        throw InputError("config: jobs must be >= 1");
    for (double l : spec.lambdas)
        if (!(l > 0.0))
            throw InputError("config: lambda must be > 0");
    if (!(spec.merge.alpha >= 1.0))
        throw InputError("config: merge alpha must be >= 1");
    spec.policy.validate();
    if (!spec.workload) {
        WorkloadSpec probe = spec.generator;
        validate_workload_spec(probe);
    }
    return spec;
}

RunSpec
load_run_spec(const std::string& config_path, const Overrides& overrides)
{
    std::ifstream in(config_path);
    if (!in)
        throw InputError("cannot open config file: " + config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_spec(buf.str(), fs::path(config_path).parent_path().string(), overrides);
}

SimConfig
make_sim_config(const RunSpec& spec, PolicyKind policy, double lambda, std::uint64_t seed)
{
    SimConfig cfg;
    cfg.chip = spec.chip;
    if (spec.workload) {
        cfg.workload = *spec.workload;
    } else {
        WorkloadSpec g = spec.generator;
        g.lambda = lambda;
        g.seed = seed;
        cfg.workload = generate_poisson_workload(g);
    }
    cfg.policy = spec.policy;
    cfg.policy.kind = policy;
    cfg.merge = spec.merge;
    cfg.backfill = spec.backfill;
    cfg.exclusive = spec.exclusive;
    cfg.coherence = spec.coherence;
    cfg.record_growth_steps = spec.growth_steps;
    cfg.seed = seed;
    return cfg;
}

}  // namespace qsra::cli
