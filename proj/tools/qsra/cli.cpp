#include "qsra/cli.hpp"

#include "qsra/errors.hpp"
#include "qsra/report.hpp"
#include "qsra/run_spec.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace qsra::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kDefaultLambdas[] = {5.0, 20.0, 50.0, 100.0, 500.0};

json
metrics_to_json(const MetricsReport& m)
{
    return {
        {"jobs", m.jobs},
        {"makespan", m.makespan},
        {"throughput", m.throughput},
        {"utilization", m.utilization},
        {"buffer_fraction", m.buffer_fraction},
        {"mean_wt", m.weighted_turnaround.mean},
        {"median_wt", m.weighted_turnaround.median},
        {"p95_wt", m.weighted_turnaround.p95},
        {"pst", m.pst.mean},
        {"mean_ratio", m.mean_region_ratio},
    };
}

json
row_to_json(const ResultRow& r)
{
    json j = {
        {"policy", std::string(policy_name(r.policy))},
        {"lambda", r.lambda},
        {"throughput", r.throughput},
        {"utilization", r.utilization},
        {"mean_wt", r.mean_wt},
        {"p95_wt", r.p95_wt},
        {"pst", r.pst},
        {"mean_ratio", r.mean_ratio},
        {"makespan", r.makespan},
    };
    if (r.seed)
        j["seed"] = *r.seed;
    return j;
}

void
write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << text;
    if (!out)
        throw InputError("cannot write " + path.string());
}

fs::path
prepare_out_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw InputError("cannot create output directory " + dir + ": " + ec.message());
    return fs::path(dir);
}

struct CellResult
{
    ResultRow row;
    MetricsReport metrics;
    std::string error;
    bool failed{false};
};

struct Cell
{
    PolicyKind policy;
    double lambda;
    std::uint64_t seed;
};

// Runs every cell, `jobs` at a time. Failures are recorded per cell.
std::vector<CellResult>
run_cells(const RunSpec& spec, const std::vector<Cell>& cells, int jobs, std::vector<Trace>* traces)
{
    std::vector<CellResult> results(cells.size());
    if (traces)
        traces->assign(cells.size(), Trace{});
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& c = cells[i];
            CellResult& r = results[i];
            try {
                SimResult sim = run(make_sim_config(spec, c.policy, c.lambda, c.seed));
                r.metrics = sim.metrics;
                r.row = make_row(c.policy, c.lambda, c.seed, sim.metrics);
                if (traces)
                    (*traces)[i] = std::move(sim.trace);
            } catch (const std::exception& e) {
                r.failed = true;
                r.error = e.what();
                r.row.policy = c.policy;
                r.row.lambda = c.lambda;
                r.row.seed = c.seed;
            }
        }
    };

    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    return results;
}

// CSV text plus a JSON list of cell means, grouped by (policy, lambda) in cell order.
std::pair<std::string, json>
tabulate(const std::vector<Cell>& cells, const std::vector<CellResult>& results)
{
    std::string csv = std::string(kCsvHeader) + "\n";
    json means = json::array();
    std::size_t i = 0;
    while (i < cells.size()) {
        std::size_t j = i;
        std::vector<ResultRow> ok;
        while (j < cells.size() && cells[j].policy == cells[i].policy && cells[j].lambda == cells[i].lambda) {
            if (!results[j].failed) {
                csv += csv_line(results[j].row) + "\n";
                ok.push_back(results[j].row);
            }
            ++j;
        }
        if (!ok.empty()) {
            const ResultRow m = mean_row(ok);
            csv += csv_line(m) + "\n";
            json jm = row_to_json(m);
            jm["seeds"] = ok.size();
            means.push_back(std::move(jm));
        }
        i = j;
    }
    return {csv, means};
}

json
failures_json(const std::vector<CellResult>& results, std::ostream& err)
{
    json failures = json::array();
    for (const auto& r : results)
        if (r.failed) {
            err << "qsra: run " << policy_name(r.row.policy) << " lambda=" << r.row.lambda << " seed=" << *r.row.seed
                << " failed: " << r.error << "\n";
            failures.push_back({{"policy", std::string(policy_name(r.row.policy))},
                                {"lambda", r.row.lambda},
                                {"seed", *r.row.seed},
                                {"error", r.error}});
        }
    return failures;
}

int
cmd_run(const std::string& config, const Overrides& ov, std::ostream& out, std::ostream& err)
{
    RunSpec spec = load_run_spec(config, ov);
    if (spec.policies.empty())
        spec.policies = {PolicyKind::QHRRF};
    if (spec.policies.size() != 1)
        throw InputError("run takes one policy; use sweep for several");
    if (spec.lambdas.size() > 1)
        throw InputError("run takes one lambda; use sweep for several");
    const double lambda = spec.workload ? 0.0 : (spec.lambdas.empty() ? spec.generator.lambda : spec.lambdas.front());

    std::vector<Cell> cells;
    for (auto seed : spec.seeds)
        cells.push_back({spec.policies.front(), lambda, seed});
    std::vector<Trace> traces;
    const auto results = run_cells(spec, cells, spec.jobs, spec.write_trace ? &traces : nullptr);

    const fs::path dir = prepare_out_dir(spec.out_dir);
    json runs = json::array();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (results[i].failed)
            continue;
        json r = metrics_to_json(results[i].metrics);
        r["seed"] = cells[i].seed;
        runs.push_back(std::move(r));
        if (spec.write_trace) {
            const auto name = cells.size() == 1 ? std::string("trace.jsonl")
                                                : "trace-seed" + std::to_string(cells[i].seed) + ".jsonl";
            write_file(dir / name, trace_to_jsonl(traces[i], spec.growth_steps));
        }
    }
    auto [csv, means] = tabulate(cells, results);
    json summary = {
        {"command", "run"},
        {"policy", std::string(policy_name(spec.policies.front()))},
        {"lambda", lambda},
        {"chip", {{"name", spec.chip.name}, {"qubits", spec.chip.size()}}},
        {"runs", runs},
        {"failures", failures_json(results, err)},
    };
    if (runs.size() == 1)
        summary["mean_wt"] = runs[0]["mean_wt"];
    if (!means.empty())
        summary["mean"] = means[0];

    write_file(dir / "summary.json", summary.dump(2) + "\n");
    write_file(dir / "results.csv", csv);
    out << "wrote " << (dir / "summary.json").string() << "\n";
    return summary["failures"].empty() ? 0 : 1;
}

int
cmd_sweep(const std::string& config, const Overrides& ov, std::ostream& out, std::ostream& err)
{
    RunSpec spec = load_run_spec(config, ov);
    if (spec.workload)
        throw InputError("sweep needs a generated workload, not workload.file");
    if (spec.policies.empty())
        spec.policies.assign(std::begin(kAllPolicies), std::end(kAllPolicies));
    if (spec.lambdas.empty())
        spec.lambdas.assign(std::begin(kDefaultLambdas), std::end(kDefaultLambdas));

    std::vector<Cell> cells;
    for (auto p : spec.policies)
        for (double l : spec.lambdas)
            for (auto s : spec.seeds)
                cells.push_back({p, l, s});
    const auto results = run_cells(spec, cells, spec.jobs, nullptr);

    const fs::path dir = prepare_out_dir(spec.out_dir);
    auto [csv, means] = tabulate(cells, results);
    json summary = {
        {"command", "sweep"},
        {"chip", {{"name", spec.chip.name}, {"qubits", spec.chip.size()}}},
        {"cells", means},
        {"failures", failures_json(results, err)},
    };
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    write_file(dir / "results.csv", csv);
    out << "wrote " << (dir / "results.csv").string() << " (" << cells.size() << " runs)\n";
    return summary["failures"].empty() ? 0 : 1;
}

void
emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-")
        out << text;
    else
        write_file(path, text);
}

}  // namespace

int
run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Quantum cloud scheduling and qubit allocation simulator", "qsra"};
    app.require_subcommand(1);

    std::string config;
    Overrides ov;
    std::vector<std::string> policies;
    std::vector<double> lambdas;
    std::vector<std::uint64_t> seeds;
    double merge_alpha = 0.0;
    std::string out_dir;
    int jobs = 0;

    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON run config")->required();
        sub->add_option("--policy", policies, "scheduling policy (repeatable)")->take_all();
        sub->add_option("--lambda", lambdas, "arrival rate per second (repeatable)")->take_all();
        sub->add_option("--seed", seeds, "workload seed (repeatable)")->take_all();
        sub->add_option("--merge-alpha", merge_alpha, "execution-time similarity ratio");
        sub->add_flag("--no-merge", ov.no_merge, "disable merging");
        sub->add_flag("--backfill", ov.backfill, "let later jobs fill residual capacity");
        sub->add_flag("--exclusive", ov.exclusive, "one program on the chip at a time");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--jobs", jobs, "concurrent simulations")->check(CLI::PositiveNumber);
    };

    CLI::App* run_cmd = app.add_subcommand("run", "simulate one policy and write summary, table and trace");
    add_run_flags(run_cmd);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "simulate every policy x lambda x seed cell");
    add_run_flags(sweep_cmd);

    CLI::App* gen_chip = app.add_subcommand("gen-chip", "write a grid chip file");
    int rows = 0, cols = 0;
    QubitSpec tmpl;
    tmpl.readout_error = 0.02;
    double t1 = 0.0;
    std::uint64_t noise_seed = 0;
    std::string name, chip_out;
    gen_chip->add_option("rows", rows)->required();
    gen_chip->add_option("cols", cols)->required();
    gen_chip->add_option("--t2-us", tmpl.t2_us, "coherence time T2 in microseconds");
    auto* t1_opt = gen_chip->add_option("--t1-us", t1, "relaxation time T1 in microseconds");
    gen_chip->add_option("--readout-error", tmpl.readout_error);
    auto* noise_opt = gen_chip->add_option("--noise-seed", noise_seed, "jitter calibration deterministically");
    gen_chip->add_option("--name", name);
    gen_chip->add_option("--out", chip_out, "output file (default stdout)");

    CLI::App* gen_wl = app.add_subcommand("gen-workload", "write a Poisson workload as JSON lines");
    double wl_lambda = 0.0, horizon = 0.0;
    std::uint64_t wl_seed = 0;
    int chip_qubits = 64;
    std::string wl_out;
    gen_wl->add_option("--lambda", wl_lambda, "arrival rate per second")->required();
    gen_wl->add_option("--horizon", horizon, "seconds")->required();
    auto* wl_seed_opt = gen_wl->add_option("--seed", wl_seed);
    gen_wl->add_option("--chip-qubits", chip_qubits, "N used for the default qubit-demand range");
    gen_wl->add_option("--out", wl_out, "output file (default stdout)");

    CLI::App* validate = app.add_subcommand("validate", "check a config and the files it names");
    validate->add_option("--config", config)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    ov.policies = policies;
    ov.lambdas = lambdas;
    ov.seeds = seeds;
    if (merge_alpha != 0.0)
        ov.merge_alpha = merge_alpha;
    if (!out_dir.empty())
        ov.out_dir = out_dir;
    if (jobs > 0)
        ov.jobs = jobs;

    try {
        if (*run_cmd)
            return cmd_run(config, ov, out, err);
        if (*sweep_cmd)
            return cmd_sweep(config, ov, out, err);
        if (*gen_chip) {
            if (*t1_opt)
                tmpl.t1_us = t1;
            Chip chip = generate_grid(rows, cols, tmpl,
                                      *noise_opt ? std::optional<std::uint64_t>(noise_seed) : std::nullopt);
            chip.name = name.empty() ? "grid-" + std::to_string(rows) + "x" + std::to_string(cols) : name;
            validate_chip(chip);
            emit(chip_out, dump_chip(chip) + "\n", out);
            return 0;
        }
        if (*gen_wl) {
            if (chip_qubits < 1)
                throw InputError("--chip-qubits must be >= 1");
            const auto seed = *wl_seed_opt ? wl_seed : seed_from_env().value_or(0);
            Workload w = generate_poisson_workload(default_workload_spec(chip_qubits, wl_lambda, horizon, seed));
            std::ostringstream text;
            write_workload(text, w);
            emit(wl_out, text.str(), out);
            return 0;
        }
        if (*validate) {
            RunSpec spec = load_run_spec(config, ov);
            out << "ok: chip \"" << spec.chip.name << "\" with " << spec.chip.size() << " qubits and "
                << spec.chip.graph.edges().size() << " edges";
            if (spec.workload)
                out << ", " << spec.workload->jobs.size() << " jobs from file";
            for (const auto& j : spec.workload ? spec.workload->jobs : std::vector<Job>{})
                if (j.n > spec.chip.size())
                    throw InputError("job " + std::to_string(j.id) + " needs more qubits than the chip has");
            out << "\n";
            return 0;
        }
    } catch (const InputError& e) {
        err << "qsra: " << e.what() << "\n";
        return 2;
    } catch (const SimulationError& e) {
        err << "qsra: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "qsra: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace qsra::cli
