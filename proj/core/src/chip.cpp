#include "qsra/chip.hpp"

#include "qsra/errors.hpp"
#include "qsra/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace qsra {

using nlohmann::json;

double
coherence_us(const QubitSpec& spec, CoherenceMode mode)
{
    if (mode == CoherenceMode::MinT1T2 && spec.t1_us)
        return std::min(*spec.t1_us, spec.t2_us);
    return spec.t2_us;
}

////////////////////////////////////////////////////////////

CouplingGraph::CouplingGraph(int n_qubits, std::vector<Edge> edges)
    : n_(n_qubits)
{
    if (n_qubits < 1)
        throw InputError("coupling graph needs at least one qubit");

    for (auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n_qubits || b >= n_qubits)
            throw InputError("edge [" + std::to_string(a) + "," + std::to_string(b) + "]: index out of range");
        if (a == b)
            throw InputError("edge [" + std::to_string(a) + "," + std::to_string(b) + "]: self-loop");
        if (a > b)
            std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    auto dup = std::adjacent_find(edges.begin(), edges.end());
    if (dup != edges.end())
        throw InputError("edge [" + std::to_string(dup->first) + "," + std::to_string(dup->second) + "]: duplicate edge");
    edges_ = std::move(edges);

    adj_.assign(static_cast<std::size_t>(n_), {});
    for (const auto& [a, b] : edges_) {
        adj_[static_cast<std::size_t>(a)].push_back(b);
        adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& nbrs : adj_)
        std::sort(nbrs.begin(), nbrs.end());

    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::deque<QubitId> frontier{0};
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        QubitId q = frontier.front();
        frontier.pop_front();
        for (QubitId r : adj_[static_cast<std::size_t>(q)]) {
            if (!seen[static_cast<std::size_t>(r)]) {
                seen[static_cast<std::size_t>(r)] = 1;
                ++reached;
                frontier.push_back(r);
            }
        }
    }
    if (reached != n_)
        throw InputError("coupling graph is disconnected (" + std::to_string(reached) + " of " +
                         std::to_string(n_) + " qubits reachable from qubit 0)");
}

////////////////////////////////////////////////////////////

static void
validate_spec(const QubitSpec& s)
{
    const std::string where = "qubit " + std::to_string(s.id) + ": ";
    if (!(s.t2_us > 0.0) || !std::isfinite(s.t2_us))
        throw InputError(where + "non-positive coherence time t2");
    if (s.t1_us && (!(*s.t1_us > 0.0) || !std::isfinite(*s.t1_us)))
        throw InputError(where + "non-positive coherence time t1");
    if (!(s.readout_error >= 0.0 && s.readout_error <= 1.0))
        throw InputError(where + "readout_error probability out of [0,1]");
}

void
validate_chip(const Chip& chip)
{
    if (static_cast<int>(chip.specs.size()) != chip.graph.size())
        throw InputError("chip has " + std::to_string(chip.specs.size()) + " qubit specs for " +
                         std::to_string(chip.graph.size()) + " graph vertices");
    for (std::size_t i = 0; i < chip.specs.size(); ++i) {
        if (chip.specs[i].id != static_cast<QubitId>(i))
            throw InputError("qubit spec at position " + std::to_string(i) + " has id " +
                             std::to_string(chip.specs[i].id));
        validate_spec(chip.specs[i]);
    }
}

Chip
parse_chip(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed chip document: ") + e.what());
    }

    try {
        if (!doc.is_object())
            throw InputError("malformed chip document: top level must be an object");

        Chip chip;
        chip.name = doc.value("name", std::string{});

        const auto& qubits = doc.at("qubits");
        if (!qubits.is_array() || qubits.empty())
            throw InputError("malformed chip document: \"qubits\" must be a non-empty array");

        const int n = static_cast<int>(qubits.size());
        std::vector<std::optional<QubitSpec>> slots(static_cast<std::size_t>(n));
        for (const auto& q : qubits) {
            QubitSpec s;
            s.id = q.at("id").get<int>();
            if (q.contains("t1_us") && !q.at("t1_us").is_null())
                s.t1_us = q.at("t1_us").get<double>();
            s.t2_us = q.at("t2_us").get<double>();
            s.readout_error = q.at("readout_error").get<double>();
            if (s.id < 0 || s.id >= n)
                throw InputError("qubit id " + std::to_string(s.id) + ": index out of range");
            auto& slot = slots[static_cast<std::size_t>(s.id)];
            if (slot)
                throw InputError("qubit id " + std::to_string(s.id) + " listed twice");
            validate_spec(s);
            slot = s;
        }
        for (auto& slot : slots)
            chip.specs.push_back(*slot);  // all present: n distinct ids in [0, n)

        std::vector<CouplingGraph::Edge> edges;
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw InputError("malformed chip document: each edge must be a pair");
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        chip.graph = CouplingGraph(n, std::move(edges));
        return chip;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed chip document: ") + e.what());
    }
}

Chip
load_chip(std::istream& source)
{
    std::ostringstream buf;
    buf << source.rdbuf();
    return parse_chip(buf.str());
}

Chip
load_chip_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open chip file: " + path);
    return load_chip(in);
}

std::string
dump_chip(const Chip& chip)
{
    json doc;
    doc["name"] = chip.name;
    json qubits = json::array();
    for (const auto& s : chip.specs) {
        json q{{"id", s.id}};
        if (s.t1_us)
            q["t1_us"] = *s.t1_us;
        q["t2_us"] = s.t2_us;
        q["readout_error"] = s.readout_error;
        qubits.push_back(std::move(q));
    }
    doc["qubits"] = std::move(qubits);
    json edges = json::array();
    for (const auto& [a, b] : chip.graph.edges())
        edges.push_back({a, b});
    doc["edges"] = std::move(edges);
    return doc.dump(2);
}

////////////////////////////////////////////////////////////

Chip
generate_grid(int rows, int cols, const QubitSpec& spec_template, std::optional<std::uint64_t> noise_seed)
{
    if (rows < 1 || cols < 1)
        throw InputError("grid dimensions must be positive (got " + std::to_string(rows) + "x" +
                         std::to_string(cols) + ")");

    const int n = rows * cols;
    std::vector<CouplingGraph::Edge> edges;
    edges.reserve(static_cast<std::size_t>(rows * (cols - 1) + cols * (rows - 1)));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int q = r * cols + c;
            if (c + 1 < cols)
                edges.emplace_back(q, q + 1);
            if (r + 1 < rows)
                edges.emplace_back(q, q + cols);
        }
    }

    Chip chip;
    chip.name = "grid-" + std::to_string(rows) + "x" + std::to_string(cols);
    chip.graph = CouplingGraph(n, std::move(edges));
    chip.specs.reserve(static_cast<std::size_t>(n));

    std::optional<Xoshiro256> rng;
    if (noise_seed)
        rng.emplace(*noise_seed);
    for (int q = 0; q < n; ++q) {
        QubitSpec s = spec_template;
        s.id = q;
        if (rng) {
            const double coherence_scale = rng->uniform(0.8, 1.2);
            const double readout_scale = rng->uniform(0.5, 1.5);
            s.t2_us *= coherence_scale;
            if (s.t1_us)
                *s.t1_us *= coherence_scale;
            s.readout_error = std::min(1.0, s.readout_error * readout_scale);
        }
        chip.specs.push_back(s);
    }
    validate_chip(chip);
    return chip;
}

////////////////////////////////////////////////////////////

int
DistanceMatrix::eccentricity(QubitId q) const
{
    int ecc = 0;
    for (QubitId r = 0; r < n_; ++r)
        ecc = std::max(ecc, (*this)(q, r));
    return ecc;
}

DistanceMatrix
all_pairs_distances(const Chip& chip)
{
    const int n = chip.size();
    DistanceMatrix d(n);
    std::vector<QubitId> queue(static_cast<std::size_t>(n));
    for (QubitId src = 0; src < n; ++src) {
        std::size_t head = 0, tail = 0;
        queue[tail++] = src;
        d.at(src, src) = 0;
        while (head < tail) {
            QubitId q = queue[head++];
            for (QubitId r : chip.graph.neighbors(q)) {
                if (d(src, r) < 0) {
                    d.at(src, r) = d(src, q) + 1;
                    queue[tail++] = r;
                }
            }
        }
    }
    return d;
}

}  // namespace qsra
