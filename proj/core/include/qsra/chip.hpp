#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qsra {

using QubitId = int;

struct QubitSpec
{
    QubitId id{0};
    std::optional<double> t1_us;
    double t2_us{100.0};
    double readout_error{0.0};

    bool operator==(const QubitSpec&) const = default;
};

// Which calibration value stands in for a qubit's coherence time.
enum class CoherenceMode
{
    T2,
    MinT1T2,
};

double coherence_us(const QubitSpec& spec, CoherenceMode mode);

class CouplingGraph
{
public:
    using Edge = std::pair<QubitId, QubitId>;

    CouplingGraph() = default;

    // Validates: no self-loops, no duplicates, indices in range, connected.
    // Edges are stored normalized (first < second) and sorted.
    CouplingGraph(int n_qubits, std::vector<Edge> edges);

    int size() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<QubitId>& neighbors(QubitId q) const { return adj_[static_cast<std::size_t>(q)]; }
    int degree(QubitId q) const { return static_cast<int>(neighbors(q).size()); }

    bool operator==(const CouplingGraph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

private:
    int n_{0};
    std::vector<Edge> edges_;
    std::vector<std::vector<QubitId>> adj_;
};

struct Chip
{
    std::string name;
    CouplingGraph graph;
    std::vector<QubitSpec> specs;  // indexed by qubit id

    int size() const { return graph.size(); }
    const QubitSpec& spec(QubitId q) const { return specs[static_cast<std::size_t>(q)]; }

    bool operator==(const Chip&) const = default;
};

// Checks every Chip invariant; throws InputError naming the first violation.
void validate_chip(const Chip& chip);

// Chip file: {"name", "qubits": [{"id","t1_us"?,"t2_us","readout_error"}], "edges": [[a,b],...]}.
Chip load_chip(std::istream& source);
Chip load_chip_file(const std::string& path);
Chip parse_chip(std::string_view text);
std::string dump_chip(const Chip& chip);

// rows x cols lattice with 4-neighbour coupling. With a noise seed, t1/t2
// are scaled by a factor in [0.8, 1.2) and readout_error by [0.5, 1.5).
Chip generate_grid(int rows, int cols, const QubitSpec& spec_template = {},
                   std::optional<std::uint64_t> noise_seed = std::nullopt);

class DistanceMatrix
{
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1) {}

    int size() const { return n_; }
    int operator()(QubitId a, QubitId b) const { return d_[index(a, b)]; }
    int& at(QubitId a, QubitId b) { return d_[index(a, b)]; }

    int eccentricity(QubitId q) const;

private:
    std::size_t index(QubitId a, QubitId b) const
    {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b);
    }

    int n_{0};
    std::vector<int> d_;
};

// Hop distances by BFS from every qubit.
DistanceMatrix all_pairs_distances(const Chip& chip);

}  // namespace qsra
