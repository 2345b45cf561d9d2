#pragma once

#include "qsra/chip.hpp"
#include "qsra/merger.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace qsra {

inline constexpr int kFreeQubit = -1;

// Which group (if any) owns each physical qubit, plus the root qubit of
// every active group.
class Occupancy
{
public:
    Occupancy() = default;
    explicit Occupancy(int n_qubits) : owner_(static_cast<std::size_t>(n_qubits), kFreeQubit) {}

    int size() const { return static_cast<int>(owner_.size()); }
    int owner(QubitId q) const { return owner_[static_cast<std::size_t>(q)]; }
    bool is_free(QubitId q) const { return owner(q) == kFreeQubit; }

    // A free qubit next to any owned qubit.
    bool is_buffer(const Chip& chip, QubitId q) const;
    // Free and not a buffer: eligible to join a new region.
    bool is_usable(const Chip& chip, QubitId q) const { return is_free(q) && !is_buffer(chip, q); }

    int free_count() const;
    int usable_count(const Chip& chip) const;
    int buffer_count(const Chip& chip) const;

    // Throws InputError if any qubit is already owned.
    void assign(int group_id, std::span<const QubitId> region, QubitId root);
    void release(int group_id);

    const std::map<int, QubitId>& roots() const { return roots_; }
    std::vector<QubitId> qubits_of(int group_id) const;

    bool operator==(const Occupancy&) const = default;

private:
    std::vector<int> owner_;
    std::map<int, QubitId> roots_;
};

struct RegionStats
{
    int r_i{0};  // edges with both endpoints inside
    int r_a{0};  // edges with at least one endpoint inside
    double ratio{0.0};

    bool operator==(const RegionStats&) const = default;
};

// Throws InputError for an empty region or out-of-range qubit.
RegionStats region_ratio(const Chip& chip, std::span<const QubitId> region);

// (1 - exp(-t_e / T_Q)) * readout_error, t_e in seconds, T_Q in microseconds.
double qubit_error(const QubitSpec& spec, double t_e_s, CoherenceMode mode = CoherenceMode::T2);

struct AllocatorOptions
{
    CoherenceMode coherence{CoherenceMode::T2};
    bool record_steps{true};
};

// Greedy root placement for groups in priority order. Each root is a usable
// qubit maximizing the summed hop distance to the roots placed so far plus
// the roots of running groups; remaining ties go to the larger minimum
// distance, then larger eccentricity, then smaller qubit_error, then lower
// id. Earlier roots are treated as occupied for later ones. Throws
// InputError when no eligible qubit remains.
std::vector<QubitId> select_roots(const Chip& chip, const DistanceMatrix& distances, std::span<const Group> groups,
                                  const Occupancy& occupancy, const AllocatorOptions& options = {});

// Root for one group, or nullopt if no usable qubit exists.
std::optional<QubitId> choose_root(const Chip& chip, const DistanceMatrix& distances, const Occupancy& occupancy,
                                   double t_e_group, CoherenceMode mode);

struct FrontierCandidate
{
    QubitId qubit{0};
    int r_i{0};  // stats of region + {qubit}
    int r_a{0};
};

struct GrowthStep
{
    QubitId chosen{0};
    std::vector<FrontierCandidate> frontier;  // ascending qubit id
};

struct GrowthResult
{
    std::vector<QubitId> region;   // growth order, root first
    std::vector<GrowthStep> steps;
    bool stalled{false};
    std::vector<int> blockers;     // groups whose adjacency cut off candidates; sorted

    bool ok() const { return !stalled; }
};

// Grows a connected region from `root` one qubit at a time, always taking
// the frontier qubit with the largest resulting r_i/r_a (ties: smaller
// qubit_error, then fewer hops from the root, then lower id). Frontier qubits are free and not adjacent to
// any owned qubit. Throws InputError if the root is not usable.
GrowthResult grow_region(const Chip& chip, const Occupancy& occupancy, QubitId root, int demand, double t_e_group,
                         const AllocatorOptions& options = {});

struct Blocker
{
    int group_id{0};
    bool running{false};
    const Group* group{nullptr};  // required when !running
};

struct ConflictDecision
{
    bool stalled_yields{true};
    int group_id{0};             // group losing a member
    std::size_t member_index{0};
    JobId job{0};                // the job sent back to the queue
};

// Running blockers are never disturbed; if only running groups block, the
// stalled group gives up its lowest-priority member. Otherwise the stalled
// group is compared with the lowest-priority blocker placed in this pass:
// two singletons -> the lower-priority one yields; if either is merged ->
// the lowest-priority member across both yields.
ConflictDecision resolve_conflict(const Group& stalled, std::span<const Blocker> blockers);

struct Placement
{
    Group group;
    QubitId root{0};
    std::vector<QubitId> region;
    RegionStats stats;
    std::vector<GrowthStep> steps;
};

struct ConflictRecord
{
    int stalled_group{0};
    std::vector<int> blockers;
    ConflictDecision decision;
};

struct AllocationOutcome
{
    std::vector<Placement> placed;
    std::vector<Job> requeued;
    std::vector<ConflictRecord> conflicts;
};

// Places groups in the given (priority) order. Every group already present in
// `occupancy` is running and immune to eviction. A stall is
// settled by resolve_conflict, and the pass resumes from the earliest
// group whose membership changed until every group is placed or requeued.
AllocationOutcome allocate(const Chip& chip, const DistanceMatrix& distances, const Occupancy& occupancy,
                           std::vector<Group> groups, const AllocatorOptions& options = {});

}  // namespace qsra
