#include "qsra/allocator.hpp"

#include "qsra/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace qsra {

bool
Occupancy::is_buffer(const Chip& chip, QubitId q) const
{
    if (!is_free(q))
        return false;
    for (QubitId r : chip.graph.neighbors(q))
        if (!is_free(r))
            return true;
    return false;
}

int
Occupancy::free_count() const
{
    return static_cast<int>(std::count(owner_.begin(), owner_.end(), kFreeQubit));
}

int
Occupancy::usable_count(const Chip& chip) const
{
    int count = 0;
    for (QubitId q = 0; q < size(); ++q)
        count += is_usable(chip, q) ? 1 : 0;
    return count;
}

int
Occupancy::buffer_count(const Chip& chip) const
{
    int count = 0;
    for (QubitId q = 0; q < size(); ++q)
        count += is_buffer(chip, q) ? 1 : 0;
    return count;
}

void
Occupancy::assign(int group_id, std::span<const QubitId> region, QubitId root)
{
    if (group_id == kFreeQubit)
        throw InputError("group id -1 is reserved for free qubits");
    for (QubitId q : region)
        if (q < 0 || q >= size() || !is_free(q))
            throw InputError("qubit " + std::to_string(q) + " is not free for group " + std::to_string(group_id));
    for (QubitId q : region)
        owner_[static_cast<std::size_t>(q)] = group_id;
    roots_[group_id] = root;
}

void
Occupancy::release(int group_id)
{
    for (auto& o : owner_)
        if (o == group_id)
            o = kFreeQubit;
    roots_.erase(group_id);
}

std::vector<QubitId>
Occupancy::qubits_of(int group_id) const
{
    std::vector<QubitId> out;
    for (QubitId q = 0; q < size(); ++q)
        if (owner(q) == group_id)
            out.push_back(q);
    return out;
}

////////////////////////////////////////////////////////////

namespace {

double
ratio_value(int r_i, int r_a)
{
    return r_a == 0 ? 0.0 : static_cast<double>(r_i) / static_cast<double>(r_a);
}

// Exact comparison of r_i/r_a fractions; r_a == 0 counts as ratio 0.
int
compare_ratio(int a_i, int a_a, int b_i, int b_a)
{
    if (a_a == 0)
        a_i = 0, a_a = 1;
    if (b_a == 0)
        b_i = 0, b_a = 1;
    const long long lhs = static_cast<long long>(a_i) * b_a;
    const long long rhs = static_cast<long long>(b_i) * a_a;
    return (lhs > rhs) - (lhs < rhs);
}

}  // namespace

RegionStats
region_ratio(const Chip& chip, std::span<const QubitId> region)
{
    if (region.empty())
        throw InputError("region_ratio: empty region");
    std::vector<char> inside(static_cast<std::size_t>(chip.size()), 0);
    for (QubitId q : region) {
        if (q < 0 || q >= chip.size())
            throw InputError("region_ratio: qubit " + std::to_string(q) + " out of range");
        inside[static_cast<std::size_t>(q)] = 1;
    }
    RegionStats s;
    for (const auto& [a, b] : chip.graph.edges()) {
        const bool ia = inside[static_cast<std::size_t>(a)], ib = inside[static_cast<std::size_t>(b)];
        if (ia && ib)
            ++s.r_i;
        if (ia || ib)
            ++s.r_a;
    }
    s.ratio = ratio_value(s.r_i, s.r_a);
    return s;
}

double
qubit_error(const QubitSpec& spec, double t_e_s, CoherenceMode mode)
{
    const double t_q_s = coherence_us(spec, mode) * 1e-6;
    return -std::expm1(-t_e_s / t_q_s) * spec.readout_error;
}

////////////////////////////////////////////////////////////

std::optional<QubitId>
choose_root(const Chip& chip, const DistanceMatrix& distances, const Occupancy& occupancy, double t_e_group,
            CoherenceMode mode)
{
    std::optional<QubitId> best;
    long long best_sum = -1;
    int best_min = -1, best_ecc = -1;
    double best_err = 0.0;

    for (QubitId q = 0; q < chip.size(); ++q) {
        if (!occupancy.is_usable(chip, q))
            continue;
        long long sum = 0;
        int min_d = std::numeric_limits<int>::max();
        for (const auto& [gid, root] : occupancy.roots()) {
            sum += distances(q, root);
            min_d = std::min(min_d, distances(q, root));
        }
        const int ecc = distances.eccentricity(q);
        const double err = qubit_error(chip.spec(q), t_e_group, mode);

        bool better = !best;
        if (!better) {
            if (sum != best_sum)
                better = sum > best_sum;
            else if (min_d != best_min)
                better = min_d > best_min;
            else if (ecc != best_ecc)
                better = ecc > best_ecc;
            else if (err != best_err)
                better = err < best_err;
            // equal on all counts: the lower id (seen first) stays
        }
        if (better) {
            best = q;
            best_sum = sum;
            best_min = min_d;
            best_ecc = ecc;
            best_err = err;
        }
    }
    return best;
}

std::vector<QubitId>
select_roots(const Chip& chip, const DistanceMatrix& distances, std::span<const Group> groups,
             const Occupancy& occupancy, const AllocatorOptions& options)
{
    Occupancy occ = occupancy;
    std::vector<QubitId> roots;
    int placeholder = -2;
    for (const auto& g : groups) {
        auto root = choose_root(chip, distances, occ, g.t_e_group, options.coherence);
        if (!root)
            throw InputError("select_roots: no eligible qubit for group " + std::to_string(g.id));
        roots.push_back(*root);
        const QubitId cell[] = {*root};
        occ.assign(placeholder--, cell, *root);
    }
    return roots;
}

////////////////////////////////////////////////////////////

GrowthResult
grow_region(const Chip& chip, const Occupancy& occupancy, QubitId root, int demand, double t_e_group,
            const AllocatorOptions& options)
{
    if (root < 0 || root >= chip.size() || !occupancy.is_usable(chip, root))
        throw InputError("grow_region: root " + std::to_string(root) + " is not a free non-buffer qubit");
    if (demand < 1)
        throw InputError("grow_region: demand must be >= 1");

    const auto n = static_cast<std::size_t>(chip.size());
    std::vector<char> in_region(n, 0);
    std::vector<int> inside_nbrs(n, 0);
    std::set<QubitId> frontier;
    std::set<QubitId> cut_off;  // free neighbours rejected for touching another group

    // hop distance from the root, for the compactness tie-break
    std::vector<int> hops(n, -1);
    std::vector<QubitId> bfs{root};
    hops[static_cast<std::size_t>(root)] = 0;
    for (std::size_t k = 0; k < bfs.size(); ++k)
        for (QubitId r : chip.graph.neighbors(bfs[k]))
            if (hops[static_cast<std::size_t>(r)] < 0) {
                hops[static_cast<std::size_t>(r)] = hops[static_cast<std::size_t>(bfs[k])] + 1;
                bfs.push_back(r);
            }

    GrowthResult result;
    int r_i = 0, deg_sum = 0;

    auto add = [&](QubitId q) {
        in_region[static_cast<std::size_t>(q)] = 1;
        r_i += inside_nbrs[static_cast<std::size_t>(q)];
        deg_sum += chip.graph.degree(q);
        result.region.push_back(q);
        frontier.erase(q);
        for (QubitId r : chip.graph.neighbors(q)) {
            ++inside_nbrs[static_cast<std::size_t>(r)];
            if (in_region[static_cast<std::size_t>(r)] || !occupancy.is_free(r))
                continue;
            if (occupancy.is_buffer(chip, r))
                cut_off.insert(r);
            else
                frontier.insert(r);
        }
    };

    add(root);
    while (static_cast<int>(result.region.size()) < demand) {
        if (frontier.empty()) {
            result.stalled = true;
            std::set<int> blockers;
            for (QubitId q : cut_off)
                for (QubitId r : chip.graph.neighbors(q))
                    if (!occupancy.is_free(r))
                        blockers.insert(occupancy.owner(r));
            result.blockers.assign(blockers.begin(), blockers.end());
            return result;
        }

        GrowthStep step;
        std::optional<FrontierCandidate> best;
        double best_err = 0.0;
        for (QubitId c : frontier) {
            FrontierCandidate cand{c, r_i + inside_nbrs[static_cast<std::size_t>(c)], 0};
            cand.r_a = deg_sum + chip.graph.degree(c) - cand.r_i;
            const double err = qubit_error(chip.spec(c), t_e_group, options.coherence);
            bool better = !best;
            if (!better) {
                const int cmp = compare_ratio(cand.r_i, cand.r_a, best->r_i, best->r_a);
                if (cmp != 0)
                    better = cmp > 0;
                else if (err != best_err)
                    better = err < best_err;
                else
                    better = hops[static_cast<std::size_t>(c)] < hops[static_cast<std::size_t>(best->qubit)];
            }
            if (better) {
                best = cand;
                best_err = err;
            }
            if (options.record_steps)
                step.frontier.push_back(cand);
        }
        step.chosen = best->qubit;
        if (options.record_steps)
            result.steps.push_back(std::move(step));
        add(best->qubit);
    }
    return result;
}

////////////////////////////////////////////////////////////

ConflictDecision
resolve_conflict(const Group& stalled, std::span<const Blocker> blockers)
{
    const Blocker* weakest = nullptr;
    for (const auto& b : blockers) {
        if (b.running)
            continue;
        if (!b.group)
            throw InputError("resolve_conflict: blocker " + std::to_string(b.group_id) + " placed this pass has no group");
        if (!weakest || b.group->priority_rank > weakest->group->priority_rank)
            weakest = &b;
    }

    auto pick = [](const Group& g, bool stalled_side) {
        const std::size_t idx = g.lowest_member();
        return ConflictDecision{stalled_side, g.id, idx, g.members[idx].id};
    };

    if (!weakest)
        return pick(stalled, true);

    const Group& other = *weakest->group;
    if (!stalled.merged() && !other.merged())
        return stalled.priority_rank > other.priority_rank ? pick(stalled, true) : pick(other, false);

    const std::size_t stalled_low = stalled.ranks[stalled.lowest_member()];
    const std::size_t other_low = other.ranks[other.lowest_member()];
    return stalled_low > other_low ? pick(stalled, true) : pick(other, false);
}

AllocationOutcome
allocate(const Chip& chip, const DistanceMatrix& distances, const Occupancy& occupancy, std::vector<Group> groups,
         const AllocatorOptions& options)
{
    AllocationOutcome outcome;
    Occupancy occ = occupancy;
    std::vector<Placement> placed;

    std::size_t i = 0;
    while (i < groups.size()) {
        Group& g = groups[i];
        std::vector<int> blocker_ids;

        auto root = choose_root(chip, distances, occ, g.t_e_group, options.coherence);
        if (root) {
            GrowthResult gr = grow_region(chip, occ, *root, g.demand, g.t_e_group, options);
            if (gr.ok()) {
                Placement p;
                p.group = g;
                p.root = *root;
                p.region = std::move(gr.region);
                p.stats = region_ratio(chip, p.region);
                p.steps = std::move(gr.steps);
                occ.assign(g.id, p.region, p.root);
                placed.push_back(std::move(p));
                ++i;
                continue;
            }
            blocker_ids = std::move(gr.blockers);
        } else {
            std::set<int> owners;
            for (QubitId q = 0; q < chip.size(); ++q)
                if (occ.is_free(q))
                    for (QubitId r : chip.graph.neighbors(q))
                        if (!occ.is_free(r))
                            owners.insert(occ.owner(r));
            blocker_ids.assign(owners.begin(), owners.end());
        }

        std::vector<Blocker> blockers;
        for (int id : blocker_ids) {
            Blocker b{id, occupancy.roots().count(id) > 0, nullptr};
            if (!b.running) {
                for (std::size_t j = 0; j < i; ++j)
                    if (groups[j].id == id)
                        b.group = &groups[j];
            }
            blockers.push_back(b);
        }

        const ConflictDecision decision = resolve_conflict(g, blockers);
        outcome.conflicts.push_back({g.id, blocker_ids, decision});

        std::size_t affected = i;
        if (!decision.stalled_yields) {
            affected = 0;
            while (groups[affected].id != decision.group_id)
                ++affected;
        }
        Group& loser = groups[affected];
        outcome.requeued.push_back(loser.members[decision.member_index]);
        remove_member(loser, decision.member_index);
        if (loser.members.empty())
            groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(affected));

        if (affected < i) {
            placed.resize(affected);
            occ = occupancy;
            for (const auto& p : placed)
                occ.assign(p.group.id, p.region, p.root);
        }
        i = affected;
    }

    outcome.placed = std::move(placed);
    return outcome;
}

}  // namespace qsra
