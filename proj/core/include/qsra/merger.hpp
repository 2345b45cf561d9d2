#pragma once

#include "qsra/workload.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace qsra {

// A set of jobs compiled and placed as one program. A member's priority is
// its position in the policy-ordered queue (0 = front), so "highest
// priority" is the smallest rank.
struct Group
{
    int id{0};
    std::vector<Job> members;          // best rank first
    std::vector<std::size_t> ranks;    // parallel to members
    double t_e_group{0.0};             // max member t_e_shot
    int shots_group{0};                // max member shots
    int demand{0};                     // sum of member n
    std::size_t priority_rank{0};      // min member rank

    bool merged() const { return members.size() > 1; }

    // Index of the member with the lowest priority (largest rank).
    std::size_t lowest_member() const;
};

// Builds a group from (job, rank) pairs and fills in the derived fields.
Group make_group(int id, std::vector<Job> members, std::vector<std::size_t> ranks);

// Removes one member and recomputes the derived fields.
void remove_member(Group& group, std::size_t index);

// Longest prefix of the ordered queue whose summed demand fits the
// capacity. With backfill, later jobs that individually fit the residual
// capacity are appended in queue order. Returns queue indices.
std::vector<std::size_t> select_prefix(std::span<const Job> ordered_queue, int free_capacity, bool backfill = false);

enum class GroupingKey
{
    PerShot,  // t_e_shot
    Total,    // shots * t_e_shot
};

// Greedy clustering on execution time: sorted ascending, a job joins the
// open group iff its time <= alpha * (the group's smallest time). `ranks`
// gives each job's queue position (defaults to its index in `jobs`). The
// returned groups are ordered by priority_rank and numbered from first_id.
std::vector<Group> group_by_exec_time(std::span<const Job> jobs, double alpha,
                                      std::span<const std::size_t> ranks = {},
                                      GroupingKey key = GroupingKey::PerShot, int first_id = 0);

// One singleton group per job, in the given order.
std::vector<Group> singleton_groups(std::span<const Job> jobs, std::span<const std::size_t> ranks = {},
                                    int first_id = 0);

// shots_group * t_e_group; every member completes when this is served.
double group_service_demand(const Group& group);

}  // namespace qsra
