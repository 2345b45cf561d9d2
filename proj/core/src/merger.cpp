#include "qsra/merger.hpp"

#include "qsra/errors.hpp"

#include <algorithm>
#include <numeric>

namespace qsra {

namespace {

void
refresh(Group& g)
{
    std::vector<std::size_t> order(g.members.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.ranks[a] < g.ranks[b]; });
    std::vector<Job> members;
    std::vector<std::size_t> ranks;
    for (std::size_t i : order) {
        members.push_back(g.members[i]);
        ranks.push_back(g.ranks[i]);
    }
    g.members = std::move(members);
    g.ranks = std::move(ranks);

    g.t_e_group = 0.0;
    g.shots_group = 0;
    g.demand = 0;
    for (const auto& j : g.members) {
        g.t_e_group = std::max(g.t_e_group, j.t_e_shot);
        g.shots_group = std::max(g.shots_group, j.shots);
        g.demand += j.n;
    }
    g.priority_rank = g.ranks.empty() ? 0 : g.ranks.front();
}

std::size_t
rank_of(std::span<const std::size_t> ranks, std::size_t i)
{
    return ranks.empty() ? i : ranks[i];
}

}  // namespace

std::size_t
Group::lowest_member() const
{
    return static_cast<std::size_t>(std::max_element(ranks.begin(), ranks.end()) - ranks.begin());
}

Group
make_group(int id, std::vector<Job> members, std::vector<std::size_t> ranks)
{
    if (members.empty() || members.size() != ranks.size())
        throw InputError("a group needs at least one member and one rank per member");
    Group g;
    g.id = id;
    g.members = std::move(members);
    g.ranks = std::move(ranks);
    refresh(g);
    return g;
}

void
remove_member(Group& group, std::size_t index)
{
    group.members.erase(group.members.begin() + static_cast<std::ptrdiff_t>(index));
    group.ranks.erase(group.ranks.begin() + static_cast<std::ptrdiff_t>(index));
    refresh(group);
}

std::vector<std::size_t>
select_prefix(std::span<const Job> ordered_queue, int free_capacity, bool backfill)
{
    std::vector<std::size_t> picked;
    int residual = free_capacity;
    std::size_t i = 0;
    for (; i < ordered_queue.size(); ++i) {
        if (ordered_queue[i].n > residual)
            break;
        residual -= ordered_queue[i].n;
        picked.push_back(i);
    }
    if (backfill) {
        for (++i; i < ordered_queue.size() && residual > 0; ++i) {
            if (ordered_queue[i].n <= residual) {
                residual -= ordered_queue[i].n;
                picked.push_back(i);
            }
        }
    }
    return picked;
}

std::vector<Group>
group_by_exec_time(std::span<const Job> jobs, double alpha, std::span<const std::size_t> ranks, GroupingKey key,
                   int first_id)
{
    if (!(alpha >= 1.0))
        throw InputError("merge alpha must be >= 1");
    if (!ranks.empty() && ranks.size() != jobs.size())
        throw InputError("group_by_exec_time: ranks and jobs differ in length");

    auto time_of = [key](const Job& j) {
        return key == GroupingKey::PerShot ? j.t_e_shot : service_demand(j);
    };

    std::vector<std::size_t> order(jobs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ta = time_of(jobs[a]), tb = time_of(jobs[b]);
        return ta < tb || (ta == tb && rank_of(ranks, a) < rank_of(ranks, b));
    });

    std::vector<Group> groups;
    double group_min = 0.0;
    for (std::size_t i : order) {
        const double t = time_of(jobs[i]);
        if (groups.empty() || t > alpha * group_min) {
            groups.emplace_back();
            group_min = t;
        }
        groups.back().members.push_back(jobs[i]);
        groups.back().ranks.push_back(rank_of(ranks, i));
    }
    for (auto& g : groups)
        refresh(g);
    std::stable_sort(groups.begin(), groups.end(),
                     [](const Group& a, const Group& b) { return a.priority_rank < b.priority_rank; });
    for (std::size_t i = 0; i < groups.size(); ++i)
        groups[i].id = first_id + static_cast<int>(i);
    return groups;
}

std::vector<Group>
singleton_groups(std::span<const Job> jobs, std::span<const std::size_t> ranks, int first_id)
{
    std::vector<Group> groups;
    groups.reserve(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i)
        groups.push_back(make_group(first_id + static_cast<int>(i), {jobs[i]}, {rank_of(ranks, i)}));
    return groups;
}

double
group_service_demand(const Group& group)
{
    return static_cast<double>(group.shots_group) * group.t_e_group;
}

}  // namespace qsra
