#include "spath/decomposer.hpp"

#include <algorithm>
#include <cmath>

#include "spath/rng.hpp"

namespace spath {

double effort(const Subproblem& sp) {
    return distance(sp.goal, sp.start) + std::sqrt(sp.contour.area);
}

std::uint64_t subproblem_cache_key(const Subproblem& sp) {
    Hasher h;
    h.f64(sp.start.x).f64(sp.start.y).f64(sp.goal.x).f64(sp.goal.y);
    for (const auto& id : sp.contour.member_ids) h.str(id);
    for (const auto& [id, open] : sp.doorway_states) h.str(id).flag(open);
    return h.value();
}

std::vector<Subproblem> decompose(const CoarsePath& cp, const SceneGraph& sg) {
    if (cp.legs.empty() || cp.waypoints.size() != cp.legs.size() + 1)
        throw Error("decompose: malformed coarse path");
    std::vector<Subproblem> subs;
    subs.reserve(cp.legs.size());
    for (std::size_t i = 0; i < cp.legs.size(); ++i) {
        Subproblem sp;
        sp.index = static_cast<int>(i);
        sp.start = cp.waypoints[i];
        sp.goal = cp.waypoints[i + 1];
        sp.contour = cp.legs[i];
        for (const auto& id : sp.contour.member_ids)
            if (sg.doorways.count(id)) sp.doorway_states.emplace_back(id, sg.doorway(id).traversable);
        sp.effort = effort(sp);
        sp.cache_key = subproblem_cache_key(sp);
        subs.push_back(std::move(sp));
    }
    return subs;
}

namespace {

Subproblem merge_pair(const Subproblem& first, const Subproblem& second,
                      const OccupancyGrid& grid) {
    Subproblem m;
    m.start = first.start;
    m.goal = second.goal;
    m.contour = merge_contours(first.contour, second.contour, grid);
    m.doorway_states = first.doorway_states;
    for (const auto& st : second.doorway_states) {
        const auto dup = std::find_if(m.doorway_states.begin(), m.doorway_states.end(),
                                      [&](const auto& s) { return s.first == st.first; });
        if (dup == m.doorway_states.end()) m.doorway_states.push_back(st);
    }
    m.effort = effort(m);
    m.cache_key = subproblem_cache_key(m);
    return m;
}

}  // namespace

std::vector<Subproblem> merge_small(std::vector<Subproblem> subs, double theta,
                                    const OccupancyGrid& grid) {
    if (subs.empty()) throw Error("merge_small: no subproblems");
    if (theta <= 0.0 || theta >= 1.0) throw Error("merge_small: theta must be in (0, 1)");

    while (subs.size() > 1) {
        double total = 0.0;
        for (const auto& s : subs) total += s.effort;
        const double threshold = theta * total / static_cast<double>(subs.size());

        // Smallest undersized subproblem; ties resolve to the lowest index.
        int victim = -1;
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (subs[i].effort >= threshold) continue;
            if (victim < 0 || subs[i].effort < subs[victim].effort) victim = static_cast<int>(i);
        }
        if (victim < 0) break;

        // Lower-effort neighbor wins; equal neighbors merge into the predecessor.
        int nbr;
        if (victim == 0)
            nbr = 1;
        else if (victim + 1 == static_cast<int>(subs.size()))
            nbr = victim - 1;
        else
            nbr = subs[victim - 1].effort <= subs[victim + 1].effort ? victim - 1 : victim + 1;

        const int lo = std::min(victim, nbr);
        Subproblem merged = merge_pair(subs[lo], subs[lo + 1], grid);
        subs[lo] = std::move(merged);
        subs.erase(subs.begin() + lo + 1);
    }

    for (std::size_t i = 0; i < subs.size(); ++i) subs[i].index = static_cast<int>(i);
    return subs;
}

Decomposition allocate(std::vector<Subproblem> subs, double ttp) {
    if (ttp <= 0.0) throw Error("allocate: ttp must be positive");
    Decomposition d;
    d.ttp = ttp;
    for (const auto& s : subs) d.total_effort += s.effort;
    if (d.total_effort <= 0.0) {
        const double each = ttp / static_cast<double>(subs.size());
        for (auto& s : subs) s.budget = each;
    } else {
        for (auto& s : subs) s.budget = ttp * s.effort / d.total_effort;
    }
    d.subproblems = std::move(subs);
    return d;
}

}  // namespace spath
