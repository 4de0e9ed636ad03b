#pragma once
// Splits a coarse path into doorway-to-doorway subproblems, computes effort
// heuristics (start-goal distance plus sqrt of region area), merges undersized
// subproblems into their cheaper neighbors, and distributes the planning time
// budget proportionally to effort.

#include <cstdint>
#include <string>
#include <vector>

#include "spath/semantic_planner.hpp"

namespace spath {

struct Subproblem {
    int index = 0;
    Vec2 start;
    Vec2 goal;
    ComposedContour contour;
    // Traversable flags of the doorways inside the contour, in member order;
    // part of the cache key so entries die exactly when a relevant flag flips.
    std::vector<std::pair<std::string, bool>> doorway_states;
    double effort = 0.0;  // meters-equivalent
    double budget = 0.0;  // seconds
    std::uint64_t cache_key = 0;
};

struct Decomposition {
    std::vector<Subproblem> subproblems;
    double total_effort = 0.0;
    double ttp = 0.0;  // seconds
};

double effort(const Subproblem& sp);
std::uint64_t subproblem_cache_key(const Subproblem& sp);

// One subproblem per coarse-path leg, with efforts and cache keys filled in.
std::vector<Subproblem> decompose(const CoarsePath& cp, const SceneGraph& sg);

// Iteratively merges the smallest subproblem whose effort is below
// theta * mean(effort) into its lower-effort neighbor, recomputing efforts
// after every merge, until no subproblem is undersized.
std::vector<Subproblem> merge_small(std::vector<Subproblem> subs, double theta,
                                    const OccupancyGrid& grid);

// Budgets proportional to effort (equal split when total effort is zero).
Decomposition allocate(std::vector<Subproblem> subs, double ttp);

inline constexpr double kDefaultMergeTheta = 0.25;

}  // namespace spath
