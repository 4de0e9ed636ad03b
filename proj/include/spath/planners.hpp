#pragma once
// Native anytime sampling planners (RRT*, PRM*, BIT*) over a masked 2D space
// with ESDF clearance checking.
//
// Budgets are measured on a deterministic virtual clock: elementary operations
// (samples drawn, point validity checks, pairwise distance evaluations) are
// charged fixed costs calibrated to their order-of-magnitude real cost. This
// makes planning results a pure function of (inputs, seed) — identical across
// runs, threads and platforms — while keeping budgets proportional to real
// work. Real wall time is measured separately by the pipeline.

#include <cstdint>
#include <utility>
#include <vector>

#include "spath/gridmap.hpp"

namespace spath {

enum class PlannerKind { RrtStar, PrmStar, BitStar };

const char* planner_name(PlannerKind kind);
PlannerKind parse_planner(const std::string& name);

struct PlannerConfig {
    PlannerKind kind = PlannerKind::PrmStar;
    double budget = 1.0;        // virtual seconds
    std::uint64_t seed = 0;
    double robot_radius = 0.3;  // meters
    double steer_step = 1.0;    // RRT* extension step and rewire-radius cap
    double rewire_gamma = 1.1;  // multiplier on the asymptotic-optimality radius
    int batch_size = 100;       // BIT* samples per batch
    double goal_bias = 0.05;    // RRT* goal sampling probability
};

// Virtual cost per elementary operation, in virtual seconds.
namespace plan_cost {
inline constexpr double kSample = 2.0e-7;      // one random configuration drawn
inline constexpr double kPointCheck = 1.2e-7;  // one clearance evaluation
inline constexpr double kDistEval = 1.0e-8;    // one pairwise distance / relax op
}  // namespace plan_cost

struct PlanStats {
    std::size_t samples = 0;          // random configurations drawn
    std::size_t validity_checks = 0;  // point clearance evaluations
    std::size_t iterations = 0;
    double solved_at = -1.0;  // virtual time of the first solution, -1 if none
    double used = 0.0;        // virtual seconds consumed
    // (virtual time, best path length) at every improvement, non-increasing.
    std::vector<std::pair<double, double>> cost_trace;
};

struct GeometricPath {
    std::vector<Vec2> waypoints;
    double length = 0.0;
    PlanStats stats;
};

double path_length(const std::vector<Vec2>& waypoints);
inline double path_length(const GeometricPath& p) { return path_length(p.waypoints); }

struct PlanOutcome {
    bool solved = false;    // timeout without a path is a value, not an error
    GeometricPath path;     // waypoints empty when unsolved; stats always set
};

// Sampling domain: the mask when present, otherwise the grid bounding box.
// free_area is the measure used by the RGG radius bounds.
struct PlanSpace {
    const DistanceField* df = nullptr;
    const CellMask* mask = nullptr;
    Vec2 lo;
    Vec2 hi;
    double free_area = 0.0;
};

PlanSpace make_space(const DistanceField& df, const OccupancyGrid& grid, const CellMask* mask);

// Best path within the virtual budget; anytime. Throws on invalid endpoints.
PlanOutcome plan(Vec2 start, Vec2 goal, const PlanSpace& space, const PlannerConfig& cfg);

}  // namespace spath
