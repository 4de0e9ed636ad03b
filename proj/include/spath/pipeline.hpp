#pragma once
// End-to-end query execution: one-time environment setup, semantic planning,
// decomposition, sequential or parallel geometric solving, stitching, and
// cache-reusing replanning. Implements the ablation ladder: baseline global
// planning, C-space restriction, decomposition, and the cached/parallel modes.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "spath/decomposer.hpp"
#include "spath/planners.hpp"

namespace spath {

struct Environment {
    SceneGraph scene_graph;
    SemanticGraph semantic_graph;
    ContourMap room_contours;
    ContourMap doorway_contours;
    std::shared_ptr<const OccupancyGrid> grid;
    std::shared_ptr<const DistanceField> distance;
};

// Builds all contours, the semantic graph and the distance field once per map.
Environment setup(SceneGraph sg, OccupancyGrid grid);

// Copy of the environment with one doorway flag changed and the semantic
// graph rebuilt; contours and grids are shared, not recomputed.
Environment with_doorway_state(const Environment& env, const std::string& id, bool traversable);

enum class Mode { Baseline, Restricted, Decomposed, SPathSeq, SPathPar };
const char* mode_name(Mode mode);
Mode parse_mode(const std::string& name);

struct Endpoint {
    bool is_room = false;
    Vec2 point;
    std::string room;

    static Endpoint at(Vec2 p) { return {false, p, {}}; }
    static Endpoint in_room(std::string id) { return {true, {}, std::move(id)}; }
};

struct Query {
    Endpoint start;
    Endpoint goal;
    double ttp = 1.0;  // seconds
    Mode mode = Mode::SPathSeq;
    PlannerConfig planner;  // per-leg budgets and seeds are derived, not taken from here
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = hardware concurrency (parallel mode only)
    double merge_theta = kDefaultMergeTheta;
};

struct LegResult {
    Subproblem sub;
    bool cache_hit = false;
    bool solved = false;
    GeometricPath path;
};

struct PlanResult {
    bool success = false;
    Mode mode = Mode::SPathSeq;
    Vec2 resolved_start;
    Vec2 resolved_goal;
    SemanticPath semantic_path;           // empty in baseline mode
    std::vector<std::string> instructions;
    Decomposition decomposition;          // decomposed modes only
    std::vector<LegResult> legs;
    GeometricPath final_path;
    std::size_t cache_hits = 0;
    std::size_t planner_invocations = 0;
    double cpu_time = 0.0;   // virtual seconds consumed by planners
    double wall_time = 0.0;  // real seconds, informational only
};

// Keyed per-subproblem solutions; keys embed the doorway-state vector, so a
// lookup can only hit while every relevant doorway still has the same state.
class SolutionCache {
  public:
    bool lookup(std::uint64_t key, GeometricPath& out) const;
    void insert(std::uint64_t key, const GeometricPath& path);
    std::size_t size() const;

  private:
    mutable std::mutex mutex_;
    std::unordered_map<std::uint64_t, GeometricPath> entries_;
};

// Executes a query. The cache is consulted/updated only by the S-Path modes;
// passing nullptr runs cacheless.
PlanResult run(const Environment& env, const Query& q, SolutionCache* cache = nullptr);

// Concatenates per-leg paths, dropping duplicated junction waypoints.
// Consecutive legs must share their junction within 1e-6 m.
GeometricPath stitch(const std::vector<GeometricPath>& legs);

inline constexpr double kDefaultReuseDiscount = 0.5;

// Blocks the doorway (it must lie on prev's semantic path), discounts the
// semantic edges of the previous path by reuse_discount to favor reuse,
// restarts from the doorway preceding the blockage, and solves with cache
// lookups. env is updated to the blocked state.
PlanResult replan(Environment& env, const std::string& blocked, const PlanResult& prev,
                  SolutionCache& cache, const Query& q,
                  double reuse_discount = kDefaultReuseDiscount);

// Round-trippable result document (carries enough to replay a replan).
struct ResultDoc {
    PlanResult result;
    Query query;
    std::string env_dir;
    std::map<std::string, bool> doorway_states;
};
std::string result_to_json(const ResultDoc& doc);
ResultDoc result_from_json(const std::string& text);

}  // namespace spath
