#pragma once
// High-level planning over the semantic graph: endpoint location via
// point-in-polygon tests, A* for the shortest semantic path, and expansion
// into the coarse geometric path with its reduced sample space.

#include <map>
#include <string>
#include <vector>

#include "spath/contour.hpp"
#include "spath/scenegraph.hpp"

namespace spath {

// Alternating room/doorway sequence, rooms at both ends.
struct SemanticPath {
    std::vector<std::string> nodes;
    double total_weight = 0.0;

    std::vector<std::string> room_ids() const;
    std::vector<std::string> doorway_ids() const;
};

struct CoarsePath {
    std::vector<Vec2> waypoints;        // p_s, doorway centroids in order, p_g
    std::vector<ComposedContour> legs;  // one restricted region per leg
    ComposedContour region;             // union of all legs
};

using ContourMap = std::map<std::string, ConvexPolygon>;

// Room containing p; points inside only a doorway quad resolve to the
// connected room with the nearer centroid. Throws when p is in no contour.
std::string locate(Vec2 p, const SceneGraph& sg, const ContourMap& room_contours,
                   const ContourMap& doorway_contours);

// Minimal-total-weight alternating path. Heuristic: Euclidean distance to the
// goal centroid, scaled by heuristic_scale (<= 1 keeps it admissible when
// edges carry discounts). Ties broken by fewer nodes, then lexicographically.
SemanticPath astar(const SemanticGraph& g, const std::string& start, const std::string& goal,
                   double heuristic_scale = 1.0);

// Expands a semantic path into waypoints (the doorway centroids, projected to
// 2D) and per-leg composed contours. Consecutive legs overlap exactly in the
// shared doorway quad.
CoarsePath coarse_path(const SemanticPath& sp, Vec2 p_start, Vec2 p_goal, const SceneGraph& sg,
                       const ContourMap& room_contours, const ContourMap& doorway_contours,
                       const OccupancyGrid& grid);

// Human-readable rendering, one line per hop:
//   go from <room> through <doorway> to <room>
std::vector<std::string> render_instructions(const SemanticPath& sp);

}  // namespace spath
