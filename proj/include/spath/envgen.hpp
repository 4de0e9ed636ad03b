#pragma once
// Deterministic synthetic floor generation: a grid of axis-aligned rooms,
// optionally split by a central corridor, connected by doorways (a random
// spanning set plus extras), with rectangular obstacles placed clear of every
// doorway. Emits a scene graph plus a matching occupancy grid.

#include <string>
#include <utility>
#include <vector>

#include "spath/gridmap.hpp"
#include "spath/scenegraph.hpp"

namespace spath {

struct FloorSpec {
    int rows = 2;
    int cols = 3;
    double room_min = 4.0;  // per-column width / per-row height range, meters
    double room_max = 6.0;
    double corridor_width = 0.0;  // 0 disables the central corridor
    double door_min = 1.2;
    double door_max = 1.6;
    int obstacle_count = 0;
    double obstacle_min = 0.4;
    double obstacle_max = 1.2;
    double extra_door_prob = 0.0;  // doorways beyond the spanning set
    double wall_thickness = 0.1;
    double room_height = 2.5;
    double resolution = 0.05;
    double robot_radius = 0.3;
    std::uint64_t seed = 0;
};

FloorSpec floorspec_from_json(const std::string& text);
std::string floorspec_to_json(const FloorSpec& spec);

// Deterministic per seed; the scene graph and raster agree on connectivity.
std::pair<SceneGraph, OccupancyGrid> generate(const FloorSpec& spec);

struct ConnectivityReport {
    // Room pairs where semantic-graph reachability and free-cell flood fill
    // disagree; empty means the scene graph matches the raster.
    std::vector<std::pair<std::string, std::string>> disagreements;
    bool clean() const { return disagreements.empty(); }
};

ConnectivityReport connectivity_check(const SceneGraph& sg, const OccupancyGrid& grid);

// Writes scene_graph.json + grid.pgm + grid.meta.json into dir.
void write_env(const std::string& dir, const SceneGraph& sg, const OccupancyGrid& grid);
std::pair<SceneGraph, OccupancyGrid> load_env(const std::string& dir);

}  // namespace spath
