#pragma once
// Indoor 3D scene graph model (rooms bounded by vertical wall planes,
// doorways with a traversable state), its JSON serialization, and the derived
// weighted semantic graph used for high-level search. Scene graphs and
// semantic graphs are immutable values; updates return new graphs.

#include <map>
#include <string>
#include <vector>

#include "spath/geom.hpp"

namespace spath {

struct Room {
    std::string id;
    Vec3 centroid;
    double height = 0.0;
    std::vector<WallPlane> walls;

    bool operator==(const Room&) const = default;
};

struct Doorway {
    std::string id;
    Vec3 centroid;
    double width = 0.0;
    bool traversable = true;
    std::pair<std::string, std::string> connects;

    bool operator==(const Doorway&) const = default;
};

struct SceneGraph {
    std::map<std::string, Room> rooms;
    std::map<std::string, Doorway> doorways;

    bool operator==(const SceneGraph&) const = default;

    const Room& room(const std::string& id) const;
    const Doorway& doorway(const std::string& id) const;
};

// Maximum distance between a doorway centroid and each connected room's
// contour boundary accepted by validation.
constexpr double kDoorwayEps = 0.5;

SceneGraph load_scene_graph(const std::string& text);
std::string save_scene_graph(const SceneGraph& sg);

// Structural validation of every type invariant; throws naming the offending
// entity. load_scene_graph runs this after parsing.
void validate(const SceneGraph& sg);

// Convex polygon of the room's wall half-plane intersection, vertices CCW.
ConvexPolygon room_contour(const Room& room);

// Doorway quad fitted between the two connected rooms' contours.
ConvexPolygon doorway_contour(const Doorway& d, const ConvexPolygon& room_a,
                              const ConvexPolygon& room_b, double min_depth);

struct SemanticGraph {
    enum class Kind { Room, Doorway };
    struct Node {
        Kind kind;
        Vec3 position;
    };
    struct Edge {
        std::string a;
        std::string b;
        double weight;  // meters, +inf when untraversable
    };

    std::map<std::string, Node> nodes;
    std::vector<Edge> edges;

    // Finite-weight neighbors only; blocked edges are never traversed.
    std::vector<std::pair<std::string, double>> neighbors(const std::string& id) const;
    double weight(const std::string& a, const std::string& b) const;
};

// One node per room and doorway; a traversable doorway D connecting rooms
// A and B yields edges (A,D) and (D,B) weighted by the 3D Euclidean centroid
// distance. Untraversable doorways yield +inf edges.
SemanticGraph build_semantic_graph(const SceneGraph& sg);

// Returns a copy with the doorway's traversable flag set.
SceneGraph set_doorway_state(const SceneGraph& sg, const std::string& id, bool traversable);

}  // namespace spath
