#include "spath/semantic_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace spath {

std::vector<std::string> SemanticPath::room_ids() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < nodes.size(); i += 2) out.push_back(nodes[i]);
    return out;
}

std::vector<std::string> SemanticPath::doorway_ids() const {
    std::vector<std::string> out;
    for (std::size_t i = 1; i < nodes.size(); i += 2) out.push_back(nodes[i]);
    return out;
}

std::string locate(Vec2 p, const SceneGraph& sg, const ContourMap& room_contours,
                   const ContourMap& doorway_contours) {
    for (const auto& [id, poly] : room_contours)
        if (poly.contains(p)) return id;
    for (const auto& [id, poly] : doorway_contours) {
        if (!poly.contains(p)) continue;
        const Doorway& d = sg.doorway(id);
        const Room& a = sg.room(d.connects.first);
        const Room& b = sg.room(d.connects.second);
        return distance(a.centroid.xy(), p) <= distance(b.centroid.xy(), p) ? a.id : b.id;
    }
    throw Error("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                ") lies in no room or doorway contour");
}

namespace {

struct Label {
    double g = std::numeric_limits<double>::infinity();
    int hops = 0;
    std::vector<std::string> path;
};

// weight, then hop count, then lexicographic node sequence.
bool better(double g1, int hops1, const std::vector<std::string>& p1, const Label& l2) {
    if (g1 < l2.g - 1e-9) return true;
    if (g1 > l2.g + 1e-9) return false;
    if (hops1 != l2.hops) return hops1 < l2.hops;
    return p1 < l2.path;
}

}  // namespace

SemanticPath astar(const SemanticGraph& g, const std::string& start, const std::string& goal,
                   double heuristic_scale) {
    if (!g.nodes.count(start)) throw Error("astar: unknown node " + start);
    if (!g.nodes.count(goal)) throw Error("astar: unknown node " + goal);
    const Vec3 goal_pos = g.nodes.at(goal).position;
    const auto h = [&](const std::string& id) {
        return heuristic_scale * distance(g.nodes.at(id).position, goal_pos);
    };

    std::map<std::string, Label> labels;
    labels[start] = Label{0.0, 0, {start}};

    using Entry = std::pair<double, std::string>;  // (f, node)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    open.emplace(h(start), start);

    while (!open.empty()) {
        const auto [f, id] = open.top();
        open.pop();
        const Label cur = labels[id];  // copy: relaxations may rehash
        if (f > cur.g + h(id) + 1e-9) continue;  // stale entry
        for (const auto& [next, w] : g.neighbors(id)) {
            const double g2 = cur.g + w;
            auto path2 = cur.path;
            path2.push_back(next);
            Label& slot = labels.try_emplace(next).first->second;
            if (better(g2, cur.hops + 1, path2, slot)) {
                slot = Label{g2, cur.hops + 1, std::move(path2)};
                open.emplace(g2 + h(next), next);
            }
        }
    }

    const auto it = labels.find(goal);
    if (it == labels.end() || !std::isfinite(it->second.g))
        throw Error("no traversable semantic route from " + start + " to " + goal);
    return SemanticPath{it->second.path, it->second.g};
}

CoarsePath coarse_path(const SemanticPath& sp, Vec2 p_start, Vec2 p_goal, const SceneGraph& sg,
                       const ContourMap& room_contours, const ContourMap& doorway_contours,
                       const OccupancyGrid& grid) {
    if (sp.nodes.empty()) throw Error("coarse_path: empty semantic path");
    const auto rooms = sp.room_ids();
    const auto doors = sp.doorway_ids();

    CoarsePath cp;
    cp.waypoints.push_back(p_start);
    for (const auto& d : doors) cp.waypoints.push_back(sg.doorway(d).centroid.xy());
    cp.waypoints.push_back(p_goal);

    const auto room_poly = [&](const std::string& id) -> const ConvexPolygon& {
        auto it = room_contours.find(id);
        if (it == room_contours.end()) throw Error("coarse_path: missing contour for " + id);
        return it->second;
    };
    const auto door_poly = [&](const std::string& id) -> const ConvexPolygon& {
        return doorway_contours.at(id);
    };

    if (doors.empty()) {
        cp.legs.push_back(compose({room_poly(rooms.front())}, {rooms.front()}, grid));
    } else {
        const std::size_t n_legs = doors.size() + 1;
        for (std::size_t i = 0; i < n_legs; ++i) {
            std::vector<ConvexPolygon> polys;
            std::vector<std::string> ids;
            if (i > 0) {
                polys.push_back(door_poly(doors[i - 1]));
                ids.push_back(doors[i - 1]);
            }
            polys.push_back(room_poly(rooms[i]));
            ids.push_back(rooms[i]);
            if (i < doors.size()) {
                polys.push_back(door_poly(doors[i]));
                ids.push_back(doors[i]);
            }
            cp.legs.push_back(compose(std::move(polys), std::move(ids), grid));
        }
    }

    // Endpoints may lie inside a doorway quad instead of the terminal room
    // (replanning restarts from doorway centroids). The containing doorway
    // contour then joins the terminal leg so the point stays in its mask.
    const auto cover_endpoint = [&](std::size_t leg_idx, Vec2 p) {
        if (cp.legs[leg_idx].contains(p)) return;
        for (const auto& [id, poly] : doorway_contours) {
            if (!poly.contains(p)) continue;
            std::vector<ConvexPolygon> polys = cp.legs[leg_idx].members;
            std::vector<std::string> ids = cp.legs[leg_idx].member_ids;
            polys.push_back(poly);
            ids.push_back(id);
            cp.legs[leg_idx] = compose(std::move(polys), std::move(ids), grid);
            return;
        }
    };
    cover_endpoint(0, p_start);
    cover_endpoint(cp.legs.size() - 1, p_goal);

    std::vector<ConvexPolygon> all;
    std::vector<std::string> all_ids;
    for (const auto& leg : cp.legs)
        for (std::size_t k = 0; k < leg.members.size(); ++k) {
            if (std::find(all_ids.begin(), all_ids.end(), leg.member_ids[k]) != all_ids.end())
                continue;
            all.push_back(leg.members[k]);
            all_ids.push_back(leg.member_ids[k]);
        }
    cp.region = compose(std::move(all), std::move(all_ids), grid);
    return cp;
}

std::vector<std::string> render_instructions(const SemanticPath& sp) {
    const auto rooms = sp.room_ids();
    const auto doors = sp.doorway_ids();
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < doors.size(); ++i)
        lines.push_back("go from " + rooms[i] + " through " + doors[i] + " to " + rooms[i + 1]);
    if (doors.empty() && !rooms.empty()) lines.push_back("stay in " + rooms.front());
    return lines;
}

}  // namespace spath
