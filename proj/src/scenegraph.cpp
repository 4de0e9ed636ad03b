#include "spath/scenegraph.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace spath {

const Room& SceneGraph::room(const std::string& id) const {
    auto it = rooms.find(id);
    if (it == rooms.end()) throw Error("unknown room " + id);
    return it->second;
}

const Doorway& SceneGraph::doorway(const std::string& id) const {
    auto it = doorways.find(id);
    if (it == doorways.end()) throw Error("unknown doorway " + id);
    return it->second;
}

ConvexPolygon room_contour(const Room& room) {
    std::vector<Line2D> halves;
    halves.reserve(room.walls.size());
    for (const WallPlane& w : room.walls) halves.push_back(project_wall(w));
    return half_plane_intersection(halves, room.height, "room " + room.id);
}

ConvexPolygon doorway_contour(const Doorway& d, const ConvexPolygon& room_a,
                              const ConvexPolygon& room_b, double min_depth) {
    return doorway_contour(d.centroid.xy(), d.width, room_a, room_b, min_depth,
                           "doorway " + d.id);
}

void validate(const SceneGraph& sg) {
    std::map<std::string, ConvexPolygon> contours;
    for (const auto& [id, room] : sg.rooms) {
        if (room.id != id) throw Error("room key/id mismatch for " + id);
        if (room.walls.size() < 3) throw Error("room " + id + ": fewer than 3 walls");
        for (const WallPlane& w : room.walls) {
            if (std::abs(w.normal.norm() - 1.0) > 1e-9)
                throw Error("room " + id + ": wall normal not unit length");
            if (std::abs(w.normal.z) > 1e-9)
                throw Error("room " + id + ": wall normal not vertical");
        }
        const ConvexPolygon poly = room_contour(room);  // throws if empty/unbounded
        if (!poly.contains(room.centroid.xy(), 1e-6))
            throw Error("room " + id + ": centroid outside wall intersection");
        contours.emplace(id, poly);
    }
    for (const auto& [id, d] : sg.doorways) {
        if (d.id != id) throw Error("doorway key/id mismatch for " + id);
        if (d.width <= 0.0) throw Error("doorway " + id + ": non-positive width");
        for (const std::string& rid : {d.connects.first, d.connects.second})
            if (!sg.rooms.count(rid))
                throw Error("doorway " + id + " references unknown room " + rid);
        for (const std::string& rid : {d.connects.first, d.connects.second})
            if (contours.at(rid).boundary_distance(d.centroid.xy()) > kDoorwayEps)
                throw Error("doorway " + id + " too far from room " + rid + " boundary");
    }
}

SceneGraph load_scene_graph(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("scene graph parse error: ") + e.what());
    }
    if (doc.value("schema", "") != "spath-sg/1")
        throw Error("scene graph: unknown schema " + doc.value("schema", "(none)"));

    const auto vec3 = [](const nlohmann::json& a) {
        return Vec3{a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
    };

    SceneGraph sg;
    try {
        for (const auto& r : doc.at("rooms")) {
            Room room;
            room.id = r.at("id").get<std::string>();
            room.centroid = vec3(r.at("centroid"));
            room.height = r.at("height").get<double>();
            for (const auto& w : r.at("walls"))
                room.walls.push_back({vec3(w.at("normal")), w.at("offset").get<double>()});
            if (sg.rooms.count(room.id)) throw Error("duplicate room id " + room.id);
            sg.rooms.emplace(room.id, std::move(room));
        }
        for (const auto& d : doc.at("doorways")) {
            Doorway dw;
            dw.id = d.at("id").get<std::string>();
            dw.centroid = vec3(d.at("centroid"));
            dw.width = d.at("width").get<double>();
            dw.traversable = d.at("traversable").get<bool>();
            dw.connects = {d.at("connects").at(0).get<std::string>(),
                           d.at("connects").at(1).get<std::string>()};
            if (sg.doorways.count(dw.id)) throw Error("duplicate doorway id " + dw.id);
            sg.doorways.emplace(dw.id, std::move(dw));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("scene graph parse error: ") + e.what());
    }
    validate(sg);
    return sg;
}

std::string save_scene_graph(const SceneGraph& sg) {
    nlohmann::json doc;
    doc["schema"] = "spath-sg/1";
    doc["rooms"] = nlohmann::json::array();
    for (const auto& [id, room] : sg.rooms) {
        nlohmann::json r;
        r["id"] = id;
        r["centroid"] = {room.centroid.x, room.centroid.y, room.centroid.z};
        r["height"] = room.height;
        r["walls"] = nlohmann::json::array();
        for (const WallPlane& w : room.walls)
            r["walls"].push_back(
                {{"normal", {w.normal.x, w.normal.y, w.normal.z}}, {"offset", w.offset}});
        doc["rooms"].push_back(std::move(r));
    }
    doc["doorways"] = nlohmann::json::array();
    for (const auto& [id, d] : sg.doorways) {
        nlohmann::json j;
        j["id"] = id;
        j["centroid"] = {d.centroid.x, d.centroid.y, d.centroid.z};
        j["width"] = d.width;
        j["traversable"] = d.traversable;
        j["connects"] = {d.connects.first, d.connects.second};
        doc["doorways"].push_back(std::move(j));
    }
    return doc.dump(2);
}

std::vector<std::pair<std::string, double>> SemanticGraph::neighbors(const std::string& id) const {
    std::vector<std::pair<std::string, double>> out;
    for (const Edge& e : edges) {
        if (!std::isfinite(e.weight)) continue;
        if (e.a == id) out.emplace_back(e.b, e.weight);
        else if (e.b == id) out.emplace_back(e.a, e.weight);
    }
    return out;
}

double SemanticGraph::weight(const std::string& a, const std::string& b) const {
    for (const Edge& e : edges)
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.weight;
    return std::numeric_limits<double>::infinity();
}

SemanticGraph build_semantic_graph(const SceneGraph& sg) {
    SemanticGraph g;
    for (const auto& [id, room] : sg.rooms)
        g.nodes.emplace(id, SemanticGraph::Node{SemanticGraph::Kind::Room, room.centroid});
    for (const auto& [id, d] : sg.doorways)
        g.nodes.emplace(id, SemanticGraph::Node{SemanticGraph::Kind::Doorway, d.centroid});
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (const auto& [id, d] : sg.doorways) {
        const Room& a = sg.room(d.connects.first);
        const Room& b = sg.room(d.connects.second);
        g.edges.push_back({a.id, id, d.traversable ? distance(a.centroid, d.centroid) : inf});
        g.edges.push_back({id, b.id, d.traversable ? distance(d.centroid, b.centroid) : inf});
    }
    return g;
}

SceneGraph set_doorway_state(const SceneGraph& sg, const std::string& id, bool traversable) {
    SceneGraph out = sg;
    auto it = out.doorways.find(id);
    if (it == out.doorways.end()) throw Error("unknown doorway " + id);
    it->second.traversable = traversable;
    return out;
}

}  // namespace spath
