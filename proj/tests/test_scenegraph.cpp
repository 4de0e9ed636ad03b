#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "spath/scenegraph.hpp"

#include "helpers.hpp"

using namespace spath;
using spath_test::rect_room;
using spath_test::two_room_scene;

namespace {

const char* kTwoRoomJson = R"({
  "schema": "spath-sg/1",
  "rooms": [
    {"id": "room_a", "centroid": [0.5, 0.5, 0.0], "height": 2.5, "walls": [
      {"normal": [1, 0, 0], "offset": 0.0},
      {"normal": [-1, 0, 0], "offset": 1.0},
      {"normal": [0, 1, 0], "offset": 0.0},
      {"normal": [0, -1, 0], "offset": 1.0}]},
    {"id": "room_b", "centroid": [1.7, 0.5, 0.0], "height": 2.5, "walls": [
      {"normal": [1, 0, 0], "offset": -1.2},
      {"normal": [-1, 0, 0], "offset": 2.2},
      {"normal": [0, 1, 0], "offset": 0.0},
      {"normal": [0, -1, 0], "offset": 1.0}]}
  ],
  "doorways": [
    {"id": "door_ab", "centroid": [1.1, 0.5, 0.0], "width": 0.6,
     "traversable": true, "connects": ["room_a", "room_b"]}
  ]
})";

// 2 x 11 grid of rooms: 22 rooms, 88 walls; 21 spanning doorways plus 2 extra
// vertical ones gives 23.
SceneGraph rf1_scale_graph() {
    spath_test::FloorBuilder fb(2, 11, 4.0, 4.0);
    for (int c = 0; c + 1 < 11; ++c) {
        fb.door_h(0, c);
        fb.door_h(1, c);
    }
    fb.door_v(0, 0);
    fb.door_v(0, 5);
    fb.door_v(0, 10);
    return fb.build().first;
}

}  // namespace

TEST_CASE("load_scene_graph parses and validates the fixture") {
    const SceneGraph sg = load_scene_graph(kTwoRoomJson);
    CHECK(sg.rooms.size() == 2);
    CHECK(sg.doorways.size() == 1);
    std::size_t walls = 0;
    for (const auto& [id, room] : sg.rooms) walls += room.walls.size();
    CHECK(walls == 8);
    CHECK(sg.doorway("door_ab").width == doctest::Approx(0.6));
}

TEST_CASE("load rejects a doorway referencing an unknown room") {
    std::string bad = kTwoRoomJson;
    const auto pos = bad.find("room_b\"]");
    bad.replace(pos, 6, "room_x");
    try {
        load_scene_graph(bad);
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("door_ab") != std::string::npos);
        CHECK(std::string(e.what()).find("room_x") != std::string::npos);
    }
}

TEST_CASE("RF1-scale document loads with matching counts") {
    const SceneGraph sg = rf1_scale_graph();
    CHECK(sg.rooms.size() == 22);
    CHECK(sg.doorways.size() == 23);
    std::size_t walls = 0;
    for (const auto& [id, room] : sg.rooms) walls += room.walls.size();
    CHECK(walls == 88);

    const SceneGraph back = load_scene_graph(save_scene_graph(sg));
    CHECK(back.rooms.size() == 22);
    CHECK(back.doorways.size() == 23);
}

TEST_CASE("serialization round trip is exact") {
    const SceneGraph sg = two_room_scene();
    const SceneGraph back = load_scene_graph(save_scene_graph(sg));
    CHECK(back == sg);
}

TEST_CASE("build_semantic_graph weights") {
    // Room centroid at the origin, doorway centroid at (3,4,0): weight 5.
    SceneGraph sg;
    Room a = rect_room("a", {-4.0, -4.0}, {4.0, 4.2});
    a.centroid = {0.0, 0.0, 0.0};
    Room b = rect_room("b", {-4.0, 4.4}, {4.0, 8.0});
    sg.rooms.emplace("a", a);
    sg.rooms.emplace("b", b);
    Doorway d;
    d.id = "d";
    d.centroid = {3.0, 4.0, 0.0};
    d.width = 1.0;
    d.traversable = true;
    d.connects = {"a", "b"};
    sg.doorways.emplace("d", d);

    SemanticGraph g = build_semantic_graph(sg);
    CHECK(g.nodes.size() == 3);
    CHECK(g.weight("a", "d") == doctest::Approx(5.0));
    CHECK(g.weight("d", "a") == doctest::Approx(5.0));  // symmetric

    sg.doorways.at("d").traversable = false;
    g = build_semantic_graph(sg);
    CHECK(std::isinf(g.weight("a", "d")));
    CHECK(g.neighbors("a").empty());  // blocked edges are not traversable
}

TEST_CASE("three-room chain yields 5 nodes and 4 finite edges") {
    const auto [sg, grid] = spath_test::chain_floor(3);
    (void)grid;
    const SemanticGraph g = build_semantic_graph(sg);
    CHECK(g.nodes.size() == 5);
    std::size_t finite = 0;
    for (const auto& e : g.edges)
        if (std::isfinite(e.weight)) ++finite;
    CHECK(finite == 4);

    // Every finite weight is the Euclidean centroid distance of its endpoints.
    for (const auto& e : g.edges) {
        const Vec3 pa = g.nodes.at(e.a).position;
        const Vec3 pb = g.nodes.at(e.b).position;
        if (std::isfinite(e.weight)) CHECK(e.weight == doctest::Approx(distance(pa, pb)).epsilon(1e-12));
    }
}

TEST_CASE("set_doorway_state") {
    const SceneGraph sg = two_room_scene();
    const SceneGraph closed = set_doorway_state(sg, "door_ab", false);
    const SemanticGraph g_closed = build_semantic_graph(closed);
    for (const auto& e : g_closed.edges) CHECK(std::isinf(e.weight));

    const SceneGraph reopened = set_doorway_state(closed, "door_ab", true);
    const SemanticGraph g_open = build_semantic_graph(reopened);
    for (const auto& e : g_open.edges) CHECK(std::isfinite(e.weight));
    CHECK(reopened == sg);

    // Idempotent.
    const SceneGraph twice = set_doorway_state(closed, "door_ab", false);
    CHECK(twice == closed);

    CHECK_THROWS_AS(set_doorway_state(sg, "nope", false), Error);
}

TEST_CASE("validation rejects broken invariants") {
    SceneGraph sg = two_room_scene();
    sg.rooms.at("room_a").walls[0].normal = {0.5, 0.0, 0.0};  // not unit
    CHECK_THROWS_AS(validate(sg), Error);

    sg = two_room_scene();
    sg.rooms.at("room_a").centroid = {5.0, 5.0, 0.0};  // outside its own walls
    CHECK_THROWS_AS(validate(sg), Error);

    sg = two_room_scene();
    sg.doorways.at("door_ab").centroid = {10.0, 10.0, 0.0};  // far from both rooms
    CHECK_THROWS_AS(validate(sg), Error);

    sg = two_room_scene();
    sg.doorways.at("door_ab").width = -1.0;
    CHECK_THROWS_AS(validate(sg), Error);
}
