#pragma once
// Shared test fixtures: hand-built floors with exact room/doorway placement
// (deterministic, no RNG) plus the two-room scene from the doorway-fitting
// geometry, in JSON and struct form.

#include <string>
#include <vector>

#include "spath/envgen.hpp"
#include "spath/gridmap.hpp"
#include "spath/scenegraph.hpp"

namespace spath_test {

using namespace spath;

inline Room rect_room(const std::string& id, Vec2 lo, Vec2 hi, double height = 2.5) {
    Room r;
    r.id = id;
    r.centroid = {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y), 0.0};
    r.height = height;
    r.walls = {
        WallPlane{{1.0, 0.0, 0.0}, -lo.x},
        WallPlane{{-1.0, 0.0, 0.0}, hi.x},
        WallPlane{{0.0, 1.0, 0.0}, -lo.y},
        WallPlane{{0.0, -1.0, 0.0}, hi.y},
    };
    return r;
}

// Two unit rooms with a 0.2 m wall gap and a 0.6 m doorway at (1.1, 0.5).
inline SceneGraph two_room_scene() {
    SceneGraph sg;
    Room a = rect_room("room_a", {0.0, 0.0}, {1.0, 1.0});
    Room b = rect_room("room_b", {1.2, 0.0}, {2.2, 1.0});
    sg.rooms.emplace(a.id, a);
    sg.rooms.emplace(b.id, b);
    Doorway d;
    d.id = "door_ab";
    d.centroid = {1.1, 0.5, 0.0};
    d.width = 0.6;
    d.traversable = true;
    d.connects = {"room_a", "room_b"};
    sg.doorways.emplace(d.id, d);
    return sg;
}

// Grid of uniform rooms with explicitly placed doorways. Deterministic; used
// where tests need exact topology (chains, rings, tie-break scenarios).
class FloorBuilder {
  public:
    FloorBuilder(int rows, int cols, double room_w = 4.0, double room_h = 4.0)
        : rows_(rows), cols_(cols), room_w_(room_w), room_h_(room_h) {}

    double wall = 0.1;
    double resolution = 0.05;
    double height = 2.5;

    Vec2 room_lo(int r, int c) const {
        return {c * (room_w_ + wall), r * (room_h_ + wall)};
    }
    Vec2 room_hi(int r, int c) const {
        const Vec2 lo = room_lo(r, c);
        return {lo.x + room_w_, lo.y + room_h_};
    }
    std::string room_id(int r, int c) const {
        return "r" + std::to_string(r) + "c" + std::to_string(c);
    }
    Vec2 room_center(int r, int c) const {
        const Vec2 lo = room_lo(r, c);
        return {lo.x + 0.5 * room_w_, lo.y + 0.5 * room_h_};
    }

    // Doorway between horizontally adjacent rooms (r,c)-(r,c+1); `along` is the
    // fraction of the shared wall where the gap centers.
    FloorBuilder& door_h(int r, int c, double width = 1.2, double along = 0.5) {
        const Vec2 lo = room_lo(r, c);
        const double x = lo.x + room_w_ + 0.5 * wall;
        const double y = lo.y + along * room_h_;
        doors_.push_back({room_id(r, c), room_id(r, c + 1), {x, y}, width, true});
        return *this;
    }
    // Doorway between vertically adjacent rooms (r,c)-(r+1,c).
    FloorBuilder& door_v(int r, int c, double width = 1.2, double along = 0.5) {
        const Vec2 lo = room_lo(r, c);
        const double x = lo.x + along * room_w_;
        const double y = lo.y + room_h_ + 0.5 * wall;
        doors_.push_back({room_id(r, c), room_id(r + 1, c), {x, y}, width, false});
        return *this;
    }
    FloorBuilder& obstacle(Rect r) {
        obstacles_.push_back(r);
        return *this;
    }

    std::pair<SceneGraph, OccupancyGrid> build() const {
        SceneGraph sg;
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) {
                Room room = rect_room(room_id(r, c), room_lo(r, c), room_hi(r, c), height);
                sg.rooms.emplace(room.id, room);
            }
        std::vector<Rect> gaps;
        for (std::size_t i = 0; i < doors_.size(); ++i) {
            const DoorSpec& ds = doors_[i];
            Doorway d;
            d.id = "d" + std::to_string(i);
            d.centroid = {ds.center.x, ds.center.y, 0.0};
            d.width = ds.width;
            d.traversable = true;
            d.connects = {ds.a, ds.b};
            sg.doorways.emplace(d.id, d);
            if (ds.horizontal)
                gaps.push_back({{ds.center.x - 0.5 * wall, ds.center.y - 0.5 * ds.width},
                                {ds.center.x + 0.5 * wall, ds.center.y + 0.5 * ds.width}});
            else
                gaps.push_back({{ds.center.x - 0.5 * ds.width, ds.center.y - 0.5 * wall},
                                {ds.center.x + 0.5 * ds.width, ds.center.y + 0.5 * wall}});
        }
        validate(sg);

        OccupancyGrid grid;
        grid.origin = {-wall, -wall};
        grid.resolution = resolution;
        const double total_w = cols_ * (room_w_ + wall) - wall;
        const double total_h = rows_ * (room_h_ + wall) - wall;
        grid.width = static_cast<int>(std::ceil((total_w + 2 * wall) / resolution - 1e-9));
        grid.height = static_cast<int>(std::ceil((total_h + 2 * wall) / resolution - 1e-9));
        grid.occupied.assign(static_cast<std::size_t>(grid.width) * grid.height, 1);
        for (int j = 0; j < grid.height; ++j)
            for (int i = 0; i < grid.width; ++i) {
                const Vec2 p = grid.cell_center(i, j);
                bool free = false;
                for (int r = 0; r < rows_ && !free; ++r)
                    for (int c = 0; c < cols_ && !free; ++c)
                        free = Rect{room_lo(r, c), room_hi(r, c)}.contains(p);
                if (!free)
                    for (const Rect& g : gaps)
                        if (g.contains(p)) {
                            free = true;
                            break;
                        }
                if (free)
                    for (const Rect& ob : obstacles_)
                        if (ob.contains(p)) {
                            free = false;
                            break;
                        }
                grid.occupied[grid.index(i, j)] = free ? 0 : 1;
            }
        return {sg, grid};
    }

  private:
    struct DoorSpec {
        std::string a;
        std::string b;
        Vec2 center;
        double width;
        bool horizontal;  // gap in a vertical wall between horizontal neighbors
    };
    int rows_;
    int cols_;
    double room_w_;
    double room_h_;
    std::vector<DoorSpec> doors_;
    std::vector<Rect> obstacles_;
};

// Row of n rooms connected in a chain.
inline std::pair<SceneGraph, OccupancyGrid> chain_floor(int n, double room_w = 4.0,
                                                        double room_h = 4.0) {
    FloorBuilder fb(1, n, room_w, room_h);
    for (int c = 0; c + 1 < n; ++c) fb.door_h(0, c);
    return fb.build();
}

}  // namespace spath_test
