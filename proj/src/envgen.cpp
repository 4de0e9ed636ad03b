#include "spath/envgen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>
#include <set>

#include <json.hpp>

#include "spath/rng.hpp"

namespace spath {

FloorSpec floorspec_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("schema", "") != "spath-floorspec/1")
        throw Error("floor spec: unknown schema " + j.value("schema", "(none)"));
    FloorSpec s;
    s.rows = j.value("rows", s.rows);
    s.cols = j.value("cols", s.cols);
    if (j.contains("room_size")) {
        s.room_min = j["room_size"][0].get<double>();
        s.room_max = j["room_size"][1].get<double>();
    }
    s.corridor_width = j.value("corridor_width", s.corridor_width);
    if (j.contains("doorway_width")) {
        s.door_min = j["doorway_width"][0].get<double>();
        s.door_max = j["doorway_width"][1].get<double>();
    }
    if (j.contains("obstacles")) {
        s.obstacle_count = j["obstacles"].value("count", 0);
        if (j["obstacles"].contains("size")) {
            s.obstacle_min = j["obstacles"]["size"][0].get<double>();
            s.obstacle_max = j["obstacles"]["size"][1].get<double>();
        }
    }
    s.extra_door_prob = j.value("extra_doorway_prob", s.extra_door_prob);
    s.wall_thickness = j.value("wall_thickness", s.wall_thickness);
    s.room_height = j.value("room_height", s.room_height);
    s.resolution = j.value("resolution", s.resolution);
    s.robot_radius = j.value("robot_radius", s.robot_radius);
    s.seed = j.value("seed", s.seed);
    return s;
}

std::string floorspec_to_json(const FloorSpec& s) {
    nlohmann::json j;
    j["schema"] = "spath-floorspec/1";
    j["rows"] = s.rows;
    j["cols"] = s.cols;
    j["room_size"] = {s.room_min, s.room_max};
    j["corridor_width"] = s.corridor_width;
    j["doorway_width"] = {s.door_min, s.door_max};
    j["obstacles"] = {{"count", s.obstacle_count}, {"size", {s.obstacle_min, s.obstacle_max}}};
    j["extra_doorway_prob"] = s.extra_door_prob;
    j["wall_thickness"] = s.wall_thickness;
    j["room_height"] = s.room_height;
    j["resolution"] = s.resolution;
    j["robot_radius"] = s.robot_radius;
    j["seed"] = s.seed;
    return j.dump(2);
}

namespace {

struct RoomRect {
    std::string id;
    Rect rect;  // interior extent
};

Room make_room(const RoomRect& rr, double height) {
    Room room;
    room.id = rr.id;
    room.centroid = {0.5 * (rr.rect.lo.x + rr.rect.hi.x), 0.5 * (rr.rect.lo.y + rr.rect.hi.y), 0.0};
    room.height = height;
    room.walls = {
        WallPlane{{1.0, 0.0, 0.0}, -rr.rect.lo.x},
        WallPlane{{-1.0, 0.0, 0.0}, rr.rect.hi.x},
        WallPlane{{0.0, 1.0, 0.0}, -rr.rect.lo.y},
        WallPlane{{0.0, -1.0, 0.0}, rr.rect.hi.y},
    };
    return room;
}

struct Candidate {
    int a;
    int b;
    bool vertical_wall;  // wall between horizontal neighbors
    double wall_lo;      // wall strip extent along its thin axis
    double wall_hi;
    double span_lo;      // shared overlap along the wall direction
    double span_hi;
};

}  // namespace

std::pair<SceneGraph, OccupancyGrid> generate(const FloorSpec& spec) {
    if (spec.rows < 1 || spec.cols < 1) throw Error("floor spec: rows/cols must be >= 1");
    if (spec.room_min < 2.0 * spec.door_max)
        throw Error("floor spec: rooms too small for the doorway width range");
    if (spec.door_min < 4.0 * spec.robot_radius)
        throw Error("floor spec: doorway width below twice the robot diameter");
    // With a single row the corridor runs along the south side; with more
    // rows it slots between the two middle ones.

    Rng rng(spec.seed);
    const double t = spec.wall_thickness;

    std::vector<double> col_w(spec.cols), row_h(spec.rows);
    for (auto& w : col_w) w = rng.uniform(spec.room_min, spec.room_max);
    for (auto& h : row_h) h = rng.uniform(spec.room_min, spec.room_max);

    std::vector<double> col_x(spec.cols + 1), row_y(spec.rows + 1);
    col_x[0] = 0.0;
    for (int c = 0; c < spec.cols; ++c) col_x[c + 1] = col_x[c] + col_w[c] + t;
    const bool has_corridor = spec.corridor_width > 0.0;
    const int corridor_below = spec.rows == 1 ? 0 : spec.rows / 2;
    double corridor_y0 = 0.0, corridor_y1 = 0.0;
    row_y[0] = 0.0;
    if (has_corridor && corridor_below == 0) {  // corridor south of the only row
        corridor_y1 = spec.corridor_width;
        row_y[0] = corridor_y1 + t;
    }
    for (int r = 0; r < spec.rows; ++r) {
        double y = row_y[r] + row_h[r] + t;
        if (has_corridor && r + 1 == corridor_below) {
            corridor_y0 = y;
            corridor_y1 = y + spec.corridor_width;
            y = corridor_y1 + t;
        }
        row_y[r + 1] = y;
    }
    const double total_w = col_x[spec.cols] - t;
    const double total_h = row_y[spec.rows] - t;

    std::vector<RoomRect> rooms;
    for (int r = 0; r < spec.rows; ++r)
        for (int c = 0; c < spec.cols; ++c)
            rooms.push_back({"r" + std::to_string(r) + "c" + std::to_string(c),
                             Rect{{col_x[c], row_y[r]}, {col_x[c] + col_w[c], row_y[r] + row_h[r]}}});
    if (has_corridor)
        rooms.push_back({"corridor", Rect{{0.0, corridor_y0}, {total_w, corridor_y1}}});

    const auto room_at = [&](int r, int c) { return r * spec.cols + c; };

    // Candidate doorway walls.
    std::vector<Candidate> cands;
    for (int r = 0; r < spec.rows; ++r)
        for (int c = 0; c + 1 < spec.cols; ++c) {
            const Rect& a = rooms[room_at(r, c)].rect;
            cands.push_back({room_at(r, c), room_at(r, c + 1), true, a.hi.x, a.hi.x + t,
                             row_y[r], row_y[r] + row_h[r]});
        }
    for (int r = 0; r + 1 < spec.rows; ++r)
        for (int c = 0; c < spec.cols; ++c) {
            const Rect& a = rooms[room_at(r, c)].rect;
            if (has_corridor && r + 1 == corridor_below) continue;  // corridor intervenes
            cands.push_back({room_at(r, c), room_at(r + 1, c), false, a.hi.y, row_y[r + 1],
                             col_x[c], col_x[c] + col_w[c]});
        }
    if (has_corridor) {
        const int corridor_idx = static_cast<int>(rooms.size()) - 1;
        for (int c = 0; c < spec.cols; ++c) {
            if (corridor_below > 0) {
                const Rect& below = rooms[room_at(corridor_below - 1, c)].rect;
                cands.push_back({room_at(corridor_below - 1, c), corridor_idx, false, below.hi.y,
                                 corridor_y0, col_x[c], col_x[c] + col_w[c]});
            }
            if (corridor_below < spec.rows)
                cands.push_back({room_at(corridor_below, c), corridor_idx, false, corridor_y1,
                                 row_y[corridor_below], col_x[c], col_x[c] + col_w[c]});
        }
    }

    // Randomized spanning set (shuffled Kruskal), then extras by probability.
    std::vector<int> order(cands.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);
    std::vector<int> comp(rooms.size());
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = static_cast<int>(i);
    const auto find = [&](int x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    std::vector<int> chosen;
    for (int idx : order) {
        const int ra = find(cands[idx].a), rb = find(cands[idx].b);
        if (ra != rb) {
            comp[ra] = rb;
            chosen.push_back(idx);
        }
    }
    for (std::size_t i = 0; i < cands.size(); ++i)
        if (std::find(chosen.begin(), chosen.end(), static_cast<int>(i)) == chosen.end() &&
            rng.chance(spec.extra_door_prob))
            chosen.push_back(static_cast<int>(i));
    std::sort(chosen.begin(), chosen.end());

    // Place the doorway gaps.
    struct Gap {
        Rect rect;
        Vec2 centroid;
        double width;
        int a;
        int b;
    };
    std::vector<Gap> gaps;
    const double end_margin = std::max(0.3, spec.robot_radius);
    for (int idx : chosen) {
        const Candidate& cd = cands[idx];
        const double span = cd.span_hi - cd.span_lo - 2.0 * end_margin;
        if (span < spec.door_min)
            throw Error("floor spec: wall segment too short for a doorway between " +
                        rooms[cd.a].id + " and " + rooms[cd.b].id);
        const double w = rng.uniform(spec.door_min, std::min(spec.door_max, span));
        const double lo = cd.span_lo + end_margin + 0.5 * w;
        const double hi = cd.span_hi - end_margin - 0.5 * w;
        const double center = rng.uniform(lo, hi);
        Gap g;
        g.width = w;
        g.a = cd.a;
        g.b = cd.b;
        if (cd.vertical_wall) {
            g.rect = Rect{{cd.wall_lo, center - 0.5 * w}, {cd.wall_hi, center + 0.5 * w}};
            g.centroid = {0.5 * (cd.wall_lo + cd.wall_hi), center};
        } else {
            g.rect = Rect{{center - 0.5 * w, cd.wall_lo}, {center + 0.5 * w, cd.wall_hi}};
            g.centroid = {center, 0.5 * (cd.wall_lo + cd.wall_hi)};
        }
        gaps.push_back(g);
    }

    // Obstacles: inside a room, clear of walls, other obstacles and doorways.
    std::vector<Rect> obstacles;
    const double clear = 2.0 * spec.robot_radius + 0.1;
    for (int k = 0; k < spec.obstacle_count; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < 40 && !placed; ++attempt) {
            const RoomRect& rr = rooms[rng.below(rooms.size())];
            const double wx = rng.uniform(spec.obstacle_min, spec.obstacle_max);
            const double wy = rng.uniform(spec.obstacle_min, spec.obstacle_max);
            const double margin = clear + 0.1;
            const double x0 = rr.rect.lo.x + margin, x1 = rr.rect.hi.x - margin - wx;
            const double y0 = rr.rect.lo.y + margin, y1 = rr.rect.hi.y - margin - wy;
            if (x1 <= x0 || y1 <= y0) continue;
            Rect ob{{rng.uniform(x0, x1), rng.uniform(y0, y1)}, {}};
            ob.hi = {ob.lo.x + wx, ob.lo.y + wy};
            const auto rect_clearance = [&](Vec2 p) {
                const double dx = std::max({ob.lo.x - p.x, 0.0, p.x - ob.hi.x});
                const double dy = std::max({ob.lo.y - p.y, 0.0, p.y - ob.hi.y});
                return std::hypot(dx, dy);
            };
            bool ok = true;
            for (const Gap& g : gaps)
                if (rect_clearance(g.centroid) < clear + 0.2) ok = false;
            // Room centroids stay navigable: they anchor room-level queries
            // and the connectivity scan.
            for (const RoomRect& other : rooms)
                if (rect_clearance({0.5 * (other.rect.lo.x + other.rect.hi.x),
                                    0.5 * (other.rect.lo.y + other.rect.hi.y)}) < clear + 0.2)
                    ok = false;
            for (const Rect& other : obstacles) {
                const double dx = std::max(other.lo.x - ob.hi.x, ob.lo.x - other.hi.x);
                const double dy = std::max(other.lo.y - ob.hi.y, ob.lo.y - other.hi.y);
                if (std::max(dx, dy) < clear) ok = false;
            }
            if (!ok) continue;
            obstacles.push_back(ob);
            placed = true;
        }
    }

    // Rasterize: occupied unless inside a room or a doorway gap; obstacles on top.
    OccupancyGrid grid;
    grid.origin = {-t, -t};
    grid.resolution = spec.resolution;
    grid.width = static_cast<int>(std::ceil((total_w + 2.0 * t) / spec.resolution - 1e-9));
    grid.height = static_cast<int>(std::ceil((total_h + 2.0 * t) / spec.resolution - 1e-9));
    grid.occupied.assign(static_cast<std::size_t>(grid.width) * grid.height, 1);
    for (int j = 0; j < grid.height; ++j)
        for (int i = 0; i < grid.width; ++i) {
            const Vec2 c = grid.cell_center(i, j);
            bool free = false;
            for (const RoomRect& rr : rooms)
                if (rr.rect.contains(c)) {
                    free = true;
                    break;
                }
            if (!free)
                for (const Gap& g : gaps)
                    if (g.rect.contains(c)) {
                        free = true;
                        break;
                    }
            if (free)
                for (const Rect& ob : obstacles)
                    if (ob.contains(c)) {
                        free = false;
                        break;
                    }
            grid.occupied[grid.index(i, j)] = free ? 0 : 1;
        }

    SceneGraph sg;
    for (const RoomRect& rr : rooms) sg.rooms.emplace(rr.id, make_room(rr, spec.room_height));
    for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
        const Gap& g = gaps[gi];
        Doorway d;
        d.id = "d" + std::to_string(gi);
        d.centroid = {g.centroid.x, g.centroid.y, 0.0};
        d.width = g.width;
        d.traversable = true;
        d.connects = {rooms[g.a].id, rooms[g.b].id};
        sg.doorways.emplace(d.id, d);
    }
    validate(sg);
    return {std::move(sg), std::move(grid)};
}

ConnectivityReport connectivity_check(const SceneGraph& sg, const OccupancyGrid& grid) {
    // Semantic reachability between rooms.
    const SemanticGraph g = build_semantic_graph(sg);
    std::map<std::string, int> sem_comp;
    int comp_id = 0;
    for (const auto& [id, node] : g.nodes) {
        (void)node;
        if (sem_comp.count(id)) continue;
        std::queue<std::string> frontier;
        frontier.push(id);
        sem_comp[id] = comp_id;
        while (!frontier.empty()) {
            const std::string cur = frontier.front();
            frontier.pop();
            for (const auto& [next, w] : g.neighbors(cur)) {
                (void)w;
                if (!sem_comp.count(next)) {
                    sem_comp[next] = comp_id;
                    frontier.push(next);
                }
            }
        }
        ++comp_id;
    }

    // Raster reachability via flood fill over free cells (4-connected).
    std::vector<int> cell_comp(static_cast<std::size_t>(grid.width) * grid.height, -1);
    int raster_id = 0;
    for (int j = 0; j < grid.height; ++j)
        for (int i = 0; i < grid.width; ++i) {
            if (grid.occ(i, j) || cell_comp[grid.index(i, j)] >= 0) continue;
            std::queue<std::pair<int, int>> frontier;
            frontier.emplace(i, j);
            cell_comp[grid.index(i, j)] = raster_id;
            while (!frontier.empty()) {
                const auto [ci, cj] = frontier.front();
                frontier.pop();
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int ni = ci + di[k], nj = cj + dj[k];
                    if (ni < 0 || nj < 0 || ni >= grid.width || nj >= grid.height) continue;
                    if (grid.occ(ni, nj) || cell_comp[grid.index(ni, nj)] >= 0) continue;
                    cell_comp[grid.index(ni, nj)] = raster_id;
                    frontier.emplace(ni, nj);
                }
            }
            ++raster_id;
        }
    const auto raster_comp_of = [&](const Room& room) {
        int i, j;
        if (!grid.cell_of(room.centroid.xy(), i, j)) return -1;
        return cell_comp[grid.index(i, j)];
    };

    ConnectivityReport report;
    for (auto a = sg.rooms.begin(); a != sg.rooms.end(); ++a)
        for (auto b = std::next(a); b != sg.rooms.end(); ++b) {
            const bool sem = sem_comp.at(a->first) == sem_comp.at(b->first);
            const int ca = raster_comp_of(a->second), cb = raster_comp_of(b->second);
            const bool ras = ca >= 0 && ca == cb;
            if (sem != ras) report.disagreements.emplace_back(a->first, b->first);
        }
    return report;
}

void write_env(const std::string& dir, const SceneGraph& sg, const OccupancyGrid& grid) {
    std::filesystem::create_directories(dir);
    std::ofstream sgf(dir + "/scene_graph.json");
    if (!sgf) throw Error("cannot write " + dir + "/scene_graph.json");
    sgf << save_scene_graph(sg) << "\n";
    save_grid(grid, dir + "/grid.pgm", dir + "/grid.meta.json");
}

std::pair<SceneGraph, OccupancyGrid> load_env(const std::string& dir) {
    std::ifstream sgf(dir + "/scene_graph.json");
    if (!sgf) throw Error("cannot read " + dir + "/scene_graph.json");
    std::string text((std::istreambuf_iterator<char>(sgf)), std::istreambuf_iterator<char>());
    return {load_scene_graph(text), load_grid(dir + "/grid.pgm", dir + "/grid.meta.json")};
}

}  // namespace spath
