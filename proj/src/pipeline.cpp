#include "spath/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "spath/rng.hpp"

namespace spath {

Environment setup(SceneGraph sg, OccupancyGrid grid) {
    Environment env;
    env.semantic_graph = build_semantic_graph(sg);
    for (const auto& [id, room] : sg.rooms) env.room_contours.emplace(id, room_contour(room));
    const double min_depth = 2.0 * grid.resolution;
    for (const auto& [id, d] : sg.doorways) {
        const auto& a = env.room_contours.at(d.connects.first);
        const auto& b = env.room_contours.at(d.connects.second);
        env.doorway_contours.emplace(id, doorway_contour(d, a, b, min_depth));
    }
    env.scene_graph = std::move(sg);
    env.distance = std::make_shared<const DistanceField>(distance_field(grid));
    env.grid = std::make_shared<const OccupancyGrid>(std::move(grid));
    return env;
}

Environment with_doorway_state(const Environment& env, const std::string& id, bool traversable) {
    Environment out = env;
    out.scene_graph = set_doorway_state(env.scene_graph, id, traversable);
    out.semantic_graph = build_semantic_graph(out.scene_graph);
    return out;
}

const char* mode_name(Mode mode) {
    switch (mode) {
        case Mode::Baseline: return "baseline";
        case Mode::Restricted: return "restricted";
        case Mode::Decomposed: return "decomposed";
        case Mode::SPathSeq: return "spath-seq";
        case Mode::SPathPar: return "spath-par";
    }
    return "?";
}

Mode parse_mode(const std::string& name) {
    if (name == "baseline") return Mode::Baseline;
    if (name == "restricted") return Mode::Restricted;
    if (name == "decomposed") return Mode::Decomposed;
    if (name == "spath-seq") return Mode::SPathSeq;
    if (name == "spath-par") return Mode::SPathPar;
    throw Error("unknown mode: " + name);
}

bool SolutionCache::lookup(std::uint64_t key, GeometricPath& out) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return false;
    out = it->second;
    return true;
}

void SolutionCache::insert(std::uint64_t key, const GeometricPath& path) {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_[key] = path;  // last writer wins; entries for a key are interchangeable
}

std::size_t SolutionCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

GeometricPath stitch(const std::vector<GeometricPath>& legs) {
    if (legs.empty()) throw Error("stitch: no legs");
    GeometricPath out;
    out.waypoints = legs.front().waypoints;
    for (std::size_t i = 1; i < legs.size(); ++i) {
        const auto& next = legs[i].waypoints;
        if (next.empty()) throw Error("stitch: empty leg");
        if (out.waypoints.empty()) {
            out.waypoints = next;
            continue;
        }
        if (distance(out.waypoints.back(), next.front()) > 1e-6)
            throw Error("stitch: junction mismatch between legs " + std::to_string(i - 1) +
                        " and " + std::to_string(i));
        out.waypoints.insert(out.waypoints.end(), next.begin() + 1, next.end());
    }
    out.length = path_length(out.waypoints);
    return out;
}

namespace {

Vec2 resolve_endpoint(const Endpoint& e, const Environment& env) {
    if (!e.is_room) return e.point;
    return env.scene_graph.room(e.room).centroid.xy();
}

// Internals shared by run() and replan(): replanning swaps in a discounted
// semantic graph and a scaled (still admissible) heuristic.
PlanResult run_impl(const Environment& env, const Query& q, SolutionCache* cache,
                    const SemanticGraph* semantic_override, double heuristic_scale) {
    const auto wall_start = std::chrono::steady_clock::now();
    if (q.ttp <= 0.0) throw Error("run: ttp must be positive");

    PlanResult res;
    res.mode = q.mode;
    res.resolved_start = resolve_endpoint(q.start, env);
    res.resolved_goal = resolve_endpoint(q.goal, env);

    const bool uses_cache = (q.mode == Mode::SPathSeq || q.mode == Mode::SPathPar) && cache;
    const SemanticGraph& semantic = semantic_override ? *semantic_override : env.semantic_graph;

    if (q.mode == Mode::Baseline) {
        PlannerConfig cfg = q.planner;
        cfg.budget = q.ttp;
        cfg.seed = q.seed;
        const PlanSpace space = make_space(*env.distance, *env.grid, nullptr);
        const PlanOutcome outcome = plan(res.resolved_start, res.resolved_goal, space, cfg);
        LegResult leg;
        leg.sub.index = 0;
        leg.sub.start = res.resolved_start;
        leg.sub.goal = res.resolved_goal;
        leg.sub.budget = q.ttp;
        leg.solved = outcome.solved;
        leg.path = outcome.path;
        res.planner_invocations = 1;
        res.cpu_time = outcome.path.stats.used;
        res.success = outcome.solved;
        if (res.success) res.final_path = outcome.path;
        res.legs.push_back(std::move(leg));
        res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
        return res;
    }

    // Semantic stage.
    const std::string start_room =
        q.start.is_room ? q.start.room
                        : locate(res.resolved_start, env.scene_graph, env.room_contours,
                                 env.doorway_contours);
    const std::string goal_room =
        q.goal.is_room ? q.goal.room
                       : locate(res.resolved_goal, env.scene_graph, env.room_contours,
                                env.doorway_contours);
    res.semantic_path = astar(semantic, start_room, goal_room, heuristic_scale);
    res.instructions = render_instructions(res.semantic_path);
    const CoarsePath cp = coarse_path(res.semantic_path, res.resolved_start, res.resolved_goal,
                                      env.scene_graph, env.room_contours, env.doorway_contours,
                                      *env.grid);

    if (q.mode == Mode::Restricted) {
        PlannerConfig cfg = q.planner;
        cfg.budget = q.ttp;
        cfg.seed = q.seed;
        const PlanSpace space = make_space(*env.distance, *env.grid, &cp.region.cells);
        const PlanOutcome outcome = plan(res.resolved_start, res.resolved_goal, space, cfg);
        LegResult leg;
        leg.sub.index = 0;
        leg.sub.start = res.resolved_start;
        leg.sub.goal = res.resolved_goal;
        leg.sub.contour = cp.region;
        leg.sub.budget = q.ttp;
        leg.solved = outcome.solved;
        leg.path = outcome.path;
        res.planner_invocations = 1;
        res.cpu_time = outcome.path.stats.used;
        res.success = outcome.solved;
        if (res.success) res.final_path = outcome.path;
        res.legs.push_back(std::move(leg));
        res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
        return res;
    }

    // Decomposed modes.
    std::vector<Subproblem> subs = decompose(cp, env.scene_graph);
    subs = merge_small(std::move(subs), q.merge_theta, *env.grid);
    res.decomposition = allocate(std::move(subs), q.ttp);

    const std::size_t n_legs = res.decomposition.subproblems.size();
    res.legs.resize(n_legs);
    std::atomic<std::size_t> invocations{0};
    std::atomic<std::size_t> hits{0};

    const auto solve_leg = [&](std::size_t i) {
        const Subproblem& sub = res.decomposition.subproblems[i];
        LegResult& leg = res.legs[i];
        leg.sub = sub;
        if (uses_cache) {
            GeometricPath hit;
            if (cache->lookup(sub.cache_key, hit)) {
                leg.cache_hit = true;
                leg.solved = true;
                leg.path = std::move(hit);
                hits.fetch_add(1);
                return;
            }
        }
        PlannerConfig cfg = q.planner;
        cfg.budget = sub.budget;
        cfg.seed = derive_seed(q.seed, static_cast<std::uint64_t>(i));
        const PlanSpace space = make_space(*env.distance, *env.grid, &sub.contour.cells);
        const PlanOutcome outcome = plan(sub.start, sub.goal, space, cfg);
        invocations.fetch_add(1);
        leg.solved = outcome.solved;
        leg.path = outcome.path;
        if (leg.solved && uses_cache) cache->insert(sub.cache_key, leg.path);
    };

    if (q.mode == Mode::SPathPar) {
        unsigned workers = q.workers > 0 ? static_cast<unsigned>(q.workers)
                                         : std::max(1u, std::thread::hardware_concurrency());
        workers = std::min<unsigned>(workers, static_cast<unsigned>(n_legs));
        std::atomic<std::size_t> next{0};
        const auto worker = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n_legs;) solve_leg(i);
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
    } else {
        for (std::size_t i = 0; i < n_legs; ++i) solve_leg(i);
    }

    res.cache_hits = hits.load();
    res.planner_invocations = invocations.load();
    res.success = std::all_of(res.legs.begin(), res.legs.end(),
                              [](const LegResult& l) { return l.solved; });
    for (const LegResult& leg : res.legs)
        if (!leg.cache_hit) res.cpu_time += leg.path.stats.used;  // hits cost no planning
    if (res.success) {
        std::vector<GeometricPath> paths;
        paths.reserve(n_legs);
        for (const LegResult& leg : res.legs) paths.push_back(leg.path);
        res.final_path = stitch(paths);
    }
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return res;
}

}  // namespace

PlanResult run(const Environment& env, const Query& q, SolutionCache* cache) {
    return run_impl(env, q, cache, nullptr, 1.0);
}

PlanResult replan(Environment& env, const std::string& blocked, const PlanResult& prev,
                  SolutionCache& cache, const Query& q, double reuse_discount) {
    if (reuse_discount <= 0.0 || reuse_discount >= 1.0)
        throw Error("replan: reuse discount must be in (0, 1)");
    const auto doors = prev.semantic_path.doorway_ids();
    const auto at = std::find(doors.begin(), doors.end(), blocked);
    if (at == doors.end())
        throw Error("replan: doorway " + blocked + " is not on the previous semantic path");

    env = with_doorway_state(env, blocked, false);

    // Discount the edges the previous path traversed to encourage reuse.
    SemanticGraph discounted = env.semantic_graph;
    const auto& seq = prev.semantic_path.nodes;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        for (auto& e : discounted.edges)
            if (std::isfinite(e.weight) && ((e.a == seq[i] && e.b == seq[i + 1]) ||
                                            (e.b == seq[i] && e.a == seq[i + 1])))
                e.weight *= reuse_discount;

    // Restart from the doorway preceding the blockage (the original start
    // when the first doorway is the one blocked).
    Query q2 = q;
    if (at != doors.begin())
        q2.start = Endpoint::at(env.scene_graph.doorway(*(at - 1)).centroid.xy());
    else
        q2.start = Endpoint::at(prev.resolved_start);
    if (q2.mode != Mode::SPathPar) q2.mode = Mode::SPathSeq;

    return run_impl(env, q2, &cache, &discounted, reuse_discount);
}

// ------------------------------------------------------------- JSON io -----

namespace {

nlohmann::json vec2_json(Vec2 v) { return {v.x, v.y}; }
Vec2 vec2_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

nlohmann::json path_json(const GeometricPath& p) {
    nlohmann::json j;
    j["waypoints"] = nlohmann::json::array();
    for (const Vec2& w : p.waypoints) j["waypoints"].push_back(vec2_json(w));
    j["length_m"] = p.length;
    j["stats"] = {{"samples", p.stats.samples},
                  {"validity_checks", p.stats.validity_checks},
                  {"iterations", p.stats.iterations},
                  {"solved_at_s", p.stats.solved_at},
                  {"used_s", p.stats.used}};
    return j;
}

GeometricPath path_from(const nlohmann::json& j) {
    GeometricPath p;
    for (const auto& w : j.at("waypoints")) p.waypoints.push_back(vec2_from(w));
    p.length = j.at("length_m").get<double>();
    const auto& s = j.at("stats");
    p.stats.samples = s.at("samples").get<std::size_t>();
    p.stats.validity_checks = s.at("validity_checks").get<std::size_t>();
    p.stats.iterations = s.at("iterations").get<std::size_t>();
    p.stats.solved_at = s.at("solved_at_s").get<double>();
    p.stats.used = s.at("used_s").get<double>();
    return p;
}

nlohmann::json endpoint_json(const Endpoint& e) {
    if (e.is_room) return {{"room", e.room}};
    return {{"point", vec2_json(e.point)}};
}

Endpoint endpoint_from(const nlohmann::json& j) {
    if (j.contains("room")) return Endpoint::in_room(j.at("room").get<std::string>());
    return Endpoint::at(vec2_from(j.at("point")));
}

}  // namespace

std::string result_to_json(const ResultDoc& doc) {
    const PlanResult& r = doc.result;
    nlohmann::json j;
    j["schema"] = "spath-result/1";
    j["env_dir"] = doc.env_dir;
    j["doorway_states"] = doc.doorway_states;
    j["query"] = {{"start", endpoint_json(doc.query.start)},
                  {"goal", endpoint_json(doc.query.goal)},
                  {"ttp_s", doc.query.ttp},
                  {"mode", mode_name(doc.query.mode)},
                  {"planner", planner_name(doc.query.planner.kind)},
                  {"seed", doc.query.seed},
                  {"workers", doc.query.workers},
                  {"merge_theta", doc.query.merge_theta},
                  {"robot_radius", doc.query.planner.robot_radius}};
    j["success"] = r.success;
    j["mode"] = mode_name(r.mode);
    j["resolved_start"] = vec2_json(r.resolved_start);
    j["resolved_goal"] = vec2_json(r.resolved_goal);
    j["semantic_path"] = r.semantic_path.nodes;
    j["semantic_weight_m"] = r.semantic_path.total_weight;
    j["instructions"] = r.instructions;
    j["cache_hits"] = r.cache_hits;
    j["planner_invocations"] = r.planner_invocations;
    j["cpu_time_s"] = r.cpu_time;
    j["wall_time_s"] = r.wall_time;
    if (r.success) j["path"] = path_json(r.final_path);
    j["legs"] = nlohmann::json::array();
    for (const LegResult& leg : r.legs) {
        nlohmann::json l;
        l["index"] = leg.sub.index;
        l["start"] = vec2_json(leg.sub.start);
        l["goal"] = vec2_json(leg.sub.goal);
        l["members"] = leg.sub.contour.member_ids;
        l["effort"] = leg.sub.effort;
        l["budget_s"] = leg.sub.budget;
        l["cache_key"] = leg.sub.cache_key;
        l["cache_hit"] = leg.cache_hit;
        l["solved"] = leg.solved;
        if (leg.solved) l["path"] = path_json(leg.path);
        j["legs"].push_back(std::move(l));
    }
    return j.dump(2);
}

ResultDoc result_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("schema", "") != "spath-result/1")
        throw Error("result: unknown schema " + j.value("schema", "(none)"));
    ResultDoc doc;
    doc.env_dir = j.at("env_dir").get<std::string>();
    for (const auto& [k, v] : j.at("doorway_states").items())
        doc.doorway_states[k] = v.get<bool>();
    const auto& q = j.at("query");
    doc.query.start = endpoint_from(q.at("start"));
    doc.query.goal = endpoint_from(q.at("goal"));
    doc.query.ttp = q.at("ttp_s").get<double>();
    doc.query.mode = parse_mode(q.at("mode").get<std::string>());
    doc.query.planner.kind = parse_planner(q.at("planner").get<std::string>());
    doc.query.seed = q.at("seed").get<std::uint64_t>();
    doc.query.workers = q.at("workers").get<int>();
    doc.query.merge_theta = q.at("merge_theta").get<double>();
    doc.query.planner.robot_radius = q.at("robot_radius").get<double>();

    PlanResult& r = doc.result;
    r.success = j.at("success").get<bool>();
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.resolved_start = vec2_from(j.at("resolved_start"));
    r.resolved_goal = vec2_from(j.at("resolved_goal"));
    r.semantic_path.nodes = j.at("semantic_path").get<std::vector<std::string>>();
    r.semantic_path.total_weight = j.at("semantic_weight_m").get<double>();
    r.instructions = j.at("instructions").get<std::vector<std::string>>();
    r.cache_hits = j.at("cache_hits").get<std::size_t>();
    r.planner_invocations = j.at("planner_invocations").get<std::size_t>();
    r.cpu_time = j.at("cpu_time_s").get<double>();
    r.wall_time = j.at("wall_time_s").get<double>();
    if (j.contains("path")) r.final_path = path_from(j.at("path"));
    for (const auto& l : j.at("legs")) {
        LegResult leg;
        leg.sub.index = l.at("index").get<int>();
        leg.sub.start = vec2_from(l.at("start"));
        leg.sub.goal = vec2_from(l.at("goal"));
        leg.sub.contour.member_ids = l.at("members").get<std::vector<std::string>>();
        leg.sub.effort = l.at("effort").get<double>();
        leg.sub.budget = l.at("budget_s").get<double>();
        leg.sub.cache_key = l.at("cache_key").get<std::uint64_t>();
        leg.cache_hit = l.at("cache_hit").get<bool>();
        leg.solved = l.at("solved").get<bool>();
        if (leg.solved) leg.path = path_from(l.at("path"));
        r.legs.push_back(std::move(leg));
    }
    return doc;
}

}  // namespace spath
