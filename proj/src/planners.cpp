#include "spath/planners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "spath/rng.hpp"

namespace spath {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
}

const char* planner_name(PlannerKind kind) {
    switch (kind) {
        case PlannerKind::RrtStar: return "rrtstar";
        case PlannerKind::PrmStar: return "prmstar";
        case PlannerKind::BitStar: return "bitstar";
    }
    return "?";
}

PlannerKind parse_planner(const std::string& name) {
    if (name == "rrtstar") return PlannerKind::RrtStar;
    if (name == "prmstar") return PlannerKind::PrmStar;
    if (name == "bitstar") return PlannerKind::BitStar;
    throw Error("unknown planner: " + name);
}

double path_length(const std::vector<Vec2>& waypoints) {
    double len = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i)
        len += distance(waypoints[i - 1], waypoints[i]);
    return len;
}

PlanSpace make_space(const DistanceField& df, const OccupancyGrid& grid, const CellMask* mask) {
    PlanSpace s;
    s.df = &df;
    s.mask = mask;
    s.lo = grid.origin;
    s.hi = {grid.origin.x + grid.width * grid.resolution,
            grid.origin.y + grid.height * grid.resolution};
    s.free_area = mask ? mask->area() : grid.free_area();
    return s;
}

namespace {

double dist2(Vec2 a, Vec2 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Deterministic virtual clock; budgets never consult the wall clock.
struct Clock {
    double budget = 0.0;
    double used = 0.0;
    bool exhausted() const { return used >= budget; }
    void charge(double c) { used += c; }
};

struct Ctx {
    const PlanSpace& space;
    const PlannerConfig& cfg;
    Vec2 start;
    Vec2 goal;
    Rng rng;
    Clock clock;
    PlanStats stats;

    Ctx(const PlanSpace& s, const PlannerConfig& c, Vec2 st, Vec2 go)
        : space(s), cfg(c), start(st), goal(go), rng(c.seed) {
        clock.budget = c.budget;
    }

    bool point_ok(Vec2 p) {
        ++stats.validity_checks;
        clock.charge(plan_cost::kPointCheck);
        return is_valid(p, cfg.robot_radius, *space.df, space.mask);
    }
    bool seg_ok(Vec2 a, Vec2 b) {
        const std::size_t n = segment_check_points(distance(a, b), space.df->resolution);
        stats.validity_checks += n;
        clock.charge(static_cast<double>(n) * plan_cost::kPointCheck);
        return segment_valid(a, b, cfg.robot_radius, *space.df, space.mask);
    }
    Vec2 draw() {
        ++stats.samples;
        clock.charge(plan_cost::kSample);
        if (space.mask) return sample(*space.mask, rng);
        return {rng.uniform(space.lo.x, space.hi.x), rng.uniform(space.lo.y, space.hi.y)};
    }
    void dist_evals(std::size_t n) { clock.charge(static_cast<double>(n) * plan_cost::kDistEval); }

    // Improvements are stamped with the virtual time at which the enclosing
    // iteration started, so a run with a smaller budget B contains exactly the
    // trace entries with t < B (budget-prefix property).
    void improved(double t, double len) {
        if (!stats.cost_trace.empty() && len >= stats.cost_trace.back().second - 1e-12) return;
        if (stats.cost_trace.empty()) stats.solved_at = t;
        stats.cost_trace.emplace_back(t, len);
    }
};

// ---------------------------------------------------------------- RRT* -----

struct TreeNode {
    Vec2 p;
    int parent = -1;
    double cost = 0.0;
    std::vector<int> kids;
};

void reparent(std::vector<TreeNode>& nodes, int child, int parent) {
    const int old = nodes[child].parent;
    if (old >= 0) {
        auto& kids = nodes[old].kids;
        kids.erase(std::find(kids.begin(), kids.end(), child));
    }
    nodes[child].parent = parent;
    nodes[parent].kids.push_back(child);
}

std::size_t propagate_cost(std::vector<TreeNode>& nodes, int root) {
    std::size_t touched = 0;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int k : nodes[i].kids) {
            nodes[k].cost = nodes[i].cost + distance(nodes[i].p, nodes[k].p);
            stack.push_back(k);
            ++touched;
        }
    }
    return touched;
}

std::vector<Vec2> extract_tree_path(const std::vector<TreeNode>& nodes, int leaf) {
    std::vector<Vec2> out;
    for (int i = leaf; i >= 0; i = nodes[i].parent) out.push_back(nodes[i].p);
    std::reverse(out.begin(), out.end());
    return out;
}

PlanOutcome rrt_star(Ctx& ctx) {
    std::vector<TreeNode> nodes;
    nodes.push_back({ctx.start, -1, 0.0, {}});
    int goal_idx = -1;
    const double gamma = ctx.cfg.rewire_gamma * std::sqrt(3.0 * ctx.space.free_area / kPi);

    while (!ctx.clock.exhausted()) {
        const double t0 = ctx.clock.used;
        ++ctx.stats.iterations;

        const Vec2 target = ctx.rng.chance(ctx.cfg.goal_bias) ? ctx.goal : ctx.draw();

        int nearest = 0;
        double nearest_d2 = kInf;
        ctx.dist_evals(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double d2 = dist2(nodes[i].p, target);
            if (d2 < nearest_d2) {
                nearest_d2 = d2;
                nearest = static_cast<int>(i);
            }
        }
        const double nearest_d = std::sqrt(nearest_d2);
        if (nearest_d < 1e-12) continue;

        const Vec2 xnew =
            nodes[nearest].p +
            (target - nodes[nearest].p) * (std::min(ctx.cfg.steer_step, nearest_d) / nearest_d);
        if (!ctx.point_ok(xnew)) continue;

        const std::size_t n = nodes.size();
        const double radius = std::min(
            ctx.cfg.steer_step,
            gamma * std::sqrt(std::log(static_cast<double>(n + 1)) / static_cast<double>(n + 1)));
        std::vector<int> near;
        ctx.dist_evals(n);
        const double radius2 = radius * radius;
        for (std::size_t i = 0; i < n; ++i)
            if (dist2(nodes[i].p, xnew) <= radius2) near.push_back(static_cast<int>(i));

        int parent = -1;
        double best_cost = kInf;
        if (ctx.seg_ok(nodes[nearest].p, xnew))
            best_cost = nodes[nearest].cost + distance(nodes[nearest].p, xnew), parent = nearest;
        for (int i : near) {
            if (i == nearest) continue;
            const double c = nodes[i].cost + distance(nodes[i].p, xnew);
            if (c < best_cost - 1e-12 && ctx.seg_ok(nodes[i].p, xnew)) {
                best_cost = c;
                parent = i;
            }
        }
        if (parent < 0) continue;

        nodes.push_back({xnew, parent, best_cost, {}});
        const int newi = static_cast<int>(nodes.size()) - 1;
        nodes[parent].kids.push_back(newi);

        for (int i : near) {
            if (i == parent) continue;
            const double c = best_cost + distance(xnew, nodes[i].p);
            if (c < nodes[i].cost - 1e-12 && ctx.seg_ok(xnew, nodes[i].p)) {
                reparent(nodes, i, newi);
                nodes[i].cost = c;
                ctx.dist_evals(propagate_cost(nodes, i));
            }
        }

        const double dg = distance(xnew, ctx.goal);
        ctx.dist_evals(1);
        if (dg <= ctx.cfg.steer_step) {
            if (goal_idx < 0) {
                if (ctx.seg_ok(xnew, ctx.goal)) {
                    nodes.push_back({ctx.goal, newi, best_cost + dg, {}});
                    goal_idx = static_cast<int>(nodes.size()) - 1;
                    nodes[newi].kids.push_back(goal_idx);
                }
            } else if (best_cost + dg < nodes[goal_idx].cost - 1e-12 && ctx.seg_ok(xnew, ctx.goal)) {
                reparent(nodes, goal_idx, newi);
                nodes[goal_idx].cost = best_cost + dg;
                ctx.dist_evals(propagate_cost(nodes, goal_idx));
            }
        }
        if (goal_idx >= 0) ctx.improved(t0, nodes[goal_idx].cost);
    }

    PlanOutcome out;
    if (goal_idx >= 0) {
        out.solved = true;
        out.path.waypoints = extract_tree_path(nodes, goal_idx);
        out.path.length = path_length(out.path.waypoints);
    }
    return out;
}

// ---------------------------------------------------------------- PRM* -----

PlanOutcome prm_star(Ctx& ctx) {
    std::vector<Vec2> verts = {ctx.start, ctx.goal};
    std::vector<std::vector<std::pair<int, double>>> adj(2);
    const double gamma = ctx.cfg.rewire_gamma * std::sqrt(6.0 * ctx.space.free_area / kPi);

    double best_len = kInf;
    std::vector<Vec2> best_path;

    const auto try_edge = [&](int i, int j) {
        if (ctx.seg_ok(verts[i], verts[j])) {
            const double d = distance(verts[i], verts[j]);
            adj[i].emplace_back(j, d);
            adj[j].emplace_back(i, d);
        }
    };

    // Dijkstra start -> goal over the current roadmap.
    const auto extract = [&](double t0) {
        const std::size_t n = verts.size();
        std::vector<double> dist(n, kInf);
        std::vector<int> from(n, -1);
        using Entry = std::pair<double, int>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
        dist[0] = 0.0;
        open.emplace(0.0, 0);
        while (!open.empty()) {
            const auto [d, i] = open.top();
            open.pop();
            if (d > dist[i] + 1e-15) continue;
            if (i == 1) break;
            ctx.dist_evals(adj[i].size());
            for (const auto& [j, w] : adj[i]) {
                if (d + w < dist[j] - 1e-15) {
                    dist[j] = d + w;
                    from[j] = i;
                    open.emplace(dist[j], j);
                }
            }
        }
        if (dist[1] < best_len - 1e-12) {
            best_len = dist[1];
            best_path.clear();
            for (int i = 1; i >= 0; i = from[i]) {
                best_path.push_back(verts[i]);
                if (i == 0) break;
            }
            std::reverse(best_path.begin(), best_path.end());
            ctx.improved(t0, best_len);
        }
    };

    {
        // The roadmap starts from {start, goal}; try the direct edge.
        const double t0 = ctx.clock.used;
        const double r0 = gamma * std::sqrt(std::log(2.0) / 2.0);
        ctx.dist_evals(1);
        if (distance(ctx.start, ctx.goal) <= r0) {
            try_edge(0, 1);
            extract(t0);
        }
    }

    std::size_t drawn = 0;
    std::size_t next_extract = 16;
    while (!ctx.clock.exhausted()) {
        const double t0 = ctx.clock.used;
        ++ctx.stats.iterations;
        const Vec2 x = ctx.draw();
        ++drawn;
        if (ctx.point_ok(x)) {
            verts.push_back(x);
            adj.emplace_back();
            const int n = static_cast<int>(verts.size());
            const double r =
                gamma * std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
            ctx.dist_evals(n - 1);
            const double r2 = r * r;
            for (int i = 0; i + 1 < n; ++i)
                if (dist2(verts[i], x) <= r2) try_edge(i, n - 1);
        }
        // Anytime extraction on a doubling schedule (16, 32, ... then every
        // 256 samples): small subproblems surface their first solution fast,
        // large roadmaps keep the steady 256 cadence. The schedule depends
        // only on the draw count, so a longer run stays an exact extension
        // of a shorter one; there is no budget-end extraction for the same
        // reason.
        if (drawn == next_extract) {
            extract(t0);
            next_extract = next_extract < 256 ? next_extract * 2 : next_extract + 256;
        }
    }

    PlanOutcome out;
    if (best_len < kInf) {
        out.solved = true;
        out.path.waypoints = best_path;
        out.path.length = best_len;
    }
    return out;
}

// ---------------------------------------------------------------- BIT* -----

struct BitSample {
    Vec2 p;
    bool is_goal = false;
    bool consumed = false;
};

struct BitEdge {
    double est;    // cost(v) + d(v,x) + h(x)
    double vcost;  // cost(v) at push time; stale entries are skipped
    int v;
    int x;
    bool to_sample;
};

struct BitEdgeCmp {
    bool operator()(const BitEdge& a, const BitEdge& b) const {
        if (a.est != b.est) return a.est > b.est;
        if (a.v != b.v) return a.v > b.v;
        return a.x > b.x;
    }
};

PlanOutcome bit_star(Ctx& ctx) {
    const double cmin = distance(ctx.start, ctx.goal);
    std::vector<TreeNode> tree;
    tree.push_back({ctx.start, -1, 0.0, {}});
    int goal_idx = -1;
    std::vector<BitSample> samples = {{ctx.goal, true, false}};
    double best = kInf;
    double radius = kInf;  // first batch considers the direct edge only
    int batch_no = 0;

    std::priority_queue<BitEdge, std::vector<BitEdge>, BitEdgeCmp> queue;

    const auto h = [&](Vec2 p) { return distance(p, ctx.goal); };
    const auto fhat = [&](Vec2 p) { return distance(ctx.start, p) + distance(p, ctx.goal); };

    const auto push_edges_from = [&](int v) {
        ctx.dist_evals(samples.size() + tree.size());
        const double radius2 = radius == kInf ? kInf : radius * radius;
        for (std::size_t k = 0; k < samples.size(); ++k) {
            if (samples[k].consumed) continue;
            if (dist2(tree[v].p, samples[k].p) > radius2) continue;
            const double est =
                tree[v].cost + distance(tree[v].p, samples[k].p) + h(samples[k].p);
            if (est < best) queue.push({est, tree[v].cost, v, static_cast<int>(k), true});
        }
        for (std::size_t u = 0; u < tree.size(); ++u) {
            if (static_cast<int>(u) == v) continue;
            if (dist2(tree[v].p, tree[u].p) > radius2) continue;
            const double d = distance(tree[v].p, tree[u].p);
            if (tree[v].cost + d >= tree[u].cost - 1e-12) continue;
            const double est = tree[v].cost + d + h(tree[u].p);
            if (est < best) queue.push({est, tree[v].cost, v, static_cast<int>(u), false});
        }
    };

    const auto new_batch = [&]() -> bool {
        ++batch_no;
        if (batch_no > 1) {
            // Prune samples that can no longer improve the solution, then
            // draw a batch restricted to the informed set.
            std::vector<BitSample> kept;
            for (auto& sm : samples)
                if (!sm.consumed && (best == kInf || fhat(sm.p) < best)) kept.push_back(sm);
            samples = std::move(kept);
            int need = ctx.cfg.batch_size;
            long attempts = 100L * ctx.cfg.batch_size;
            while (need > 0 && attempts-- > 0 && !ctx.clock.exhausted()) {
                const Vec2 x = ctx.draw();
                if (best < kInf && fhat(x) >= best) continue;
                if (!ctx.point_ok(x)) continue;
                samples.push_back({x, false, false});
                --need;
            }
            const std::size_t q = tree.size() + samples.size();
            double mu = ctx.space.free_area;
            if (best < kInf) {
                const double ell = kPi / 4.0 * best * std::sqrt(std::max(best * best - cmin * cmin, 0.0));
                mu = std::min(mu, ell);
            }
            radius = ctx.cfg.rewire_gamma * std::sqrt(6.0 * mu / kPi) *
                     std::sqrt(std::log(static_cast<double>(q)) / static_cast<double>(q));
        }
        while (!queue.empty()) queue.pop();
        for (std::size_t v = 0; v < tree.size(); ++v) {
            if (tree[v].cost + h(tree[v].p) >= best) continue;
            push_edges_from(static_cast<int>(v));
        }
        return !queue.empty();
    };

    int dry_batches = 0;
    while (!ctx.clock.exhausted()) {
        const double t0 = ctx.clock.used;
        ++ctx.stats.iterations;
        if (best <= cmin + 1e-9) break;  // provably optimal, nothing to refine

        if (queue.empty()) {
            if (!new_batch()) {
                if (++dry_batches >= 2) break;  // informed set exhausted
                continue;
            }
            dry_batches = 0;
            continue;
        }

        const BitEdge e = queue.top();
        queue.pop();
        if (e.vcost != tree[e.v].cost) continue;  // stale
        if (e.est >= best - 1e-12) {
            while (!queue.empty()) queue.pop();  // batch cannot improve further
            continue;
        }

        if (e.to_sample) {
            BitSample& sm = samples[e.x];
            if (sm.consumed) continue;
            if (!ctx.seg_ok(tree[e.v].p, sm.p)) continue;
            const double c = tree[e.v].cost + distance(tree[e.v].p, sm.p);
            tree.push_back({sm.p, e.v, c, {}});
            const int newi = static_cast<int>(tree.size()) - 1;
            tree[e.v].kids.push_back(newi);
            sm.consumed = true;
            if (sm.is_goal) {
                goal_idx = newi;
                best = c;
                ctx.improved(t0, best);
            }
            push_edges_from(newi);
        } else {
            const int u = e.x;
            const double c = tree[e.v].cost + distance(tree[e.v].p, tree[u].p);
            if (c >= tree[u].cost - 1e-12) continue;
            if (!ctx.seg_ok(tree[e.v].p, tree[u].p)) continue;
            reparent(tree, u, e.v);
            tree[u].cost = c;
            ctx.dist_evals(propagate_cost(tree, u));
            if (goal_idx >= 0 && tree[goal_idx].cost < best - 1e-12) {
                best = tree[goal_idx].cost;
                ctx.improved(t0, best);
            }
            push_edges_from(u);
        }
    }

    PlanOutcome out;
    if (goal_idx >= 0) {
        out.solved = true;
        out.path.waypoints = extract_tree_path(tree, goal_idx);
        out.path.length = path_length(out.path.waypoints);
    }
    return out;
}

}  // namespace

PlanOutcome plan(Vec2 start, Vec2 goal, const PlanSpace& space, const PlannerConfig& cfg) {
    if (cfg.budget <= 0.0) throw Error("plan: budget must be positive");
    if (cfg.goal_bias < 0.0 || cfg.goal_bias > 1.0) throw Error("plan: goal_bias outside [0, 1]");
    if (cfg.batch_size < 1) throw Error("plan: batch_size must be positive");
    Ctx ctx(space, cfg, start, goal);
    if (!ctx.point_ok(start))
        throw Error("plan: invalid start (" + std::to_string(start.x) + ", " +
                    std::to_string(start.y) + ")");
    if (!ctx.point_ok(goal))
        throw Error("plan: invalid goal (" + std::to_string(goal.x) + ", " +
                    std::to_string(goal.y) + ")");

    PlanOutcome out;
    if (distance(start, goal) < 1e-12) {
        out.solved = true;
        out.path.waypoints = {start};
        out.path.length = 0.0;
        ctx.improved(ctx.clock.used, 0.0);
    } else {
        switch (cfg.kind) {
            case PlannerKind::RrtStar: out = rrt_star(ctx); break;
            case PlannerKind::PrmStar: out = prm_star(ctx); break;
            case PlannerKind::BitStar: out = bit_star(ctx); break;
        }
    }
    ctx.stats.used = ctx.clock.used;
    out.path.stats = std::move(ctx.stats);
    return out;
}

}  // namespace spath
