// Command-line front end: environment generation, single planning queries,
// replanning from a saved result, the benchmark protocol, and the parallel
// speedup measurement.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "spath/bench.hpp"
#include "spath/envgen.hpp"
#include "spath/pipeline.hpp"
#include "spath/rng.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw spath::Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw spath::Error("cannot write " + path);
    out << text;
}

spath::Endpoint parse_endpoint(const std::string& text) {
    if (text.rfind("room:", 0) == 0) return spath::Endpoint::in_room(text.substr(5));
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw spath::Error("endpoint must be 'x,y' or 'room:<id>': " + text);
    return spath::Endpoint::at(
        {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))});
}

std::map<std::string, bool> doorway_states(const spath::SceneGraph& sg) {
    std::map<std::string, bool> out;
    for (const auto& [id, d] : sg.doorways) out[id] = d.traversable;
    return out;
}

spath::Environment env_with_states(const std::string& dir,
                                   const std::map<std::string, bool>& states) {
    auto [sg, grid] = spath::load_env(dir);
    for (const auto& [id, open] : states)
        if (sg.doorways.count(id)) sg.doorways.at(id).traversable = open;
    return spath::setup(std::move(sg), std::move(grid));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"S-Path: semantic path planning over 3D scene graphs"};
    app.require_subcommand(1);

    // ---- gen-env ----
    auto* gen = app.add_subcommand("gen-env", "generate a synthetic floor environment");
    std::string gen_spec, gen_out = "env";
    std::uint64_t gen_seed = 0;
    bool gen_seed_set = false, gen_scenario = false;
    gen->add_option("--spec", gen_spec, "floor spec JSON (defaults when omitted)");
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--seed", gen_seed, "override the spec seed")->each([&](const std::string&) {
        gen_seed_set = true;
    });
    gen->add_flag("--scenario", gen_scenario, "also write a template scenario.json");

    // ---- plan ----
    auto* plan_cmd = app.add_subcommand("plan", "run a single planning query");
    std::string plan_env, plan_start, plan_goal, plan_mode = "spath-seq",
                plan_planner = "prmstar", plan_out;
    double plan_ttp_ms = 1000.0, plan_radius = 0.3;
    std::uint64_t plan_seed = 0;
    int plan_threads = 0;
    plan_cmd->add_option("--env", plan_env, "environment directory")->required();
    plan_cmd->add_option("--start", plan_start, "'x,y' or 'room:<id>'")->required();
    plan_cmd->add_option("--goal", plan_goal, "'x,y' or 'room:<id>'")->required();
    plan_cmd->add_option("--mode", plan_mode, "baseline|restricted|decomposed|spath-seq|spath-par");
    plan_cmd->add_option("--planner", plan_planner, "rrtstar|prmstar|bitstar");
    plan_cmd->add_option("--ttp", plan_ttp_ms, "time budget, ms");
    plan_cmd->add_option("--seed", plan_seed, "query seed");
    plan_cmd->add_option("--threads", plan_threads, "worker count for spath-par");
    plan_cmd->add_option("--radius", plan_radius, "robot radius, m");
    plan_cmd->add_option("--out", plan_out, "result JSON path");

    // ---- replan ----
    auto* replan_cmd = app.add_subcommand("replan", "replan a saved result around a blockage");
    std::string rep_result, rep_block, rep_out;
    replan_cmd->add_option("--result", rep_result, "result JSON from 'plan'")->required();
    replan_cmd->add_option("--block", rep_block, "doorway id to block")->required();
    replan_cmd->add_option("--out", rep_out, "output result JSON path");

    // ---- bench ----
    auto* bench_cmd = app.add_subcommand("bench", "run the benchmark protocol");
    std::string bench_scenario, bench_out = "report";
    int bench_trials = 30, bench_points = 12, bench_workers = 0;
    bench_cmd->add_option("--scenario", bench_scenario, "scenario JSON")->required();
    bench_cmd->add_option("--trials", bench_trials, "trials per ttp sample");
    bench_cmd->add_option("--points", bench_points, "log-spaced ttp samples");
    bench_cmd->add_option("--workers", bench_workers, "trial-level workers (0 = hardware)");
    bench_cmd->add_option("--out", bench_out, "report directory");

    // ---- speedup ----
    auto* sp_cmd = app.add_subcommand("speedup", "sequential vs parallel wall-time ratios");
    std::string sp_env, sp_planner = "prmstar", sp_out;
    double sp_ttp_ms = 1000.0;
    int sp_workers = 0, sp_queries = 10;
    std::uint64_t sp_seed = 0;
    sp_cmd->add_option("--env", sp_env, "environment directory")->required();
    sp_cmd->add_option("--ttp", sp_ttp_ms, "budget per query, ms");
    sp_cmd->add_option("--workers", sp_workers, "parallel worker count (0 = hardware)");
    sp_cmd->add_option("--planner", sp_planner, "underlying planner");
    sp_cmd->add_option("--queries", sp_queries, "number of random room-to-room queries");
    sp_cmd->add_option("--seed", sp_seed, "seed for query selection");
    sp_cmd->add_option("--out", sp_out, "output JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            spath::FloorSpec spec;
            if (!gen_spec.empty()) spec = spath::floorspec_from_json(slurp(gen_spec));
            if (gen_seed_set) spec.seed = gen_seed;
            auto [sg, grid] = spath::generate(spec);
            spath::write_env(gen_out, sg, grid);
            spit(gen_out + "/floorspec.json", spath::floorspec_to_json(spec) + "\n");
            const auto report = spath::connectivity_check(sg, grid);
            std::cout << "rooms: " << sg.rooms.size() << ", doorways: " << sg.doorways.size()
                      << ", grid: " << grid.width << "x" << grid.height << "\n";
            if (!report.clean()) {
                std::cerr << "connectivity disagreements: " << report.disagreements.size() << "\n";
                return 1;
            }
            if (gen_scenario) {
                spath::Scenario sc;
                sc.env_dir = gen_out;
                spath::Rng rng(spec.seed);
                std::vector<std::string> ids;
                for (const auto& [id, room] : sg.rooms) {
                    (void)room;
                    ids.push_back(id);
                }
                for (int i = 0; i < 2 && ids.size() >= 2; ++i) {
                    const auto a = ids[rng.below(ids.size())];
                    auto b = ids[rng.below(ids.size())];
                    while (b == a) b = ids[rng.below(ids.size())];
                    sc.queries.push_back({"q" + std::to_string(i), spath::Endpoint::in_room(a),
                                          spath::Endpoint::in_room(b)});
                }
                sc.seed = spec.seed;
                spit(gen_out + "/scenario.json", spath::scenario_to_json(sc) + "\n");
            }
            return 0;
        }

        if (*plan_cmd) {
            auto [sg, grid] = spath::load_env(plan_env);
            const auto states = doorway_states(sg);
            spath::Environment env = spath::setup(std::move(sg), std::move(grid));
            spath::Query q;
            q.start = parse_endpoint(plan_start);
            q.goal = parse_endpoint(plan_goal);
            q.ttp = plan_ttp_ms / 1000.0;
            q.mode = spath::parse_mode(plan_mode);
            q.planner.kind = spath::parse_planner(plan_planner);
            q.planner.robot_radius = plan_radius;
            q.seed = plan_seed;
            q.workers = plan_threads;
            spath::SolutionCache cache;
            const spath::PlanResult res = spath::run(env, q, &cache);

            std::cout << (res.success ? "solved" : "FAILED") << " in " << res.legs.size()
                      << " leg(s), length "
                      << (res.success ? std::to_string(res.final_path.length) : "-")
                      << " m, cpu " << res.cpu_time << " s, wall " << res.wall_time << " s\n";
            for (const auto& line : res.instructions) std::cout << "  " << line << "\n";

            if (!plan_out.empty()) {
                spath::ResultDoc doc{res, q, plan_env, states};
                spit(plan_out, spath::result_to_json(doc) + "\n");
            }
            return res.success ? 0 : 2;
        }

        if (*replan_cmd) {
            spath::ResultDoc doc = spath::result_from_json(slurp(rep_result));
            spath::Environment env = env_with_states(doc.env_dir, doc.doorway_states);
            spath::SolutionCache cache;
            for (const auto& leg : doc.result.legs)
                if (leg.solved && !leg.path.waypoints.empty())
                    cache.insert(leg.sub.cache_key, leg.path);
            const spath::PlanResult res =
                spath::replan(env, rep_block, doc.result, cache, doc.query);

            std::cout << (res.success ? "replanned" : "FAILED") << ", cache hits "
                      << res.cache_hits << "/" << res.legs.size() << ", planner invocations "
                      << res.planner_invocations << ", cpu " << res.cpu_time << " s\n";
            for (const auto& line : res.instructions) std::cout << "  " << line << "\n";

            if (!rep_out.empty()) {
                auto states = doc.doorway_states;
                states[rep_block] = false;
                spath::ResultDoc out_doc{res, doc.query, doc.env_dir, states};
                spit(rep_out, spath::result_to_json(out_doc) + "\n");
            }
            return res.success ? 0 : 2;
        }

        if (*bench_cmd) {
            const spath::Scenario sc = spath::scenario_from_json(slurp(bench_scenario));
            spath::run_bench(sc, bench_trials, bench_points, bench_workers, bench_out);
            std::cout << "report written to " << bench_out << "\n";
            return 0;
        }

        if (*sp_cmd) {
            auto [sg, grid] = spath::load_env(sp_env);
            spath::Environment env = spath::setup(std::move(sg), std::move(grid));
            std::vector<std::string> ids;
            for (const auto& [id, room] : env.scene_graph.rooms) {
                (void)room;
                ids.push_back(id);
            }
            spath::Rng rng(sp_seed);
            std::vector<spath::Query> queries;
            for (int i = 0; i < sp_queries; ++i) {
                const auto a = ids[rng.below(ids.size())];
                auto b = ids[rng.below(ids.size())];
                while (b == a) b = ids[rng.below(ids.size())];
                spath::Query q;
                q.start = spath::Endpoint::in_room(a);
                q.goal = spath::Endpoint::in_room(b);
                q.seed = spath::derive_seed(sp_seed, i);
                queries.push_back(std::move(q));
            }
            const int workers =
                sp_workers > 0 ? sp_workers
                               : static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));
            const auto cases = spath::speedup(env, queries, sp_ttp_ms / 1000.0,
                                              spath::parse_planner(sp_planner), workers);
            nlohmann::json j;
            j["workers"] = workers;
            j["ttp_ms"] = sp_ttp_ms;
            j["planner"] = sp_planner;
            j["cases"] = nlohmann::json::array();
            for (const auto& c : cases) {
                std::cout << c.name << ": " << c.subproblems << " subproblems, speedup "
                          << c.speedup << "\n";
                j["cases"].push_back({{"name", c.name},
                                      {"subproblems", c.subproblems},
                                      {"seq_wall_s", c.seq_wall},
                                      {"par_wall_s", c.par_wall},
                                      {"speedup", c.speedup}});
            }
            if (!sp_out.empty()) spit(sp_out, j.dump(2) + "\n");
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
