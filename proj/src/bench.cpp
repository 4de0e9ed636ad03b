#include "spath/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "spath/envgen.hpp"
#include "spath/rng.hpp"

namespace spath {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// A planner run with budget B is an exact prefix of the same run with a larger
// budget (termination is the only budget-dependent decision), so one full run
// per trial yields the result of every candidate budget via its improvement
// trace. Budgets allocated to subproblems scale proportionally with the query
// ttp, which keeps the property exact per leg.
struct TrialLeg {
    double share = 1.0;  // leg budget / query ttp
    double solved_at = -1.0;
    std::vector<std::pair<double, double>> trace;
};

struct TrialData {
    std::vector<TrialLeg> legs;
};

TrialData run_trial(const Environment& env, const Query& base, double ttp_max,
                    std::uint64_t seed) {
    Query q = base;
    q.ttp = ttp_max;
    q.seed = seed;
    SolutionCache fresh;  // trials are independent; no cross-trial reuse
    const PlanResult r = run(env, q, &fresh);
    TrialData out;
    for (const LegResult& leg : r.legs) {
        TrialLeg tl;
        tl.share = leg.sub.budget / ttp_max;
        tl.solved_at = leg.path.stats.solved_at;
        tl.trace = leg.path.stats.cost_trace;
        out.legs.push_back(std::move(tl));
    }
    return out;
}

// Best length recorded strictly before virtual time t, NaN if none.
double trace_value_before(const std::vector<std::pair<double, double>>& trace, double t) {
    double v = kNaN;
    for (const auto& [at, len] : trace) {
        if (at >= t) break;
        v = len;
    }
    return v;
}

double median(std::vector<double> v) {
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SuccessCurve sweep(const Environment& env, const Query& query, const SweepConfig& cfg) {
    if (!(cfg.ttp_min > 0.0) || !(cfg.ttp_min < cfg.ttp_max))
        throw Error("sweep: need 0 < ttp_min < ttp_max");
    if (cfg.points < 2 || cfg.trials < 1) throw Error("sweep: need points >= 2, trials >= 1");

    std::vector<double> budgets(cfg.points);
    for (int i = 0; i < cfg.points; ++i)
        budgets[i] = cfg.ttp_min *
                     std::pow(cfg.ttp_max / cfg.ttp_min,
                              static_cast<double>(i) / static_cast<double>(cfg.points - 1));
    budgets.back() = cfg.ttp_max;

    std::vector<TrialData> trials(cfg.trials);
    std::vector<std::string> errors(cfg.trials);
    // SPATH_PAR owns the worker pool itself; measure it serially.
    unsigned workers = query.mode == Mode::SPathPar
                           ? 1u
                           : (cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                              : std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min<unsigned>(workers, static_cast<unsigned>(cfg.trials));
    std::atomic<int> next{0};
    const auto worker = [&] {
        for (int t; (t = next.fetch_add(1)) < cfg.trials;) {
            try {
                trials[t] = run_trial(env, query, cfg.ttp_max, derive_seed(cfg.seed, t));
            } catch (const std::exception& e) {
                errors[t] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
        if (!err.empty()) throw Error("sweep trial failed: " + err);

    SuccessCurve curve;
    curve.trials = cfg.trials;
    for (const double b : budgets) {
        CurveSample s;
        s.ttp = b;
        std::vector<double> lengths;
        for (const TrialData& td : trials) {
            bool ok = !td.legs.empty();
            double len = 0.0;
            for (const TrialLeg& leg : td.legs) {
                const double tau = b * leg.share;
                if (leg.solved_at < 0.0 || leg.solved_at >= tau) {
                    ok = false;
                    break;
                }
                len += trace_value_before(leg.trace, tau);
            }
            if (ok) lengths.push_back(len);
        }
        s.success_rate = static_cast<double>(lengths.size()) / cfg.trials;
        s.median_length = median(lengths);
        s.min_length =
            lengths.empty() ? kNaN : *std::min_element(lengths.begin(), lengths.end());
        curve.samples.push_back(s);
    }
    return curve;
}

std::optional<double> ttp95(const SuccessCurve& curve) {
    constexpr double kTarget = 0.95;
    const auto& s = curve.samples;
    if (s.empty()) return std::nullopt;
    if (s.front().success_rate >= kTarget) return s.front().ttp;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double r0 = s[i - 1].success_rate;
        const double r1 = s[i].success_rate;
        if (r0 < kTarget && r1 >= kTarget) {
            const double lt0 = std::log10(s[i - 1].ttp);
            const double lt1 = std::log10(s[i].ttp);
            const double lt = lt0 + (kTarget - r0) / (r1 - r0) * (lt1 - lt0);
            return std::pow(10.0, lt);
        }
    }
    return std::nullopt;
}

EfficiencyRow curve_stats(const std::string& ablation, const SuccessCurve& curve) {
    EfficiencyRow row;
    row.ablation = ablation;
    row.ttp95 = ttp95(curve);
    row.l_conv = curve.samples.empty() ? kNaN : curve.samples.back().min_length;
    if (row.ttp95) {
        // Length is read at the sample nearest ttp95 from above.
        for (const CurveSample& s : curve.samples)
            if (s.ttp >= *row.ttp95 - 1e-12) {
                row.l95 = s.median_length;
                break;
            }
        row.valid = std::isfinite(row.l95) && std::isfinite(row.l_conv);
    } else {
        row.l95 = kNaN;
    }
    return row;
}

std::vector<EfficiencyRow> efficiency(std::vector<EfficiencyRow> rows) {
    const auto base = std::find_if(rows.begin(), rows.end(),
                                   [](const EfficiencyRow& r) { return r.ablation == "baseline"; });
    if (base == rows.end() || !base->valid)
        throw Error("efficiency: baseline ablation missing or without a finite ttp95");
    const double base_ttp = *base->ttp95;
    const double base_eta = (base->l_conv / base->l95) * 1.0;  // eta_ttp(baseline) = 1
    for (EfficiencyRow& r : rows) {
        if (!r.valid) {
            r.eta_ttp = r.eta_l = r.eta = r.eta_bar = kNaN;
            continue;
        }
        r.eta_ttp = base_ttp / *r.ttp95;
        r.eta_l = r.l_conv / r.l95;
        r.eta = r.eta_l * r.eta_ttp;
        r.eta_bar = r.eta / base_eta;
    }
    return rows;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw Error("spearman: need two equal-size vectors");
    const auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] - v[idx[i]] < 1e-12) ++j;
            const double avg = 0.5 * (i + j) + 1.0;  // average rank for ties
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) ma += ra[i], mb += rb[i];
    ma /= n;
    mb /= n;
    double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return cov / std::sqrt(va * vb);
}

std::vector<SpeedupCase> speedup(const Environment& env, std::vector<Query> queries, double ttp,
                                 PlannerKind planner, int workers) {
    if (workers < 2) throw Error("speedup: need at least two workers");
    std::vector<SpeedupCase> out;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        Query q = queries[i];
        q.ttp = ttp;
        q.planner.kind = planner;

        q.mode = Mode::SPathSeq;
        SolutionCache seq_cache;
        const PlanResult seq = run(env, q, &seq_cache);

        q.mode = Mode::SPathPar;
        q.workers = workers;
        SolutionCache par_cache;
        const PlanResult par = run(env, q, &par_cache);

        SpeedupCase sc;
        sc.name = "q" + std::to_string(i);
        sc.subproblems = static_cast<int>(seq.legs.size());
        sc.seq_wall = seq.wall_time;
        sc.par_wall = par.wall_time;
        sc.speedup = par.wall_time > 0.0 ? seq.wall_time / par.wall_time : 0.0;
        out.push_back(sc);
    }
    return out;
}

// ---------------------------------------------------------- scenario io ----

Scenario scenario_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("schema", "") != "spath-scenario/1")
        throw Error("scenario: unknown schema " + j.value("schema", "(none)"));
    Scenario sc;
    sc.env_dir = j.at("env").get<std::string>();
    for (const auto& q : j.at("queries")) {
        ScenarioQuery sq;
        sq.name = q.at("name").get<std::string>();
        const auto endpoint = [](const nlohmann::json& e) {
            if (e.contains("room")) return Endpoint::in_room(e.at("room").get<std::string>());
            return Endpoint::at({e.at("point").at(0).get<double>(), e.at("point").at(1).get<double>()});
        };
        sq.start = endpoint(q.at("start"));
        sq.goal = endpoint(q.at("goal"));
        sc.queries.push_back(std::move(sq));
    }
    sc.ablations = j.value("ablations", std::vector<std::string>{"baseline", "restricted", "spath-seq"});
    sc.planners = j.value("planners", std::vector<std::string>{"prmstar", "bitstar"});
    if (j.contains("blockages"))
        for (const auto& b : j.at("blockages"))
            sc.blockages.emplace_back(b.at("doorway").get<std::string>(),
                                      b.value("traversable", false));
    sc.ttp_min = j.value("ttp_min_ms", 1.0) / 1000.0;
    sc.ttp_max = j.value("ttp_max_ms", 6000.0) / 1000.0;
    sc.robot_radius = j.value("robot_radius", 0.3);
    sc.merge_theta = j.value("merge_theta", kDefaultMergeTheta);
    sc.seed = j.value("seed", 0ULL);
    return sc;
}

std::string scenario_to_json(const Scenario& sc) {
    nlohmann::json j;
    j["schema"] = "spath-scenario/1";
    j["env"] = sc.env_dir;
    j["queries"] = nlohmann::json::array();
    for (const auto& q : sc.queries) {
        nlohmann::json e;
        e["name"] = q.name;
        e["start"] = q.start.is_room ? nlohmann::json{{"room", q.start.room}}
                                     : nlohmann::json{{"point", {q.start.point.x, q.start.point.y}}};
        e["goal"] = q.goal.is_room ? nlohmann::json{{"room", q.goal.room}}
                                   : nlohmann::json{{"point", {q.goal.point.x, q.goal.point.y}}};
        j["queries"].push_back(std::move(e));
    }
    j["ablations"] = sc.ablations;
    j["planners"] = sc.planners;
    j["blockages"] = nlohmann::json::array();
    for (const auto& [id, open] : sc.blockages)
        j["blockages"].push_back({{"doorway", id}, {"traversable", open}});
    j["ttp_min_ms"] = sc.ttp_min * 1000.0;
    j["ttp_max_ms"] = sc.ttp_max * 1000.0;
    j["robot_radius"] = sc.robot_radius;
    j["merge_theta"] = sc.merge_theta;
    j["seed"] = sc.seed;
    return j.dump(2);
}

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
    if (std::isnan(v)) return "-";
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string ttp95_cell(const std::optional<double>& t, double ttp_max) {
    if (!t) return ">" + fmt(ttp_max * 1000.0, "%.2f");
    return fmt(*t * 1000.0, "%.2f");
}

nlohmann::json curve_json(const SuccessCurve& c) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CurveSample& s : c.samples) {
        nlohmann::json e;
        e["ttp_ms"] = s.ttp * 1000.0;
        e["success_rate"] = s.success_rate;
        e["median_length_m"] = std::isnan(s.median_length) ? nlohmann::json() : nlohmann::json(s.median_length);
        e["min_length_m"] = std::isnan(s.min_length) ? nlohmann::json() : nlohmann::json(s.min_length);
        arr.push_back(std::move(e));
    }
    return arr;
}

}  // namespace

void run_bench(const Scenario& sc, int trials, int points, int workers,
               const std::string& out_dir) {
    auto [sg, grid] = load_env(sc.env_dir);
    Environment env = setup(std::move(sg), std::move(grid));
    for (const auto& [id, open] : sc.blockages) env = with_doorway_state(env, id, open);

    std::filesystem::create_directories(out_dir);
    nlohmann::json report;
    report["schema"] = "spath-report/1";
    report["scenario"] = nlohmann::json::parse(scenario_to_json(sc));
    report["trials"] = trials;
    report["points"] = points;
    report["interpolation"] = "piecewise-linear in log10(ttp)";
    report["results"] = nlohmann::json::array();

    std::ofstream eff_csv(out_dir + "/efficiency.csv");
    eff_csv << "query,planner,ablation,ttp95_ms,l95_m,lconv_m,eta_ttp,eta_l,eta,eta_bar\n";

    for (const ScenarioQuery& sq : sc.queries) {
        for (const std::string& planner : sc.planners) {
            std::vector<EfficiencyRow> rows;
            nlohmann::json block;
            block["query"] = sq.name;
            block["planner"] = planner;
            block["curves"] = nlohmann::json::object();
            for (const std::string& ablation : sc.ablations) {
                Query q;
                q.start = sq.start;
                q.goal = sq.goal;
                q.mode = parse_mode(ablation);
                q.planner.kind = parse_planner(planner);
                q.planner.robot_radius = sc.robot_radius;
                q.merge_theta = sc.merge_theta;

                SweepConfig cfg;
                cfg.ttp_min = sc.ttp_min;
                cfg.ttp_max = sc.ttp_max;
                cfg.points = points;
                cfg.trials = trials;
                cfg.workers = workers;
                // Same per-trial seeds across ablations: paired comparisons.
                cfg.seed = Hasher().u64(sc.seed).str(sq.name).str(planner).value();

                const SuccessCurve curve = sweep(env, q, cfg);
                block["curves"][ablation] = curve_json(curve);

                std::ofstream csv(out_dir + "/curve_" + sq.name + "_" + planner + "_" + ablation +
                                  ".csv");
                csv << "ttp_ms,success_rate,median_length_m\n";
                for (const CurveSample& s : curve.samples)
                    csv << fmt(s.ttp * 1000.0, "%.4f") << "," << fmt(s.success_rate) << ","
                        << fmt(s.median_length) << "\n";

                rows.push_back(curve_stats(ablation, curve));
            }

            const bool has_baseline =
                std::any_of(rows.begin(), rows.end(), [](const EfficiencyRow& r) {
                    return r.ablation == "baseline" && r.valid;
                });
            if (has_baseline) rows = efficiency(std::move(rows));

            block["efficiency"] = nlohmann::json::array();
            for (const EfficiencyRow& r : rows) {
                nlohmann::json e;
                e["ablation"] = r.ablation;
                e["ttp95_ms"] = r.ttp95 ? nlohmann::json(*r.ttp95 * 1000.0) : nlohmann::json();
                e["l95_m"] = std::isnan(r.l95) ? nlohmann::json() : nlohmann::json(r.l95);
                e["lconv_m"] = std::isnan(r.l_conv) ? nlohmann::json() : nlohmann::json(r.l_conv);
                if (has_baseline && r.valid) {
                    e["eta_ttp"] = r.eta_ttp;
                    e["eta_l"] = r.eta_l;
                    e["eta"] = r.eta;
                    e["eta_bar"] = r.eta_bar;
                }
                block["efficiency"].push_back(std::move(e));

                eff_csv << sq.name << "," << planner << "," << r.ablation << ","
                        << ttp95_cell(r.ttp95, sc.ttp_max) << "," << fmt(r.l95, "%.2f") << ","
                        << fmt(r.l_conv, "%.2f") << ","
                        << fmt(has_baseline ? r.eta_ttp : kNaN, "%.3f") << ","
                        << fmt(has_baseline ? r.eta_l : kNaN, "%.3f") << ","
                        << fmt(has_baseline ? r.eta : kNaN, "%.3f") << ","
                        << fmt(has_baseline ? r.eta_bar : kNaN, "%.3f") << "\n";
            }
            report["results"].push_back(std::move(block));
        }
    }

    std::ofstream out(out_dir + "/report.json");
    out << report.dump(2) << "\n";
}

}  // namespace spath
