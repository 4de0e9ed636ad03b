#pragma once
// Benchmark harness: success-rate curves over log-spaced time budgets,
// ttp95/l95 estimation by piecewise-linear interpolation in log time,
// the efficiency metrics relative to the baseline ablation, and the
// sequential-vs-parallel speedup protocol.
//
// Reports contain only virtual-clock quantities, so a bench run is bit
// reproducible from its master seed. Real wall times appear solely in the
// speedup measurements, which are kept out of the deterministic report.

#include <optional>
#include <string>
#include <vector>

#include "spath/pipeline.hpp"

namespace spath {

struct CurveSample {
    double ttp = 0.0;           // seconds
    double success_rate = 0.0;  // fraction in [0,1]
    double median_length = 0.0; // median over successful trials, NaN if none
    double min_length = 0.0;    // shortest over successful trials, NaN if none
};

struct SuccessCurve {
    std::vector<CurveSample> samples;  // strictly increasing ttp
    int trials = 0;
};

struct SweepConfig {
    double ttp_min = 0.001;
    double ttp_max = 6.0;
    int points = 12;
    int trials = 30;
    std::uint64_t seed = 0;
    int workers = 0;  // trial-level parallelism; 0 = hardware concurrency
};

// Runs `trials` independent queries per candidate budget (seeds derived from
// the master seed per trial) and records raw success fractions and length
// statistics. Rates are never smoothed.
SuccessCurve sweep(const Environment& env, const Query& query, const SweepConfig& cfg);

// Smallest budget at which the piecewise-linear interpolant (in log10 ttp)
// of the raw success rates first reaches 0.95. nullopt = "> ttp_max".
std::optional<double> ttp95(const SuccessCurve& curve);

struct EfficiencyRow {
    std::string ablation;
    std::optional<double> ttp95;  // seconds; nullopt renders as "> max"
    double l95 = 0.0;             // median length at the sample covering ttp95
    double l_conv = 0.0;          // shortest length observed at ttp_max
    double eta_ttp = 0.0;
    double eta_l = 0.0;
    double eta = 0.0;
    double eta_bar = 0.0;
    bool valid = false;  // false when ttp95 is the marker; etas render as "-"
};

EfficiencyRow curve_stats(const std::string& ablation, const SuccessCurve& curve);

// Fills the eta columns relative to the row named "baseline", which must be
// present with a finite ttp95. Marker rows propagate as invalid.
std::vector<EfficiencyRow> efficiency(std::vector<EfficiencyRow> rows);

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

struct SpeedupCase {
    std::string name;
    int subproblems = 0;
    double seq_wall = 0.0;  // real seconds
    double par_wall = 0.0;
    double speedup = 0.0;
};

// Runs each query sequentially and in parallel with identical seeds and
// reports wall-time ratios. Owns all workers while measuring.
std::vector<SpeedupCase> speedup(const Environment& env, std::vector<Query> queries,
                                 double ttp, PlannerKind planner, int workers);

struct ScenarioQuery {
    std::string name;
    Endpoint start;
    Endpoint goal;
};

struct Scenario {
    std::string env_dir;
    std::vector<ScenarioQuery> queries;
    std::vector<std::string> ablations;  // mode names
    std::vector<std::string> planners;
    std::vector<std::pair<std::string, bool>> blockages;  // doorway states to apply
    double ttp_min = 0.001;
    double ttp_max = 6.0;
    double robot_radius = 0.3;
    double merge_theta = kDefaultMergeTheta;
    std::uint64_t seed = 0;
};

Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& sc);

// Full protocol: sweeps every query x planner x ablation, writes per-curve
// CSVs, the efficiency table CSV and report.json into out_dir.
void run_bench(const Scenario& sc, int trials, int points, int workers,
               const std::string& out_dir);

}  // namespace spath
