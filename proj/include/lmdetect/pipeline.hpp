#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lmdetect/detect.hpp"
#include "lmdetect/eval.hpp"
#include "lmdetect/sim.hpp"

namespace lmd {

struct DetectionParams {
    std::int64_t tau = 28800;  // 8 h causal-session bound
    int max_hops = 16;
    std::int64_t dedup_window = 300;
    bool fp_filter = false;
    std::vector<DetectorVariant> variants = {DetectorVariant::Full, DetectorVariant::FirstThree,
                                             DetectorVariant::FirstTwo};
};

struct DetectionOutcome {
    EdgeProbTable table;
    AccessGraph train_graph;
    AccessGraph test_graph;
    std::vector<ScoredPath> train_scored;
    std::vector<ScoredPath> test_scored;
    std::map<DetectorVariant, DetectionReport> reports;
};

// Train-then-test in one pass: learn probabilities and thresholds on the
// training stream, enumerate and score test paths, detect per variant.
DetectionOutcome run_detection(const Topology& topo, const EventStream& training,
                               const EventStream& test, const DetectionParams& params);

struct RunConfig {
    std::optional<std::string> topology_path;  // default topology when absent
    std::optional<std::string> events_dir;     // load an existing dataset instead of simulating
    std::string out_dir = "out";
    DetectionParams params;
    std::uint64_t seed = 1;
    std::int64_t jitter = 300;
    std::vector<ScheduleEntry> schedule = default_schedule();
};

// JSON config mirroring RunConfig field names; every key optional.
RunConfig parse_run_config(const std::string& json_text);

struct ExperimentResult {
    Topology topology;
    SimOutput dataset;
    DetectionOutcome outcome;
    std::vector<MetricsRow> rows;
};

// simulate (or load) -> train -> detect -> evaluate; writes the dataset,
// per-variant reports, the learned table and metrics under out_dir.
// Failures are rethrown as StageError naming the stage.
ExperimentResult run_experiment(const RunConfig& config);

}  // namespace lmd
