#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lmdetect/errors.hpp"
#include "lmdetect/ingest.hpp"
#include "lmdetect/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lmd::ConfigError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw lmd::ConfigError("cannot write file '" + path.string() + "'");
    out << content;
}

std::vector<lmd::ScheduleEntry> schedule_from_tokens(const std::string& csv) {
    std::vector<lmd::ScheduleEntry> schedule;
    std::stringstream ss(csv);
    std::string token;
    int day = 0;
    while (std::getline(ss, token, ',')) {
        schedule.push_back({++day, lmd::parse_activity(token)});
    }
    if (schedule.empty()) throw lmd::ConfigError("schedule must list at least one day");
    return schedule;
}

lmd::Topology topology_from_flag(const std::string& path) {
    return path.empty() ? lmd::make_default_topology() : lmd::load_topology(read_file(path));
}

int cmd_simulate(const std::string& topology_path, const std::string& out_dir,
                 std::uint64_t seed, const std::string& schedule_csv, std::int64_t jitter) {
    lmd::SimConfig config;
    config.topology = topology_from_flag(topology_path);
    config.seed = seed;
    config.jitter = jitter;
    if (!schedule_csv.empty()) config.schedule = schedule_from_tokens(schedule_csv);
    lmd::SimOutput output = lmd::simulate(config);
    lmd::write_dataset(config, output, out_dir);
    std::cout << "wrote " << config.schedule.size() << " day files, "
              << output.events.events.size() << " events (" << output.truth.size()
              << " malicious edges) to " << out_dir << "\n";
    return 0;
}

int cmd_detect(const std::string& topology_path, const std::vector<std::string>& train_files,
               const std::vector<std::string>& test_files,
               const std::vector<std::string>& variant_names, const lmd::DetectionParams& base,
               const std::string& out_dir, const std::string& dump_graph,
               const std::string& dump_paths) {
    lmd::Topology topo = topology_from_flag(topology_path);
    lmd::EventStream training = lmd::read_event_files(train_files, topo);
    lmd::EventStream test = lmd::read_event_files(test_files, topo);

    lmd::DetectionParams params = base;
    params.variants.clear();
    for (const auto& name : variant_names) params.variants.push_back(lmd::variant_from_string(name));

    lmd::DetectionOutcome outcome = lmd::run_detection(topo, training, test, params);

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "edge-probs.json", lmd::serialize_table(outcome.table));
    for (lmd::DetectorVariant variant : params.variants) {
        const auto& report = outcome.reports.at(variant);
        write_file(fs::path(out_dir) / ("report-" + lmd::to_string(variant) + ".json"),
                   lmd::serialize_report(report));
        std::cout << lmd::to_string(variant) << ": alpha=" << report.alpha << ", flagged "
                  << report.flagged.size() << " of " << outcome.test_scored.size()
                  << " paths, " << report.predicted_edges.size() << " predicted edges\n";
    }
    if (!dump_graph.empty()) write_file(dump_graph, lmd::edges_to_jsonl(outcome.test_graph.edges));
    if (!dump_paths.empty()) {
        std::vector<lmd::Path> paths;
        for (const auto& scored : outcome.test_scored) paths.push_back(scored.path);
        write_file(dump_paths, lmd::paths_to_jsonl(paths));
    }
    return 0;
}

int cmd_evaluate(const std::vector<std::string>& report_files, const std::string& truth_path,
                 const std::string& topology_path, const std::vector<std::string>& test_files,
                 std::int64_t dedup_window, const std::string& out_dir) {
    lmd::Topology topo = topology_from_flag(topology_path);
    lmd::EventStream test = lmd::read_event_files(test_files, topo);
    lmd::AccessGraph graph = lmd::build_graph(test, dedup_window);

    std::set<lmd::EdgeIdentity> universe;
    for (const auto& edge : graph.edges) universe.insert(lmd::identity_of(edge));
    auto truth_list = lmd::parse_truth(read_file(truth_path));
    std::set<lmd::EdgeIdentity> truth(truth_list.begin(), truth_list.end());

    std::vector<lmd::MetricsRow> rows;
    for (const auto& file : report_files) {
        lmd::ReportSummary summary = lmd::parse_report_summary(read_file(file));
        std::set<lmd::EdgeIdentity> predicted(summary.predicted.begin(), summary.predicted.end());
        rows.push_back({summary.variant, lmd::evaluate_edges(predicted, truth, universe)});
    }

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "metrics.csv", lmd::metrics_to_csv(rows));
    write_file(fs::path(out_dir) / "metrics.json", lmd::metrics_to_json(rows));
    std::cout << lmd::metrics_to_csv(rows);
    return 0;
}

int cmd_run_experiment(const std::string& config_path, std::uint64_t seed, bool seed_set,
                       const std::string& out_dir, bool fp_filter) {
    lmd::RunConfig config;
    if (!config_path.empty()) config = lmd::parse_run_config(read_file(config_path));
    if (seed_set) config.seed = seed;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (fp_filter) config.params.fp_filter = true;
    lmd::ExperimentResult result = lmd::run_experiment(config);
    std::cout << lmd::metrics_to_csv(result.rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lateral-movement detection for containerized 5G cores"};
    app.require_subcommand(1);

    // simulate
    std::string sim_topology, sim_out, sim_schedule;
    std::uint64_t sim_seed = 1;
    std::int64_t sim_jitter = 300;
    auto* sim = app.add_subcommand("simulate", "Generate a labeled event-log dataset");
    sim->add_option("--topology", sim_topology, "Topology JSON (default: built-in)");
    sim->add_option("--out", sim_out, "Output directory")->required();
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--schedule", sim_schedule,
                    "Comma list of day activities, e.g. normal,c1s1,c1s2,c2,c3s1,c3s2");
    sim->add_option("--jitter", sim_jitter, "Max random offset for normal-op event times (s)");

    // detect
    std::string det_topology, det_out = ".", det_dump_graph, det_dump_paths;
    std::vector<std::string> det_train, det_test, det_variants{"full"};
    lmd::DetectionParams det_params;
    auto* det = app.add_subcommand("detect", "Train on normal days, flag anomalous test paths");
    det->add_option("--topology", det_topology, "Topology JSON")->required();
    det->add_option("--train", det_train, "Training event files (normal days)")->required();
    det->add_option("--test", det_test, "Test event files")->required();
    det->add_option("--variant", det_variants, "Detector variant: full|first3|first2 (repeatable)")
        ->capture_default_str();
    det->add_option("--tau", det_params.tau, "Max gap between consecutive path edges (s)")
        ->capture_default_str();
    det->add_option("--max-hops", det_params.max_hops, "Path length cap")->capture_default_str();
    det->add_option("--dedup-window", det_params.dedup_window, "Edge dedup window (s)")
        ->capture_default_str();
    det->add_flag("--fp-filter", det_params.fp_filter,
                  "Drop flagged paths whose only host-container edge was seen in training");
    det->add_option("--out", det_out, "Report output directory")->capture_default_str();
    det->add_option("--dump-graph", det_dump_graph, "Write the test access graph as JSONL");
    det->add_option("--dump-paths", det_dump_paths, "Write enumerated test paths as JSONL");

    // evaluate
    std::string eva_truth, eva_topology, eva_out = ".";
    std::vector<std::string> eva_reports, eva_test;
    std::int64_t eva_dedup = 300;
    auto* eva = app.add_subcommand("evaluate", "Score detection reports against ground truth");
    eva->add_option("--report", eva_reports, "Detection report JSON (repeatable)")->required();
    eva->add_option("--truth", eva_truth, "truth.json with malicious edge identities")->required();
    eva->add_option("--topology", eva_topology, "Topology JSON")->required();
    eva->add_option("--test", eva_test, "Test event files (the edge universe)")->required();
    eva->add_option("--dedup-window", eva_dedup, "Edge dedup window (s)")->capture_default_str();
    eva->add_option("--out", eva_out, "Metrics output directory")->capture_default_str();

    // run-experiment
    std::string exp_config, exp_out;
    std::uint64_t exp_seed = 1;
    bool exp_fp_filter = false;
    auto* exp = app.add_subcommand("run-experiment",
                                   "simulate -> train -> detect -> evaluate in one shot");
    exp->add_option("--config", exp_config, "Run config JSON (default: built-in experiment)");
    auto* seed_opt = exp->add_option("--seed", exp_seed, "Override the config seed");
    exp->add_option("--out", exp_out, "Override the config output directory");
    exp->add_flag("--fp-filter", exp_fp_filter, "Enable the false-positive filter");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            return cmd_simulate(sim_topology, sim_out, sim_seed, sim_schedule, sim_jitter);
        }
        if (det->parsed()) {
            return cmd_detect(det_topology, det_train, det_test, det_variants, det_params,
                              det_out, det_dump_graph, det_dump_paths);
        }
        if (eva->parsed()) {
            return cmd_evaluate(eva_reports, eva_truth, eva_topology, eva_test, eva_dedup, eva_out);
        }
        if (exp->parsed()) {
            return cmd_run_experiment(exp_config, exp_seed, seed_opt->count() > 0, exp_out,
                                      exp_fp_filter);
        }
    } catch (const lmd::StageError& e) {
        std::cerr << "error " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
