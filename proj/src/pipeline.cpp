#include "lmdetect/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "lmdetect/errors.hpp"
#include "lmdetect/ingest.hpp"

namespace lmd {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

DetectionOutcome run_detection(const Topology& topo, const EventStream& training,
                               const EventStream& test, const DetectionParams& params) {
    DetectionOutcome outcome;
    outcome.table = learn_edge_probs(training, params.dedup_window);
    outcome.train_graph = build_graph(training, params.dedup_window);
    outcome.test_graph = build_graph(test, params.dedup_window);

    auto train_paths = enumerate_paths(outcome.train_graph, params.tau, params.max_hops);
    auto test_paths = enumerate_paths(outcome.test_graph, params.tau, params.max_hops);
    outcome.train_scored = score_paths(train_paths, outcome.table, topo);
    outcome.test_scored = score_paths(test_paths, outcome.table, topo);

    for (DetectorVariant variant : params.variants) {
        Threshold threshold = calibrate_threshold(outcome.train_scored, variant);
        DetectionReport report = detect_paths(outcome.test_scored, threshold);
        if (params.fp_filter) report = apply_fp_filter(report, outcome.table);
        outcome.reports[variant] = std::move(report);
    }
    return outcome;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file '" + path.string() + "'");
    out << content;
}

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed run config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("run config must be a JSON object");

    static const std::set<std::string> kKnown = {"topology", "events",       "out",   "tau",
                                                 "max_hops", "dedup_window", "variants",
                                                 "fp_filter", "seed",        "jitter", "schedule"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!kKnown.count(it.key())) throw ConfigError("run config has unknown key '" + it.key() + "'");
    }

    RunConfig config;
    if (doc.contains("topology") && !doc["topology"].is_null()) {
        config.topology_path = doc["topology"].get<std::string>();
    }
    if (doc.contains("events") && !doc["events"].is_null()) {
        config.events_dir = doc["events"].get<std::string>();
    }
    if (doc.contains("out")) config.out_dir = doc["out"].get<std::string>();
    if (doc.contains("tau")) config.params.tau = doc["tau"].get<std::int64_t>();
    if (doc.contains("max_hops")) config.params.max_hops = doc["max_hops"].get<int>();
    if (doc.contains("dedup_window")) config.params.dedup_window = doc["dedup_window"].get<std::int64_t>();
    if (doc.contains("fp_filter")) config.params.fp_filter = doc["fp_filter"].get<bool>();
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("jitter")) config.jitter = doc["jitter"].get<std::int64_t>();
    if (doc.contains("variants")) {
        config.params.variants.clear();
        for (const auto& v : doc["variants"]) {
            config.params.variants.push_back(variant_from_string(v.get<std::string>()));
        }
        if (config.params.variants.empty()) throw ConfigError("variants must not be empty");
    }
    if (doc.contains("schedule")) {
        config.schedule.clear();
        for (const auto& entry : doc["schedule"]) {
            if (!entry.is_object() || !entry.contains("day") || !entry.contains("activity")) {
                throw ConfigError("schedule entries must be {day, activity} objects");
            }
            config.schedule.push_back(
                {entry["day"].get<int>(), parse_activity(entry["activity"].get<std::string>())});
        }
    }
    return config;
}

ExperimentResult run_experiment(const RunConfig& config) {
    ExperimentResult result;

    result.topology = stage("load-topology", [&] {
        if (config.topology_path) return load_topology(read_file(*config.topology_path));
        if (config.events_dir) {
            return load_topology(read_file((fs::path(*config.events_dir) / "topology.json").string()));
        }
        return make_default_topology();
    });

    const fs::path dataset_dir =
        config.events_dir ? fs::path(*config.events_dir) : fs::path(config.out_dir) / "dataset";

    stage("simulate", [&] {
        if (config.events_dir) return;  // pre-existing dataset
        SimConfig sim_config;
        sim_config.topology = result.topology;
        sim_config.seed = config.seed;
        sim_config.schedule = config.schedule;
        sim_config.jitter = config.jitter;
        SimOutput output = simulate(sim_config);
        write_dataset(sim_config, output, dataset_dir.string());
    });

    // The pipeline always runs from the written files so that the persisted
    // dataset is what gets detected on.
    EventStream training, test;
    stage("ingest", [&] {
        std::vector<std::string> train_files, test_files;
        for (const auto& entry : config.schedule) {
            auto file = (dataset_dir / ("day-" + std::to_string(entry.day) + ".jsonl")).string();
            (entry.activity.is_normal() ? train_files : test_files).push_back(file);
        }
        training = read_event_files(train_files, result.topology);
        test = read_event_files(test_files, result.topology);
        result.dataset.events.events = training.events;
        result.dataset.events.events.insert(result.dataset.events.events.end(),
                                            test.events.begin(), test.events.end());
        sort_events_canonical(result.dataset.events.events);
        result.dataset.truth = parse_truth(read_file((dataset_dir / "truth.json").string()));
    });

    stage("train", [&] {
        if (training.events.empty()) {
            throw ValidationError("training stream is empty (schedule has no normal days)");
        }
    });

    result.outcome = stage("detect", [&] {
        return run_detection(result.topology, training, test, config.params);
    });

    stage("evaluate", [&] {
        std::set<EdgeIdentity> universe;
        for (const auto& edge : result.outcome.test_graph.edges) universe.insert(identity_of(edge));
        std::set<EdgeIdentity> truth(result.dataset.truth.begin(), result.dataset.truth.end());
        for (DetectorVariant variant : config.params.variants) {
            const auto& report = result.outcome.reports.at(variant);
            std::set<EdgeIdentity> predicted;
            for (const auto& edge : report.predicted_edges) predicted.insert(identity_of(edge));
            result.rows.push_back({variant, evaluate_edges(predicted, truth, universe)});
        }
    });

    stage("write", [&] {
        fs::create_directories(config.out_dir);
        write_file(fs::path(config.out_dir) / "edge-probs.json", serialize_table(result.outcome.table));
        for (DetectorVariant variant : config.params.variants) {
            write_file(fs::path(config.out_dir) / ("report-" + to_string(variant) + ".json"),
                       serialize_report(result.outcome.reports.at(variant)));
        }
        write_file(fs::path(config.out_dir) / "metrics.csv", metrics_to_csv(result.rows));
        write_file(fs::path(config.out_dir) / "metrics.json", metrics_to_json(result.rows));
    });

    return result;
}

}  // namespace lmd
