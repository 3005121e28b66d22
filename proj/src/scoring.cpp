#include "lmdetect/scoring.hpp"

#include <set>

#include <json.hpp>

#include "lmdetect/errors.hpp"
#include "lmdetect/graph.hpp"
#include "lmdetect/time_util.hpp"

namespace lmd {

using ordered_json = nlohmann::ordered_json;

std::string to_string(DetectorVariant variant) {
    switch (variant) {
        case DetectorVariant::Full: return "full";
        case DetectorVariant::FirstTwo: return "first2";
        case DetectorVariant::FirstThree: return "first3";
    }
    return "full";
}

DetectorVariant variant_from_string(const std::string& text) {
    if (text == "full") return DetectorVariant::Full;
    if (text == "first2") return DetectorVariant::FirstTwo;
    if (text == "first3") return DetectorVariant::FirstThree;
    throw ConfigError("unknown detector variant '" + text + "' (expected full|first3|first2)");
}

double EdgeProbTable::prob(const std::string& src, const std::string& dst) const {
    auto it = seen_days.find({src, dst});
    if (it == seen_days.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(training_days);
}

EdgeProbTable learn_edge_probs(const EventStream& training, std::int64_t dedup_window) {
    if (training.events.empty()) throw ValidationError("training stream is empty");

    EdgeProbTable table;
    const std::int64_t first_day = utc_day_index(training.events.front().ts);
    const std::int64_t last_day = utc_day_index(training.events.back().ts);
    table.training_days = static_cast<int>(last_day - first_day + 1);

    AccessGraph graph = build_graph(training, dedup_window);
    std::map<std::pair<std::string, std::string>, std::set<std::int64_t>> days;
    for (const auto& edge : graph.edges) {
        days[{edge.src, edge.dst}].insert(utc_day_index(edge.ts));
    }
    for (const auto& [key, day_set] : days) {
        table.seen_days[key] = static_cast<int>(day_set.size());
    }
    return table;
}

std::string serialize_table(const EdgeProbTable& table) {
    ordered_json doc;
    doc["days"] = table.training_days;
    doc["edges"] = ordered_json::array();
    for (const auto& [key, seen] : table.seen_days) {
        doc["edges"].push_back({{"src", key.first}, {"dst", key.second}, {"seen", seen}});
    }
    return doc.dump(2) + "\n";
}

EdgeProbTable parse_table(const std::string& json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed edge probability table: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("days") || !doc.contains("edges")) {
        throw ValidationError("edge probability table must contain 'days' and 'edges'");
    }
    EdgeProbTable table;
    table.training_days = doc["days"].get<int>();
    if (table.training_days < 1) throw ValidationError("table days must be >= 1");
    for (const auto& e : doc["edges"]) {
        int seen = e.at("seen").get<int>();
        if (seen < 0 || seen > table.training_days) {
            throw ValidationError("table seen count out of [0, days] range");
        }
        table.seen_days[{e.at("src").get<std::string>(), e.at("dst").get<std::string>()}] = seen;
    }
    return table;
}

double ScoredPath::score(DetectorVariant variant) const {
    switch (variant) {
        case DetectorVariant::Full: return full;
        case DetectorVariant::FirstTwo: return first_two;
        case DetectorVariant::FirstThree: return first_three;
    }
    return full;
}

ScoredPath score_path(const Path& path, const EdgeProbTable& table, const Topology& topo) {
    double min_hh = 0.0, min_hc = 0.0;
    for (const auto& edge : path.edges) {
        const double p = table.prob(edge.src, edge.dst);
        if (p <= 0.0) continue;  // never-seen edges contribute nothing
        double& slot = edge.category == EdgeCategory::HostHost ? min_hh : min_hc;
        if (slot == 0.0 || p < slot) slot = p;
    }

    ScoredPath scored;
    scored.path = path;
    scored.sub.s1 = min_hh > 0.0 ? 1.0 / min_hh : 1.0;
    scored.sub.s2 = min_hc > 0.0 ? 1.0 / min_hc : 1.0;
    scored.sub.s3 = static_cast<double>(slices_touched(path, topo).size()) + 1.0;
    scored.sub.s4 = static_cast<double>(path.hop_count());
    scored.first_two = scored.sub.s1 * scored.sub.s2;
    scored.first_three = scored.first_two * scored.sub.s3;
    scored.full = scored.first_three * scored.sub.s4;
    return scored;
}

std::vector<ScoredPath> score_paths(const std::vector<Path>& paths, const EdgeProbTable& table,
                                    const Topology& topo) {
    std::vector<ScoredPath> out;
    out.reserve(paths.size());
    for (const auto& path : paths) out.push_back(score_path(path, table, topo));
    return out;
}

}  // namespace lmd
