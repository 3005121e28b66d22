#include "lmdetect/detect.hpp"

#include <algorithm>

#include <json.hpp>

#include "lmdetect/errors.hpp"

namespace lmd {

using ordered_json = nlohmann::ordered_json;

Threshold calibrate_threshold(const std::vector<ScoredPath>& training_scored,
                              DetectorVariant variant) {
    Threshold threshold{variant, 0.0};
    for (const auto& scored : training_scored) {
        threshold.alpha = std::max(threshold.alpha, scored.score(variant));
    }
    return threshold;
}

std::vector<AccessEdge> predicted_edge_set(const std::vector<ScoredPath>& flagged) {
    std::vector<AccessEdge> edges;
    for (const auto& scored : flagged) {
        edges.insert(edges.end(), scored.path.edges.begin(), scored.path.edges.end());
    }
    auto ident_less = [](const AccessEdge& a, const AccessEdge& b) {
        return std::tie(a.ts, a.src, a.dst, a.user, a.dst_account) <
               std::tie(b.ts, b.src, b.dst, b.user, b.dst_account);
    };
    auto ident_eq = [](const AccessEdge& a, const AccessEdge& b) {
        return std::tie(a.ts, a.src, a.dst, a.user, a.dst_account) ==
               std::tie(b.ts, b.src, b.dst, b.user, b.dst_account);
    };
    std::sort(edges.begin(), edges.end(), ident_less);
    edges.erase(std::unique(edges.begin(), edges.end(), ident_eq), edges.end());
    return edges;
}

DetectionReport detect_paths(const std::vector<ScoredPath>& test_scored,
                             const Threshold& threshold) {
    DetectionReport report;
    report.variant = threshold.variant;
    report.alpha = threshold.alpha;
    for (const auto& scored : test_scored) {
        if (scored.score(threshold.variant) > threshold.alpha) {
            report.flagged.push_back(scored);
        }
    }
    report.predicted_edges = predicted_edge_set(report.flagged);
    return report;
}

DetectionReport apply_fp_filter(const DetectionReport& report, const EdgeProbTable& table) {
    DetectionReport filtered;
    filtered.variant = report.variant;
    filtered.alpha = report.alpha;
    filtered.filter_applied = true;
    for (const auto& scored : report.flagged) {
        const AccessEdge* sole_hc = nullptr;
        int hc_count = 0;
        for (const auto& edge : scored.path.edges) {
            if (edge.category == EdgeCategory::HostContainer) {
                ++hc_count;
                sole_hc = &edge;
            }
        }
        if (hc_count == 1 && table.prob(sole_hc->src, sole_hc->dst) > 0.0) continue;
        filtered.flagged.push_back(scored);
    }
    filtered.predicted_edges = predicted_edge_set(filtered.flagged);
    return filtered;
}

std::string serialize_report(const DetectionReport& report) {
    ordered_json doc;
    doc["variant"] = to_string(report.variant);
    doc["alpha"] = report.alpha;
    doc["filter_applied"] = report.filter_applied;
    doc["flagged"] = ordered_json::array();
    for (const auto& scored : report.flagged) {
        ordered_json p;
        p["nodes"] = scored.path.node_sequence();
        ordered_json ts = ordered_json::array();
        for (const auto& edge : scored.path.edges) ts.push_back(edge.ts);
        p["timestamps"] = std::move(ts);
        p["user"] = scored.path.user();
        p["subscores"] = {{"s1", scored.sub.s1},
                          {"s2", scored.sub.s2},
                          {"s3", scored.sub.s3},
                          {"s4", scored.sub.s4}};
        p["score"] = {{"full", scored.full},
                      {"first3", scored.first_three},
                      {"first2", scored.first_two}};
        doc["flagged"].push_back(std::move(p));
    }
    doc["predicted_edges"] = ordered_json::array();
    for (const auto& edge : report.predicted_edges) {
        doc["predicted_edges"].push_back({{"ts", edge.ts},
                                          {"src", edge.src},
                                          {"dst", edge.dst},
                                          {"user", edge.user},
                                          {"dst_account", edge.dst_account},
                                          {"category", to_string(edge.category)}});
    }
    return doc.dump(2) + "\n";
}

ReportSummary parse_report_summary(const std::string& json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed detection report: ") + e.what());
    }
    ReportSummary summary;
    summary.variant = variant_from_string(doc.at("variant").get<std::string>());
    summary.alpha = doc.at("alpha").get<double>();
    summary.filter_applied = doc.value("filter_applied", false);
    for (const auto& e : doc.at("predicted_edges")) {
        summary.predicted.push_back({e.at("ts").get<std::int64_t>(), e.at("src").get<std::string>(),
                                     e.at("dst").get<std::string>(),
                                     e.at("user").get<std::string>()});
    }
    return summary;
}

}  // namespace lmd
