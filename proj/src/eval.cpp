#include "lmdetect/eval.hpp"

#include <cstdio>

#include <json.hpp>

#include "lmdetect/errors.hpp"

namespace lmd {

using ordered_json = nlohmann::ordered_json;

Metrics evaluate_edges(const std::set<EdgeIdentity>& predicted,
                       const std::set<EdgeIdentity>& truth,
                       const std::set<EdgeIdentity>& universe) {
    for (const auto& e : predicted) {
        if (!universe.count(e)) {
            throw ValidationError("predicted edge (" + e.src + " -> " + e.dst + ", user " + e.user +
                                  ", ts " + std::to_string(e.ts) + ") is outside the universe");
        }
    }
    for (const auto& e : truth) {
        if (!universe.count(e)) {
            throw ValidationError("truth edge (" + e.src + " -> " + e.dst + ", user " + e.user +
                                  ", ts " + std::to_string(e.ts) + ") is outside the universe");
        }
    }

    Metrics m;
    for (const auto& e : universe) {
        const bool is_malicious = truth.count(e) > 0;
        const bool is_predicted = predicted.count(e) > 0;
        if (is_malicious && is_predicted) ++m.tp;
        else if (is_malicious) ++m.fn;
        else if (is_predicted) ++m.fp;
        else ++m.tn;
    }
    return m;
}

namespace {

std::string percent_or_empty(std::optional<double> rate) {
    if (!rate) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *rate * 100.0);
    return buf;
}

}  // namespace

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
    std::string out = "algorithm,tp,fp,tpr,fpr\n";
    for (const auto& row : rows) {
        out += to_string(row.variant);
        out += ',' + std::to_string(row.metrics.tp);
        out += ',' + std::to_string(row.metrics.fp);
        out += ',' + percent_or_empty(row.metrics.tpr());
        out += ',' + percent_or_empty(row.metrics.fpr());
        out += '\n';
    }
    return out;
}

std::string metrics_to_json(const std::vector<MetricsRow>& rows) {
    ordered_json doc;
    doc["rows"] = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json r;
        r["algorithm"] = to_string(row.variant);
        r["tp"] = row.metrics.tp;
        r["fp"] = row.metrics.fp;
        r["tn"] = row.metrics.tn;
        r["fn"] = row.metrics.fn;
        if (auto tpr = row.metrics.tpr()) r["tpr"] = *tpr; else r["tpr"] = nullptr;
        if (auto fpr = row.metrics.fpr()) r["fpr"] = *fpr; else r["fpr"] = nullptr;
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

std::string serialize_truth(const std::vector<EdgeIdentity>& truth) {
    ordered_json doc;
    doc["edges"] = ordered_json::array();
    for (const auto& e : truth) {
        doc["edges"].push_back({{"ts", e.ts}, {"src", e.src}, {"dst", e.dst}, {"user", e.user}});
    }
    return doc.dump(2) + "\n";
}

std::vector<EdgeIdentity> parse_truth(const std::string& json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed truth file: ") + e.what());
    }
    std::vector<EdgeIdentity> truth;
    for (const auto& e : doc.at("edges")) {
        truth.push_back({e.at("ts").get<std::int64_t>(), e.at("src").get<std::string>(),
                         e.at("dst").get<std::string>(), e.at("user").get<std::string>()});
    }
    return truth;
}

}  // namespace lmd
