#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lmdetect/graph.hpp"
#include "lmdetect/scoring.hpp"

namespace lmd {

// Edge-level confusion counts over a test-window universe.
struct Metrics {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::optional<double> tpr() const {
        if (tp + fn == 0) return std::nullopt;
        return static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    std::optional<double> fpr() const {
        if (fp + tn == 0) return std::nullopt;
        return static_cast<double>(fp) / static_cast<double>(fp + tn);
    }
};

// Confusion counts of `predicted` against `truth` over `universe`.
// Throws ValidationError when predicted or truth are not subsets of the
// universe.
Metrics evaluate_edges(const std::set<EdgeIdentity>& predicted,
                       const std::set<EdgeIdentity>& truth,
                       const std::set<EdgeIdentity>& universe);

struct MetricsRow {
    DetectorVariant variant = DetectorVariant::Full;
    Metrics metrics;
};

// CSV `algorithm,tp,fp,tpr,fpr` with rates as 2-decimal percentages;
// undefined rates render as empty fields (null in JSON).
std::string metrics_to_csv(const std::vector<MetricsRow>& rows);
std::string metrics_to_json(const std::vector<MetricsRow>& rows);

std::string serialize_truth(const std::vector<EdgeIdentity>& truth);
std::vector<EdgeIdentity> parse_truth(const std::string& json_text);

}  // namespace lmd
