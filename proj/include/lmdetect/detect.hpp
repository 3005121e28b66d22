#pragma once

#include <string>
#include <vector>

#include "lmdetect/graph.hpp"
#include "lmdetect/scoring.hpp"

namespace lmd {

// Anomaly threshold: the maximum cumulative training-path score for the
// variant (0 when no training paths exist). Test paths scoring strictly
// above alpha are flagged.
struct Threshold {
    DetectorVariant variant = DetectorVariant::Full;
    double alpha = 0.0;
};

Threshold calibrate_threshold(const std::vector<ScoredPath>& training_scored,
                              DetectorVariant variant);

struct DetectionReport {
    DetectorVariant variant = DetectorVariant::Full;
    double alpha = 0.0;
    std::vector<ScoredPath> flagged;          // canonical path order
    std::vector<AccessEdge> predicted_edges;  // sorted, set semantics
    bool filter_applied = false;
};

DetectionReport detect_paths(const std::vector<ScoredPath>& test_scored,
                             const Threshold& threshold);

// Drops flagged paths with exactly one host-container edge when that edge
// was observed in training (prob > 0); recomputes predicted_edges.
DetectionReport apply_fp_filter(const DetectionReport& report, const EdgeProbTable& table);

// Union of edges over flagged paths, deduplicated on
// (ts, src, dst, user, dst_account).
std::vector<AccessEdge> predicted_edge_set(const std::vector<ScoredPath>& flagged);

std::string serialize_report(const DetectionReport& report);

// Minimal fields needed downstream: variant, alpha, filter flag, predicted
// edges. Flagged path descriptors are not reconstructed.
struct ReportSummary {
    DetectorVariant variant = DetectorVariant::Full;
    double alpha = 0.0;
    bool filter_applied = false;
    std::vector<EdgeIdentity> predicted;
};

ReportSummary parse_report_summary(const std::string& json_text);

}  // namespace lmd
