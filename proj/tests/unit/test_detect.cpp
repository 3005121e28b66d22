#include <doctest.h>

#include "lmdetect/detect.hpp"
#include "lmdetect/errors.hpp"
#include "support/generators.hpp"

using namespace lmd;

namespace {

AccessEdge edge_of(std::int64_t ts, std::string src, std::string dst, EdgeCategory category,
                   std::string user = "u") {
    AccessEdge e;
    e.ts = ts;
    e.src = std::move(src);
    e.dst = std::move(dst);
    e.user = std::move(user);
    e.dst_account = "root";
    e.category = category;
    return e;
}

// ScoredPath with a given full score; sub-scores chosen so the variant
// identities stay consistent (s4 = hops, rest folded into s3).
ScoredPath scored_with(double full, std::vector<AccessEdge> edges) {
    ScoredPath scored;
    scored.path.edges = std::move(edges);
    scored.sub.s4 = static_cast<double>(scored.path.edges.size());
    scored.sub.s3 = full / scored.sub.s4;
    scored.first_two = 1.0;
    scored.first_three = scored.sub.s3;
    scored.full = full;
    return scored;
}

ScoredPath scored_single(double full, std::int64_t ts = 0) {
    return scored_with(full, {edge_of(ts, "A", "B", EdgeCategory::HostHost)});
}

}  // namespace

TEST_CASE("threshold is the training maximum") {
    CHECK(calibrate_threshold({scored_single(2), scored_single(2), scored_single(2)},
                              DetectorVariant::Full)
              .alpha == 2.0);
    CHECK(calibrate_threshold({}, DetectorVariant::Full).alpha == 0.0);
    CHECK(calibrate_threshold({scored_single(1), scored_single(3), scored_single(2)},
                              DetectorVariant::Full)
              .alpha == 3.0);
}

TEST_CASE("flagging is strictly above alpha") {
    Threshold threshold{DetectorVariant::Full, 2.0};
    CHECK(detect_paths({scored_single(9)}, threshold).flagged.size() == 1);
    CHECK(detect_paths({scored_single(2)}, threshold).flagged.empty());
    CHECK(detect_paths({scored_single(2)}, Threshold{DetectorVariant::Full, 1.9}).flagged.size() ==
          1);
}

TEST_CASE("report carries the union of flagged edges") {
    auto a = scored_with(10, {edge_of(0, "A", "B", EdgeCategory::HostHost),
                              edge_of(5, "B", "C", EdgeCategory::HostContainer)});
    auto b = scored_with(12, {edge_of(5, "B", "C", EdgeCategory::HostContainer),
                              edge_of(9, "C", "D", EdgeCategory::HostContainer)});
    DetectionReport report = detect_paths({a, b}, Threshold{DetectorVariant::Full, 1.0});
    CHECK(report.flagged.size() == 2);
    CHECK(report.predicted_edges.size() == 3);  // shared B->C counted once
    CHECK_FALSE(report.filter_applied);

    CHECK(predicted_edge_set({}).empty());
}

TEST_CASE("false-positive filter drops single trained host-container edges") {
    EdgeProbTable table;
    table.training_days = 1;
    table.seen_days[{"H-CP", "AMF"}] = 1;

    // two-hop benign-looking chain: fresh host login + trained exec
    auto chain = scored_with(6, {edge_of(0, "INTERNET", "H-CP", EdgeCategory::HostHost),
                                 edge_of(60, "H-CP", "AMF", EdgeCategory::HostContainer)});
    // two host-container edges: retained regardless of probabilities
    auto two_hc = scored_with(8, {edge_of(0, "H-CP", "AMF", EdgeCategory::HostContainer),
                                  edge_of(60, "AMF", "H-CP", EdgeCategory::HostContainer)});
    // single host-container edge never seen in training: retained
    auto fresh = scored_with(7, {edge_of(0, "INTERNET", "H-CP", EdgeCategory::HostHost),
                                 edge_of(60, "H-CP", "NSSF", EdgeCategory::HostContainer)});

    DetectionReport report =
        detect_paths({chain, two_hc, fresh}, Threshold{DetectorVariant::Full, 1.0});
    REQUIRE(report.flagged.size() == 3);

    DetectionReport filtered = apply_fp_filter(report, table);
    CHECK(filtered.filter_applied);
    REQUIRE(filtered.flagged.size() == 2);
    CHECK(filtered.flagged[0].full == 8.0);
    CHECK(filtered.flagged[1].full == 7.0);

    // filter never adds paths or edges
    CHECK(filtered.flagged.size() <= report.flagged.size());
    for (const auto& edge : filtered.predicted_edges) {
        CHECK(std::find(report.predicted_edges.begin(), report.predicted_edges.end(), edge) !=
              report.predicted_edges.end());
    }
}

TEST_CASE("host-only flagged paths survive the filter") {
    EdgeProbTable table;
    table.training_days = 1;
    auto host_only = scored_with(4, {edge_of(0, "A", "B", EdgeCategory::HostHost),
                                     edge_of(10, "B", "C", EdgeCategory::HostHost)});
    DetectionReport report = detect_paths({host_only}, Threshold{DetectorVariant::Full, 1.0});
    CHECK(apply_fp_filter(report, table).flagged.size() == 1);
}

TEST_CASE("training data never flags itself") {
    testsupport::Rng rng(2024);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<ScoredPath> training;
        const int n = rng.range(1, 20);
        for (int i = 0; i < n; ++i) {
            auto cc = testsupport::random_chain_case(rng, 4);
            training.push_back(score_path(cc.path, cc.table, cc.topo));
        }
        for (DetectorVariant variant :
             {DetectorVariant::Full, DetectorVariant::FirstThree, DetectorVariant::FirstTwo}) {
            Threshold threshold = calibrate_threshold(training, variant);
            CHECK(detect_paths(training, threshold).flagged.empty());
        }
    }
}

TEST_CASE("variant strings round trip and reject unknowns") {
    for (DetectorVariant variant :
         {DetectorVariant::Full, DetectorVariant::FirstThree, DetectorVariant::FirstTwo}) {
        CHECK(variant_from_string(to_string(variant)) == variant);
    }
    CHECK_THROWS_AS(variant_from_string("hopper"), ConfigError);
}

TEST_CASE("report serialization round trips the summary") {
    auto scored = scored_with(6, {edge_of(100, "INTERNET", "H-CP", EdgeCategory::HostHost),
                                  edge_of(160, "H-CP", "AMF", EdgeCategory::HostContainer)});
    DetectionReport report = detect_paths({scored}, Threshold{DetectorVariant::FirstThree, 1.5});
    ReportSummary summary = parse_report_summary(serialize_report(report));
    CHECK(summary.variant == DetectorVariant::FirstThree);
    CHECK(summary.alpha == 1.5);
    CHECK_FALSE(summary.filter_applied);
    REQUIRE(summary.predicted.size() == 2);
    CHECK(summary.predicted[0] == identity_of(report.predicted_edges[0]));
    CHECK(summary.predicted[1] == identity_of(report.predicted_edges[1]));
}
