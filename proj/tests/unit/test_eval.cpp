#include <set>

#include <doctest.h>

#include "lmdetect/errors.hpp"
#include "lmdetect/eval.hpp"
#include "support/generators.hpp"

using namespace lmd;

namespace {

EdgeIdentity ident(int i) { return {i, "s" + std::to_string(i), "d" + std::to_string(i), "u"}; }

std::set<EdgeIdentity> idents(int lo, int hi) {
    std::set<EdgeIdentity> out;
    for (int i = lo; i < hi; ++i) out.insert(ident(i));
    return out;
}

}  // namespace

TEST_CASE("published-count arithmetic reproduces the reference rates") {
    // 19 malicious edges all predicted, 1 of 12 benign edges wrongly flagged
    std::set<EdgeIdentity> truth = idents(0, 19);
    std::set<EdgeIdentity> universe = idents(0, 31);
    std::set<EdgeIdentity> predicted = idents(0, 20);

    Metrics m = evaluate_edges(predicted, truth, universe);
    CHECK(m.tp == 19);
    CHECK(m.fn == 0);
    CHECK(m.fp == 1);
    CHECK(m.tn == 11);
    CHECK(*m.tpr() == 1.0);
    CHECK(*m.fpr() == doctest::Approx(1.0 / 12.0).epsilon(1e-12));

    std::string csv = metrics_to_csv({{DetectorVariant::Full, m}});
    CHECK(csv == "algorithm,tp,fp,tpr,fpr\nfull,19,1,100.00,8.33\n");

    // 16 of 19 caught
    Metrics hopper2 = evaluate_edges(idents(0, 16), truth, idents(0, 19));
    CHECK(hopper2.tp == 16);
    CHECK(hopper2.fn == 3);
    CHECK(*hopper2.tpr() == doctest::Approx(16.0 / 19.0).epsilon(1e-12));
    std::string csv2 = metrics_to_csv({{DetectorVariant::FirstThree, hopper2}});
    CHECK(csv2.find("84.21") != std::string::npos);
}

TEST_CASE("counts partition the universe") {
    testsupport::Rng rng(1234);
    for (int iter = 0; iter < 100; ++iter) {
        std::set<EdgeIdentity> universe, truth, predicted;
        const int n = rng.range(0, 40);
        for (int i = 0; i < n; ++i) {
            universe.insert(ident(i));
            if (rng.chance(40)) truth.insert(ident(i));
            if (rng.chance(40)) predicted.insert(ident(i));
        }
        Metrics m = evaluate_edges(predicted, truth, universe);
        CHECK(m.tp + m.fp + m.tn + m.fn == static_cast<std::int64_t>(universe.size()));
        CHECK(m.tp + m.fn == static_cast<std::int64_t>(truth.size()));
        CHECK(m.fp + m.tp == static_cast<std::int64_t>(predicted.size()));
    }
}

TEST_CASE("out-of-universe edges are input errors") {
    std::set<EdgeIdentity> universe = idents(0, 5);
    CHECK_THROWS_AS(evaluate_edges(idents(4, 6), idents(0, 1), universe), ValidationError);
    CHECK_THROWS_AS(evaluate_edges(idents(0, 1), idents(4, 6), universe), ValidationError);
}

TEST_CASE("undefined rates render as null and empty fields") {
    Metrics m = evaluate_edges({}, {}, {});
    CHECK_FALSE(m.tpr().has_value());
    CHECK_FALSE(m.fpr().has_value());
    std::string csv = metrics_to_csv({{DetectorVariant::Full, m}});
    CHECK(csv == "algorithm,tp,fp,tpr,fpr\nfull,0,0,,\n");
    std::string json = metrics_to_json({{DetectorVariant::Full, m}});
    CHECK(json.find("\"tpr\": null") != std::string::npos);
    CHECK(json.find("\"fpr\": null") != std::string::npos);
}

TEST_CASE("truth serialization round trips") {
    std::vector<EdgeIdentity> truth = {{100, "A", "B", "u"}, {200, "C", "D", "v"}};
    CHECK(parse_truth(serialize_truth(truth)) == truth);
    CHECK_THROWS_AS(parse_truth(":("), ParseError);
}
